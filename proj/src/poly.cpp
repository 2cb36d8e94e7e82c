// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include "hvsolve/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "hvsolve/error.hpp"

namespace hvs
{

ExponentVector::ExponentVector(std::size_t dim)
{
  if (dim > kMaxVariables)
  {
    throw Error(ErrorCode::InvalidArgument,
                "at most " + std::to_string(kMaxVariables) + " variables are supported");
  }
  size_ = static_cast<std::uint8_t>(dim);
}

ExponentVector::ExponentVector(std::initializer_list<int> entries)
  : ExponentVector(std::span<const int>(entries.begin(), entries.size()))
{
}

ExponentVector::ExponentVector(std::span<const int> entries) : ExponentVector(entries.size())
{
  std::copy(entries.begin(), entries.end(), e_.begin());
}

ExponentVector ExponentVector::Unit(std::size_t dim, std::size_t axis)
{
  ExponentVector e(dim);
  e[axis] = 1;
  return e;
}

int ExponentVector::TotalDegree() const
{
  int s = 0;
  for (int v : *this)
  {
    s += v;
  }
  return s;
}

bool ExponentVector::IsNonNegative() const
{
  return std::all_of(begin(), end(), [](int v) { return v >= 0; });
}

ExponentVector ExponentVector::Erase(std::size_t axis) const
{
  ExponentVector r(size_ - 1);
  for (std::size_t i = 0, j = 0; i < size_; ++i)
  {
    if (i != axis)
    {
      r[j++] = e_[i];
    }
  }
  return r;
}

ExponentVector ExponentVector::Insert(std::size_t axis, int value) const
{
  ExponentVector r(size_ + 1u);
  for (std::size_t i = 0, j = 0; i < r.size(); ++i)
  {
    r[i] = (i == axis) ? value : e_[j++];
  }
  return r;
}

ExponentVector operator+(const ExponentVector &a, const ExponentVector &b)
{
  ExponentVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    r[i] = a[i] + b[i];
  }
  return r;
}

ExponentVector operator-(const ExponentVector &a, const ExponentVector &b)
{
  ExponentVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    r[i] = a[i] - b[i];
  }
  return r;
}

std::string ToString(const ExponentVector &e)
{
  std::string s = "(";
  for (std::size_t i = 0; i < e.size(); ++i)
  {
    if (i)
    {
      s += ',';
    }
    s += std::to_string(e[i]);
  }
  return s + ")";
}

std::string MonomialString(const ExponentVector &e, std::span<const std::string> names)
{
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i)
  {
    if (e[i] == 0)
    {
      continue;
    }
    if (!s.empty())
    {
      s += '*';
    }
    s += names[i];
    if (e[i] != 1)
    {
      s += '^' + std::to_string(e[i]);
    }
  }
  return s.empty() ? "1" : s;
}

std::vector<ExponentVector> ParamPolynomial::Support() const
{
  std::vector<ExponentVector> s;
  s.reserve(terms.size());
  for (const auto &t : terms)
  {
    s.push_back(t.exponent);
  }
  std::sort(s.begin(), s.end());
  return s;
}

int ParamPolynomial::MaxExponent(std::size_t var) const
{
  int m = 0;
  for (const auto &t : terms)
  {
    m = std::max(m, t.exponent[var]);
  }
  return m;
}

PolySystem::PolySystem(std::vector<std::string> variables, std::vector<CoeffSlot> slots,
                       std::vector<ParamPolynomial> polys, bool allow_shared_slots)
  : variables_(std::move(variables)), slots_(std::move(slots)), polys_(std::move(polys))
{
  const std::size_t n = variables_.size();
  if (n == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "system has no variables");
  }
  if (n > kMaxVariables)
  {
    throw Error(ErrorCode::InvalidArgument, "too many variables");
  }
  if (polys_.size() < n)
  {
    throw Error(ErrorCode::InvalidArgument,
                "system is underdetermined: " + std::to_string(polys_.size()) +
                    " polynomials in " + std::to_string(n) + " variables");
  }
  std::set<std::string> names(variables_.begin(), variables_.end());
  if (names.size() != n)
  {
    throw Error(ErrorCode::InvalidArgument, "duplicate variable name");
  }
  std::set<std::string> slot_names;
  for (const auto &s : slots_)
  {
    if (!slot_names.insert(s.name).second)
    {
      throw Error(ErrorCode::InvalidArgument, "duplicate slot name '" + s.name + "'");
    }
    if (names.count(s.name))
    {
      throw Error(ErrorCode::InvalidArgument, "slot '" + s.name + "' shadows a variable");
    }
  }
  std::vector<int> uses(slots_.size(), 0);
  std::vector<bool> var_used(n, false);
  for (std::size_t i = 0; i < polys_.size(); ++i)
  {
    const auto &p = polys_[i];
    if (p.terms.empty())
    {
      throw Error(ErrorCode::InvalidArgument, "polynomial '" + p.name + "' has no terms");
    }
    std::set<ExponentVector> seen;
    for (const auto &t : p.terms)
    {
      if (t.exponent.size() != n || !t.exponent.IsNonNegative())
      {
        throw Error(ErrorCode::InvalidArgument, "bad exponent in '" + p.name + "'");
      }
      if (!seen.insert(t.exponent).second)
      {
        throw Error(ErrorCode::InvalidArgument,
                    "repeated monomial " + MonomialString(t.exponent, variables_) + " in '" +
                        p.name + "'");
      }
      if (t.slot >= slots_.size())
      {
        throw Error(ErrorCode::InvalidArgument, "term references unknown slot");
      }
      uses[t.slot]++;
      for (std::size_t v = 0; v < n; ++v)
      {
        var_used[v] = var_used[v] || t.exponent[v] > 0;
      }
    }
  }
  for (std::size_t s = 0; s < slots_.size(); ++s)
  {
    if (uses[s] == 0)
    {
      throw Error(ErrorCode::InvalidArgument, "slot '" + slots_[s].name + "' is unused");
    }
    if (uses[s] > 1)
    {
      if (!allow_shared_slots)
      {
        throw Error(ErrorCode::InvalidArgument, "slot '" + slots_[s].name + "' is shared");
      }
      shared_ = true;
    }
  }
  for (std::size_t v = 0; v < n; ++v)
  {
    if (!var_used[v])
    {
      throw Error(ErrorCode::InvalidArgument,
                  "variable '" + variables_[v] + "' appears in no term");
    }
  }
}

std::optional<SlotId> PolySystem::FindSlot(std::string_view name) const
{
  for (std::size_t s = 0; s < slots_.size(); ++s)
  {
    if (slots_[s].name == name)
    {
      return static_cast<SlotId>(s);
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> PolySystem::FindVariable(std::string_view name) const
{
  auto it = std::find(variables_.begin(), variables_.end(), name);
  if (it == variables_.end())
  {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - variables_.begin());
}

void ValidateInstance(const PolySystem &sys, const CoefficientInstance &inst)
{
  if (inst.size() != sys.num_slots())
  {
    throw Error(ErrorCode::MissingSlot, "instance has " + std::to_string(inst.size()) +
                                            " values but the system has " +
                                            std::to_string(sys.num_slots()) + " slots");
  }
  for (std::size_t s = 0; s < inst.size(); ++s)
  {
    if (!std::isfinite(inst[static_cast<SlotId>(s)]))
    {
      throw Error(ErrorCode::NonFinite, "slot '" + sys.slots()[s].name + "' is not finite");
    }
  }
}

namespace
{

class Scanner
{
public:
  Scanner(std::string_view text, std::size_t line, std::size_t start = 0)
    : text_(text), line_(line), pos_(start)
  {
  }

  void SkipSpace()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
    {
      ++pos_;
    }
  }

  bool AtEnd()
  {
    SkipSpace();
    return pos_ >= text_.size();
  }

  bool Accept(char c)
  {
    SkipSpace();
    if (pos_ < text_.size() && text_[pos_] == c)
    {
      ++pos_;
      return true;
    }
    return false;
  }

  void Expect(char c)
  {
    if (!Accept(c))
    {
      Fail(std::string("expected '") + c + "'");
    }
  }

  std::optional<std::string> TryName()
  {
    SkipSpace();
    std::size_t start = pos_;
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
    {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      {
        ++pos_;
      }
      return std::string(text_.substr(start, pos_ - start));
    }
    return std::nullopt;
  }

  std::string Name()
  {
    auto n = TryName();
    if (!n)
    {
      Fail("expected a name");
    }
    return *n;
  }

  int Integer()
  {
    SkipSpace();
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc() || value < 0)
    {
      Fail("expected a non-negative integer exponent");
    }
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  // Column of the next non-space character, 1-based.
  std::size_t Column()
  {
    SkipSpace();
    return pos_ + 1;
  }

  [[noreturn]] void Fail(const std::string &msg) { FailAt(Column(), msg); }

  [[noreturn]] void FailAt(std::size_t column, const std::string &msg)
  {
    throw Error(ErrorCode::Parse,
                "line " + std::to_string(line_) + ", column " + std::to_string(column) + ": " +
                    msg);
  }

private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

struct Statement
{
  std::string_view text;  // line prefix ending at the statement's end
  std::size_t start;      // statement offset within the line
  std::size_t line;
};

std::vector<Statement> SplitStatements(std::string_view text)
{
  std::vector<Statement> out;
  std::size_t line = 1;
  std::size_t start = 0;
  while (start <= text.size())
  {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
    {
      end = text.size();
    }
    std::string_view l = text.substr(start, end - start);
    if (auto hash = l.find('#'); hash != std::string_view::npos)
    {
      l = l.substr(0, hash);
    }
    std::size_t s = 0;
    while (s <= l.size())
    {
      std::size_t e = l.find(';', s);
      if (e == std::string_view::npos)
      {
        e = l.size();
      }
      std::string_view stmt = l.substr(s, e - s);
      if (stmt.find_first_not_of(" \t\r") != std::string_view::npos)
      {
        out.push_back({l.substr(0, e), s, line});
      }
      s = e + 1;
    }
    start = end + 1;
    ++line;
  }
  return out;
}

}  // namespace

PolySystem ParseSystem(std::string_view text)
{
  std::vector<std::string> vars;
  std::unordered_map<std::string, std::size_t> var_index;
  std::vector<CoeffSlot> slots;
  std::unordered_map<std::string, SlotId> slot_index;
  std::vector<ParamPolynomial> polys;
  std::set<std::string> poly_names;
  bool have_vars = false;

  for (const auto &stmt : SplitStatements(text))
  {
    Scanner sc(stmt.text, stmt.line, stmt.start);
    std::size_t head_col = sc.Column();
    std::string head = sc.Name();
    if (head == "vars" && sc.Accept(':'))
    {
      if (have_vars)
      {
        sc.FailAt(head_col, "duplicate 'vars' declaration");
      }
      have_vars = true;
      while (!sc.AtEnd())
      {
        std::size_t col = sc.Column();
        std::string v = sc.Name();
        if (var_index.count(v))
        {
          sc.FailAt(col, "duplicate variable '" + v + "'");
        }
        var_index[v] = vars.size();
        vars.push_back(v);
      }
      if (vars.empty())
      {
        sc.Fail("'vars' declares no variables");
      }
      if (vars.size() > kMaxVariables)
      {
        sc.FailAt(head_col, "at most " + std::to_string(kMaxVariables) + " variables");
      }
      continue;
    }
    if (!have_vars)
    {
      sc.FailAt(head_col, "polynomial before 'vars' declaration");
    }
    std::string name = head;
    if (head == "poly" && !sc.Accept(':'))
    {
      name = sc.Name();
      sc.Expect(':');
    }
    else if (head != "poly")
    {
      sc.Expect(':');
    }
    if (!poly_names.insert(name).second)
    {
      sc.FailAt(head_col, "duplicate polynomial '" + name + "'");
    }
    ParamPolynomial poly;
    poly.name = name;
    std::set<ExponentVector> seen;
    do
    {
      std::size_t term_col = sc.Column();
      std::string slot = sc.Name();
      if (var_index.count(slot))
      {
        sc.FailAt(term_col, "term must start with a coefficient slot, got variable '" + slot +
                                "'");
      }
      if (slot_index.count(slot))
      {
        sc.FailAt(term_col, "duplicate slot name '" + slot + "'");
      }
      ExponentVector e(vars.size());
      std::vector<bool> mentioned(vars.size(), false);
      while (sc.Accept('*'))
      {
        std::size_t col = sc.Column();
        std::string v = sc.Name();
        auto it = var_index.find(v);
        if (it == var_index.end())
        {
          sc.FailAt(col, "unknown variable '" + v + "'");
        }
        if (mentioned[it->second])
        {
          sc.FailAt(col, "variable '" + v + "' repeated in one term");
        }
        mentioned[it->second] = true;
        e[it->second] = sc.Accept('^') ? sc.Integer() : 1;
      }
      if (!seen.insert(e).second)
      {
        sc.FailAt(term_col, "monomial " + MonomialString(e, vars) + " repeated in '" + name + "'");
      }
      auto id = static_cast<SlotId>(slots.size());
      slot_index[slot] = id;
      slots.push_back({slot, polys.size(), e});
      poly.terms.push_back({e, id});
    } while (sc.Accept('+'));
    if (!sc.AtEnd())
    {
      sc.Fail("unexpected input");
    }
    polys.push_back(std::move(poly));
  }
  if (!have_vars)
  {
    throw Error(ErrorCode::Parse, "line 1, column 1: missing 'vars' declaration");
  }
  try
  {
    return PolySystem(std::move(vars), std::move(slots), std::move(polys));
  }
  catch (const Error &e)
  {
    throw Error(ErrorCode::Parse, e.what());
  }
}

std::string FormatSystem(const PolySystem &sys)
{
  std::ostringstream os;
  os << "vars:";
  for (const auto &v : sys.variables())
  {
    os << ' ' << v;
  }
  os << '\n';
  for (const auto &p : sys.polys())
  {
    os << "poly " << p.name << ':';
    for (std::size_t k = 0; k < p.terms.size(); ++k)
    {
      const auto &t = p.terms[k];
      os << (k ? " + " : " ") << sys.slots()[t.slot].name;
      for (std::size_t v = 0; v < t.exponent.size(); ++v)
      {
        if (t.exponent[v] == 1)
        {
          os << '*' << sys.variables()[v];
        }
        else if (t.exponent[v] > 1)
        {
          os << '*' << sys.variables()[v] << '^' << t.exponent[v];
        }
      }
    }
    os << '\n';
  }
  return os.str();
}

CoefficientInstance ParseInstance(std::string_view text, const PolySystem &sys)
{
  std::vector<std::optional<double>> values(sys.num_slots());
  std::size_t line = 0;
  std::size_t start = 0;
  while (start < text.size())
  {
    ++line;
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
    {
      end = text.size();
    }
    std::string_view l = text.substr(start, end - start);
    start = end + 1;
    if (auto hash = l.find('#'); hash != std::string_view::npos)
    {
      l = l.substr(0, hash);
    }
    if (l.find_first_not_of(" \t\r") == std::string_view::npos)
    {
      continue;
    }
    Scanner sc(l, line);
    std::size_t col = sc.Column();
    std::string name = sc.Name();
    sc.Expect('=');
    auto id = sys.FindSlot(name);
    if (!id)
    {
      sc.FailAt(col, "unknown slot '" + name + "'");
    }
    if (values[*id])
    {
      sc.FailAt(col, "slot '" + name + "' assigned twice");
    }
    std::string rest(l.substr(l.find('=') + 1));
    std::size_t used = 0;
    double v = 0.0;
    try
    {
      v = std::stod(rest, &used);
    }
    catch (const std::exception &)
    {
      sc.Fail("expected a number");
    }
    if (rest.find_first_not_of(" \t\r", used) != std::string::npos)
    {
      sc.Fail("trailing characters after value");
    }
    if (!std::isfinite(v))
    {
      throw Error(ErrorCode::NonFinite, "slot '" + name + "' is not finite");
    }
    values[*id] = v;
  }
  std::vector<double> out(values.size());
  for (std::size_t s = 0; s < values.size(); ++s)
  {
    if (!values[s])
    {
      throw Error(ErrorCode::MissingSlot, "no value for slot '" + sys.slots()[s].name + "'");
    }
    out[s] = *values[s];
  }
  return CoefficientInstance(std::move(out));
}

std::string FormatInstance(const PolySystem &sys, const CoefficientInstance &inst)
{
  std::ostringstream os;
  os.precision(17);
  for (std::size_t s = 0; s < sys.num_slots(); ++s)
  {
    os << sys.slots()[s].name << " = " << inst[static_cast<SlotId>(s)] << '\n';
  }
  return os.str();
}

std::vector<std::complex<double>> EvaluateComplex(const PolySystem &sys,
                                                  const CoefficientInstance &inst,
                                                  std::span<const std::complex<double>> point)
{
  ValidateInstance(sys, inst);
  if (point.size() != sys.num_variables())
  {
    throw Error(ErrorCode::InvalidArgument, "point has wrong dimension");
  }
  std::vector<std::complex<double>> out;
  out.reserve(sys.num_polys());
  for (const auto &p : sys.polys())
  {
    std::complex<double> acc = 0.0;
    for (const auto &t : p.terms)
    {
      std::complex<double> m = inst[t.slot];
      for (std::size_t v = 0; v < point.size(); ++v)
      {
        for (int k = 0; k < t.exponent[v]; ++k)
        {
          m *= point[v];
        }
      }
      acc += m;
    }
    out.push_back(acc);
  }
  return out;
}

std::vector<double> Evaluate(const PolySystem &sys, const CoefficientInstance &inst,
                             std::span<const std::complex<double>> point)
{
  auto values = EvaluateComplex(sys, inst, point);
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [](std::complex<double> z) { return std::abs(z); });
  return out;
}

std::vector<double> CoefficientNorms(const PolySystem &sys, const CoefficientInstance &inst)
{
  std::vector<double> out;
  for (const auto &p : sys.polys())
  {
    double s = 0.0;
    for (const auto &t : p.terms)
    {
      s += std::abs(inst[t.slot]);
    }
    out.push_back(s);
  }
  return out;
}

std::vector<ExponentVector> ProjectedPolynomial::Support() const
{
  std::vector<ExponentVector> s;
  for (const auto &[base, _] : terms)
  {
    s.push_back(base);
  }
  return s;
}

ProjectedSystem HideVariable(const PolySystem &sys, std::size_t hidden)
{
  if (hidden >= sys.num_variables())
  {
    throw Error(ErrorCode::InvalidArgument, "hidden variable index out of range");
  }
  ProjectedSystem ps;
  ps.hidden_index = hidden;
  for (std::size_t v = 0; v < sys.num_variables(); ++v)
  {
    if (v != hidden)
    {
      ps.base_variables.push_back(sys.variables()[v]);
    }
  }
  for (const auto &p : sys.polys())
  {
    ProjectedPolynomial pp;
    for (const auto &t : p.terms)
    {
      int deg = t.exponent[hidden];
      pp.terms[t.exponent.Erase(hidden)].push_back({deg, t.slot});
      ps.hidden_degree = std::max(ps.hidden_degree, deg);
    }
    for (auto &[_, list] : pp.terms)
    {
      std::sort(list.begin(), list.end(),
                [](const HiddenTerm &a, const HiddenTerm &b) {
                  return a.hidden_degree < b.hidden_degree;
                });
    }
    ps.polys.push_back(std::move(pp));
  }
  return ps;
}

std::vector<std::vector<Term>> ProjectedSystem::Reassemble() const
{
  std::vector<std::vector<Term>> out;
  for (const auto &pp : polys)
  {
    std::vector<Term> terms;
    for (const auto &[base, list] : pp.terms)
    {
      for (const auto &ht : list)
      {
        terms.push_back({base.Insert(hidden_index, ht.hidden_degree), ht.slot});
      }
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term &a, const Term &b) { return a.exponent < b.exponent; });
    out.push_back(std::move(terms));
  }
  return out;
}

}  // namespace hvs
