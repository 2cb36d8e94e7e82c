// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include "hvsolve/template.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "hvsolve/error.hpp"

namespace hvs
{

using nlohmann::json;

std::size_t ReductionSchedule::CountEliminates() const
{
  return static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [](const ScheduleOp &op) {
    return op.kind == ScheduleOp::Kind::Eliminate;
  }));
}

std::size_t ReductionSchedule::CountRemoves() const
{
  return ops.size() - CountEliminates();
}

std::vector<PlacementEntry> BuildPlacement(const PolySystem &sys, std::size_t hidden,
                                           const std::vector<ExponentVector> &columns,
                                           const std::vector<RowSpec> &rows)
{
  std::map<ExponentVector, std::size_t> col_of;
  for (std::size_t c = 0; c < columns.size(); ++c)
  {
    col_of[columns[c]] = c;
  }
  std::vector<PlacementEntry> out;
  for (std::size_t r = 0; r < rows.size(); ++r)
  {
    const auto &row = rows[r];
    if (row.poly >= sys.num_polys())
    {
      throw Error(ErrorCode::InvalidArgument, "row references an unknown polynomial");
    }
    for (const auto &t : sys.polys()[row.poly].terms)
    {
      auto it = col_of.find(t.exponent.Erase(hidden) + row.multiplier);
      if (it == col_of.end())
      {
        throw Error(ErrorCode::InvalidArgument, "row " + std::to_string(r) +
                                                    " has a monomial outside the basis");
      }
      out.push_back({r, it->second, t.exponent[hidden], t.slot});
    }
  }
  std::sort(out.begin(), out.end(), [](const PlacementEntry &a, const PlacementEntry &b) {
    return std::tie(a.row, a.col, a.hidden_degree) < std::tie(b.row, b.col, b.hidden_degree);
  });
  return out;
}

namespace
{

constexpr const char *kFormatName = "hvsolve-template";

json ExpJson(const ExponentVector &e)
{
  return json(std::vector<int>(e.begin(), e.end()));
}

ExponentVector ExpFrom(const json &j)
{
  auto v = j.get<std::vector<int>>();
  return ExponentVector(std::span<const int>(v));
}

[[noreturn]] void Corrupt(const std::string &what)
{
  throw Error(ErrorCode::Integrity, "template integrity error: " + what);
}

void Check(bool ok, const std::string &what)
{
  if (!ok)
  {
    Corrupt(what);
  }
}

}  // namespace

std::string SerializeTemplate(const SolverTemplate &t)
{
  const auto &sys = t.system;
  json j;
  j["format"] = kFormatName;
  j["version"] = SolverTemplate::kFormatVersion;
  j["variables"] = sys.variables();
  json slots = json::array();
  for (const auto &s : sys.slots())
  {
    slots.push_back({{"name", s.name}, {"poly", s.poly_index}, {"exponent", ExpJson(s.exponent)}});
  }
  j["slots"] = slots;
  json polys = json::array();
  for (const auto &p : sys.polys())
  {
    json terms = json::array();
    for (const auto &term : p.terms)
    {
      terms.push_back({term.slot, ExpJson(term.exponent)});
    }
    polys.push_back({{"name", p.name}, {"terms", terms}});
  }
  j["polys"] = polys;
  j["hidden"] = t.hidden_index;
  j["subset"] = t.subset;
  j["displacement"] = {{"signs", t.displacement.signs},
                       {"epsilon", std::to_string(t.displacement.epsilon.numerator()) + "/" +
                                       std::to_string(t.displacement.epsilon.denominator())}};
  json cols = json::array();
  for (const auto &c : t.columns)
  {
    cols.push_back(ExpJson(c));
  }
  j["columns"] = cols;
  json rows = json::array();
  for (const auto &r : t.rows)
  {
    rows.push_back({{"poly", r.poly}, {"multiplier", ExpJson(r.multiplier)}});
  }
  j["rows"] = rows;
  j["hidden_degree"] = t.hidden_degree;
  json placement = json::array();
  for (const auto &p : t.placement)
  {
    placement.push_back({p.row, p.col, p.hidden_degree, p.slot});
  }
  j["placement"] = placement;
  json ops = json::array();
  for (const auto &op : t.schedule.ops)
  {
    json o = {{"op", op.kind == ScheduleOp::Kind::Eliminate ? "eliminate" : "remove"},
              {"side", op.side == ZeroSide::A ? "A" : "B"},
              {"col", op.col},
              {"pivot", op.pivot}};
    if (op.kind == ScheduleOp::Kind::Eliminate)
    {
      o["target"] = op.target;
    }
    ops.push_back(o);
  }
  j["schedule"] = {{"ops", ops},
                   {"surviving_rows", t.schedule.surviving_rows},
                   {"surviving_cols", t.schedule.surviving_cols}};
  json rec = json::array();
  for (const auto &r : t.recovery)
  {
    rec.push_back({{"variable", r.variable}, {"numerator", r.numerator},
                   {"denominator", r.denominator}});
  }
  j["recovery"] = rec;
  j["seed"] = t.seed;
  return j.dump(1) + "\n";
}

SolverTemplate ParseTemplate(std::string_view text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::exception &e)
  {
    Corrupt(std::string("not valid JSON (") + e.what() + ")");
  }
  if (!j.is_object() || !j.contains("format") || j["format"] != kFormatName)
  {
    Corrupt("not an hvsolve template");
  }
  if (!j.contains("version") || !j["version"].is_number_integer())
  {
    Corrupt("missing format version");
  }
  if (j["version"].get<int>() != SolverTemplate::kFormatVersion)
  {
    throw Error(ErrorCode::Version, "unsupported template version " + j["version"].dump() +
                                        " (expected " +
                                        std::to_string(SolverTemplate::kFormatVersion) + ")");
  }

  SolverTemplate t;
  try
  {
    std::vector<CoeffSlot> slots;
    for (const auto &s : j.at("slots"))
    {
      slots.push_back({s.at("name").get<std::string>(), s.at("poly").get<std::size_t>(),
                       ExpFrom(s.at("exponent"))});
    }
    std::vector<ParamPolynomial> polys;
    for (const auto &p : j.at("polys"))
    {
      ParamPolynomial poly;
      poly.name = p.at("name").get<std::string>();
      for (const auto &term : p.at("terms"))
      {
        poly.terms.push_back({ExpFrom(term.at(1)), term.at(0).get<SlotId>()});
      }
      polys.push_back(std::move(poly));
    }
    t.system = PolySystem(j.at("variables").get<std::vector<std::string>>(), std::move(slots),
                          std::move(polys), true);
    t.hidden_index = j.at("hidden").get<std::size_t>();
    t.subset = j.at("subset").get<std::vector<std::size_t>>();
    const auto &disp = j.at("displacement");
    t.displacement.signs = disp.at("signs").get<std::vector<int>>();
    auto eps = disp.at("epsilon").get<std::string>();
    auto slash = eps.find('/');
    Check(slash != std::string::npos, "bad epsilon");
    t.displacement.epsilon = Rational(std::stoll(eps.substr(0, slash)), std::stoll(eps.substr(slash + 1)));
    for (const auto &c : j.at("columns"))
    {
      t.columns.push_back(ExpFrom(c));
    }
    for (const auto &r : j.at("rows"))
    {
      t.rows.push_back({r.at("poly").get<std::size_t>(), ExpFrom(r.at("multiplier"))});
    }
    t.hidden_degree = j.at("hidden_degree").get<int>();
    for (const auto &p : j.at("placement"))
    {
      t.placement.push_back({p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>(),
                             p.at(2).get<int>(), p.at(3).get<SlotId>()});
    }
    const auto &sched = j.at("schedule");
    for (const auto &o : sched.at("ops"))
    {
      ScheduleOp op;
      auto kind = o.at("op").get<std::string>();
      Check(kind == "eliminate" || kind == "remove", "unknown schedule op '" + kind + "'");
      op.kind = kind == "eliminate" ? ScheduleOp::Kind::Eliminate : ScheduleOp::Kind::Remove;
      auto side = o.at("side").get<std::string>();
      Check(side == "A" || side == "B", "unknown schedule side");
      op.side = side == "A" ? ZeroSide::A : ZeroSide::B;
      op.col = o.at("col").get<std::size_t>();
      op.pivot = o.at("pivot").get<std::size_t>();
      if (op.kind == ScheduleOp::Kind::Eliminate)
      {
        op.target = o.at("target").get<std::size_t>();
      }
      t.schedule.ops.push_back(op);
    }
    t.schedule.surviving_rows = sched.at("surviving_rows").get<std::vector<std::size_t>>();
    t.schedule.surviving_cols = sched.at("surviving_cols").get<std::vector<std::size_t>>();
    for (const auto &r : j.at("recovery"))
    {
      t.recovery.push_back({r.at("variable").get<std::size_t>(),
                            r.at("numerator").get<std::size_t>(),
                            r.at("denominator").get<std::size_t>()});
    }
    t.seed = j.at("seed").get<std::uint64_t>();
  }
  catch (const json::exception &e)
  {
    Corrupt(e.what());
  }
  catch (const Error &e)
  {
    if (e.code() == ErrorCode::Integrity)
    {
      throw;
    }
    Corrupt(e.what());
  }
  catch (const std::exception &e)
  {
    Corrupt(e.what());
  }

  // Cross-field consistency.
  const std::size_t n = t.system.num_variables();
  Check(n >= 2 && t.hidden_index < n, "hidden variable out of range");
  Check(t.displacement.signs.size() == n - 1, "displacement dimension");
  Check(!t.columns.empty() && t.rows.size() == t.columns.size(), "M' must be square");
  Check(t.hidden_degree >= 1, "hidden degree must be at least 1");
  for (const auto &c : t.columns)
  {
    Check(c.size() == n - 1, "column monomial dimension");
  }
  for (const auto &r : t.rows)
  {
    Check(r.multiplier.size() == n - 1 && r.poly < t.system.num_polys(), "row specification");
  }
  std::vector<PlacementEntry> expect;
  try
  {
    expect = BuildPlacement(t.system, t.hidden_index, t.columns, t.rows);
  }
  catch (const Error &e)
  {
    Corrupt(e.what());
  }
  Check(expect == t.placement, "placement does not match rows and columns");
  int max_deg = 0;
  for (const auto &p : t.placement)
  {
    max_deg = std::max(max_deg, p.hidden_degree);
  }
  Check(max_deg == t.hidden_degree, "hidden degree does not match placement");

  const std::size_t k = t.pencil_size();
  std::set<std::size_t> rows_alive;
  std::set<std::size_t> cols_alive;
  for (std::size_t i = 0; i < k; ++i)
  {
    rows_alive.insert(i);
    cols_alive.insert(i);
  }
  for (const auto &op : t.schedule.ops)
  {
    Check(rows_alive.count(op.pivot) && cols_alive.count(op.col), "schedule index");
    if (op.kind == ScheduleOp::Kind::Eliminate)
    {
      Check(rows_alive.count(op.target) && op.target != op.pivot, "schedule target");
    }
    else
    {
      rows_alive.erase(op.pivot);
      cols_alive.erase(op.col);
    }
  }
  Check(std::vector<std::size_t>(rows_alive.begin(), rows_alive.end()) ==
            t.schedule.surviving_rows,
        "surviving rows");
  Check(std::vector<std::size_t>(cols_alive.begin(), cols_alive.end()) ==
            t.schedule.surviving_cols,
        "surviving columns");

  const std::size_t b = t.basis_size();
  std::vector<bool> covered(n, false);
  for (const auto &r : t.recovery)
  {
    Check(r.variable < n && r.variable != t.hidden_index, "recovery variable");
    Check(cols_alive.count(r.numerator) && cols_alive.count(r.denominator),
          "recovery column removed by schedule");
    std::size_t base = r.variable < t.hidden_index ? r.variable : r.variable - 1;
    Check(r.numerator / b == r.denominator / b &&
              t.columns[r.numerator % b] ==
                  t.columns[r.denominator % b] + ExponentVector::Unit(n - 1, base),
          "recovery pair is not a unit step");
    covered[r.variable] = true;
  }
  for (std::size_t v = 0; v < n; ++v)
  {
    Check(v == t.hidden_index || covered[v], "variable without recovery pair");
  }
  return t;
}

}  // namespace hvs
