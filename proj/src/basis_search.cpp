// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include "hvsolve/basis_search.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "hvsolve/error.hpp"
#include "hvsolve/numeric.hpp"
#include "hvsolve/pencil.hpp"

namespace hvs
{

std::size_t BasisCandidate::total_rows() const
{
  std::size_t n = 0;
  for (const auto &t : multipliers)
  {
    n += t.size();
  }
  return n;
}

std::vector<RowSpec> BasisCandidate::AllRows() const
{
  std::vector<RowSpec> rows;
  for (std::size_t i = 0; i < multipliers.size(); ++i)
  {
    for (const auto &t : multipliers[i])
    {
      rows.push_back({i, t});
    }
  }
  return rows;
}

namespace
{

std::string SubsetString(const PolySystem &sys, const std::vector<std::size_t> &subset)
{
  std::string s = "{";
  for (std::size_t i = 0; i < subset.size(); ++i)
  {
    s += (i ? "," : "") + sys.polys()[subset[i]].name;
  }
  return s + "}";
}

std::string DeltaString(const Displacement &d)
{
  std::string s = "(";
  for (std::size_t i = 0; i < d.signs.size(); ++i)
  {
    s += i ? "," : "";
    s += d.signs[i] > 0 ? "+e" : d.signs[i] < 0 ? "-e" : "0";
  }
  return s + ")";
}

// Subsets of {0..m-1} with at most `cap` elements: larger first, then ascending index lists.
std::vector<std::vector<std::size_t>> OrderedSubsets(std::size_t m, std::size_t cap)
{
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t size = std::min(m, cap); size >= 1; --size)
  {
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i)
    {
      idx[i] = i;
    }
    while (true)
    {
      out.push_back(idx);
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == m - size + pos - 1)
      {
        --pos;
      }
      if (pos == 0)
      {
        break;
      }
      ++idx[pos - 1];
      for (std::size_t j = pos; j < size; ++j)
      {
        idx[j] = idx[j - 1] + 1;
      }
    }
  }
  return out;
}

CoefficientInstance RandomInstance(const PolySystem &sys, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(sys.num_slots());
  for (auto &x : v)
  {
    x = u(rng);
  }
  return CoefficientInstance(std::move(v));
}

}  // namespace

std::string Describe(const PolySystem &sys, const Rejection &r)
{
  std::ostringstream os;
  os << "hidden=" << sys.variables()[r.hidden_index] << " subset=" << SubsetString(sys, r.subset)
     << " delta=" << DeltaString(r.displacement) << " basis=" << r.basis_size << ": "
     << r.reason;
  return os.str();
}

std::vector<ExponentVector> MultiplierSet(std::span<const ExponentVector> support,
                                          std::span<const ExponentVector> basis)
{
  if (support.empty() || basis.empty())
  {
    return {};
  }
  std::set<ExponentVector> in_basis(basis.begin(), basis.end());
  std::set<ExponentVector> out;
  const ExponentVector &s0 = support.front();
  for (const auto &b : basis)
  {
    if (b.size() != s0.size())
    {
      throw Error(ErrorCode::InvalidArgument, "support and basis dimensions differ");
    }
    const ExponentVector t = b - s0;
    if (!t.IsNonNegative())
    {
      continue;
    }
    bool fits = std::all_of(support.begin(), support.end(),
                            [&](const ExponentVector &s) { return in_basis.count(t + s) > 0; });
    if (fits)
    {
      out.insert(t);
    }
  }
  return {out.begin(), out.end()};
}

void ForEachCandidate(const PolySystem &sys, const GeneratorConfig &config,
                      const std::function<void(BasisCandidate)> &accept,
                      const std::function<void(Rejection)> &reject)
{
  const std::size_t n = sys.num_variables();
  const std::size_t m = sys.num_polys();
  if (n < 2)
  {
    throw Error(ErrorCode::InvalidArgument,
                "hiding the only variable leaves no base variables; solve the univariate "
                "polynomial directly with a root finder");
  }
  if (config.max_subset_size == 0 && m > 12)
  {
    throw Error(ErrorCode::InvalidArgument,
                "more than 12 polynomials; set max_subset_size to bound the subset search");
  }
  if (config.forced_hidden && *config.forced_hidden >= n)
  {
    throw Error(ErrorCode::InvalidArgument, "hidden variable index out of range");
  }
  const std::size_t cap = config.max_subset_size == 0 ? m : config.max_subset_size;
  const auto subsets = OrderedSubsets(m, cap);
  const auto deltas = AllDisplacements(n - 1, config.epsilon);

  for (std::size_t hh = n; hh-- > 0;)
  {
    if (config.forced_hidden && *config.forced_hidden != hh)
    {
      continue;
    }
    const ProjectedSystem proj = HideVariable(sys, hh);
    std::vector<std::vector<ExponentVector>> supports;
    std::vector<LatticePolytope> polytopes;
    for (const auto &p : proj.polys)
    {
      supports.push_back(p.Support());
      polytopes.push_back(NewtonPolytope(supports.back()));
    }
    for (const auto &subset : subsets)
    {
      LatticePolytope q = polytopes[subset.front()];
      for (std::size_t i = 1; i < subset.size(); ++i)
      {
        q = MinkowskiSum(q, polytopes[subset[i]]);
      }
      for (const auto &delta : deltas)
      {
        BasisCandidate c;
        c.hidden_index = hh;
        c.subset = subset;
        c.displacement = delta;
        c.basis = LatticePoints(q, delta);
        std::sort(c.basis.begin(), c.basis.end());
        Rejection r{hh, subset, delta, c.basis.size(), ""};
        if (c.basis.empty())
        {
          r.reason = "no lattice points in the displaced polytope";
          reject(std::move(r));
          continue;
        }
        for (std::size_t i = 0; i < m; ++i)
        {
          c.multipliers.push_back(MultiplierSet(supports[i], c.basis));
          if (c.multipliers.back().empty() && r.reason.empty())
          {
            r.reason = "polynomial " + sys.polys()[i].name + " has no multiplier";
          }
        }
        if (r.reason.empty() && c.total_rows() < c.basis.size())
        {
          r.reason = "too few rows (" + std::to_string(c.total_rows()) + " < " +
                     std::to_string(c.basis.size()) + ")";
        }
        if (!r.reason.empty())
        {
          reject(std::move(r));
          continue;
        }
        accept(std::move(c));
      }
    }
  }
}

std::vector<BasisCandidate> EnumerateCandidates(const PolySystem &sys,
                                                const GeneratorConfig &config,
                                                std::vector<Rejection> *rejected)
{
  std::vector<BasisCandidate> out;
  ForEachCandidate(
      sys, config, [&](BasisCandidate c) { out.push_back(std::move(c)); },
      [&](Rejection r) {
        if (rejected)
        {
          rejected->push_back(std::move(r));
        }
      });
  return out;
}

Eigen::MatrixXd AssembleMatrix(const PolySystem &sys, std::size_t hidden,
                               std::span<const ExponentVector> columns,
                               std::span<const RowSpec> rows, const CoefficientInstance &inst,
                               double z)
{
  std::map<ExponentVector, Eigen::Index> col;
  for (std::size_t c = 0; c < columns.size(); ++c)
  {
    col[columns[c]] = static_cast<Eigen::Index>(c);
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                            static_cast<Eigen::Index>(columns.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
  {
    for (const auto &t : sys.polys()[rows[r].poly].terms)
    {
      auto it = col.find(t.exponent.Erase(hidden) + rows[r].multiplier);
      if (it == col.end())
      {
        throw Error(ErrorCode::InvalidArgument, "row leaves the basis");
      }
      m(static_cast<Eigen::Index>(r), it->second) += inst[t.slot] * std::pow(z, t.exponent[hidden]);
    }
  }
  return m;
}

bool RankTest(const PolySystem &sys, const BasisCandidate &cand, int trials, std::uint64_t seed,
              double rank_tol)
{
  if (trials < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "rank test needs at least one trial");
  }
  const auto rows = cand.AllRows();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < trials; ++t)
  {
    const auto inst = RandomInstance(sys, rng);
    const double z = u(rng);
    const auto m = AssembleMatrix(sys, cand.hidden_index, cand.basis, rows, inst, z);
    if (NumericRank(m, rank_tol) != cand.basis.size())
    {
      return false;
    }
  }
  return true;
}

std::optional<std::vector<RowSpec>> SelectRows(const PolySystem &sys, const BasisCandidate &cand,
                                               std::uint64_t seed, double rank_tol)
{
  const auto all = cand.AllRows();
  const std::size_t b = cand.basis.size();
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  std::vector<RowSpec> chosen;
  if (all.size() == b)
  {
    chosen = all;
  }
  else
  {
    const auto inst = RandomInstance(sys, rng);
    const double z = u(rng);
    const Eigen::MatrixXd full = AssembleMatrix(sys, cand.hidden_index, cand.basis, all, inst, z);
    Eigen::MatrixXd acc(0, static_cast<Eigen::Index>(b));
    std::size_t rank = 0;
    for (std::size_t r = 0; r < all.size() && chosen.size() < b; ++r)
    {
      Eigen::MatrixXd next(acc.rows() + 1, acc.cols());
      next << acc, full.row(static_cast<Eigen::Index>(r));
      const std::size_t nr = NumericRank(next, rank_tol);
      if (nr > rank)
      {
        acc = std::move(next);
        rank = nr;
        chosen.push_back(all[r]);
      }
    }
    if (chosen.size() < b)
    {
      return std::nullopt;
    }
  }
  for (int t = 0; t < 3; ++t)
  {
    const auto inst = RandomInstance(sys, rng);
    const double z = u(rng);
    const auto m = AssembleMatrix(sys, cand.hidden_index, cand.basis, chosen, inst, z);
    if (NumericRank(m, rank_tol) != b)
    {
      return std::nullopt;
    }
  }
  return chosen;
}

std::optional<std::vector<RecoveryPair>> BuildRecovery(const SolverTemplate &tmpl)
{
  const std::size_t n = tmpl.system.num_variables();
  const std::size_t h = tmpl.hidden_index;
  const std::size_t b = tmpl.basis_size();
  std::map<std::pair<std::size_t, ExponentVector>, std::size_t> alive;
  for (std::size_t c : tmpl.schedule.surviving_cols)
  {
    alive[{c / b, tmpl.columns[c % b]}] = c;
  }
  std::vector<RecoveryPair> out;
  for (std::size_t var = 0; var < n; ++var)
  {
    if (var == h)
    {
      continue;
    }
    const std::size_t base = var < h ? var : var - 1;
    const ExponentVector step = ExponentVector::Unit(n - 1, base);
    std::optional<std::tuple<int, std::size_t, std::size_t, std::size_t>> best;
    for (const auto &[label, den] : alive)
    {
      auto it = alive.find({label.first, label.second + step});
      if (it == alive.end())
      {
        continue;
      }
      auto key = std::make_tuple(label.second.TotalDegree(), label.first, den, it->second);
      if (!best || key < *best)
      {
        best = key;
      }
    }
    if (!best)
    {
      return std::nullopt;
    }
    out.push_back({var, std::get<3>(*best), std::get<2>(*best)});
  }
  return out;
}

CandidateOutcome EvaluateCandidate(const PolySystem &sys, const BasisCandidate &cand,
                                   const GeneratorConfig &config)
{
  CandidateOutcome out;
  if (!RankTest(sys, cand, config.rank_trials, config.seed, config.rank_tol))
  {
    out.reason = "stacked M' is rank deficient";
    return out;
  }
  auto rows = SelectRows(sys, cand, config.seed, config.rank_tol);
  if (!rows)
  {
    out.reason = "no full-rank square row selection";
    return out;
  }
  SolverTemplate t;
  t.system = sys;
  t.hidden_index = cand.hidden_index;
  t.subset = cand.subset;
  t.displacement = cand.displacement;
  t.columns = cand.basis;
  t.rows = std::move(*rows);
  t.placement = BuildPlacement(sys, cand.hidden_index, t.columns, t.rows);
  for (const auto &p : t.placement)
  {
    t.hidden_degree = std::max(t.hidden_degree, p.hidden_degree);
  }
  t.seed = config.seed;
  if (t.hidden_degree < 1)
  {
    out.reason = "hidden variable absent from the selected rows";
    return out;
  }
  const MatrixPencil pencil = TemplatePencil(t);
  ReductionSchedule identity;
  for (std::size_t c = 0; c < pencil.size(); ++c)
  {
    identity.surviving_rows.push_back(c);
    identity.surviving_cols.push_back(c);
  }
  t.schedule = identity;
  if (config.reduce)
  {
    ReductionSchedule s = ReduceSchedule(pencil);
    if (!s.ops.empty() && VerifySchedule(pencil, s, config.schedule_trials, config.seed))
    {
      t.schedule = std::move(s);
    }
  }
  auto recovery = BuildRecovery(t);
  if (!recovery && t.schedule.ops.size() > 0)
  {
    t.schedule = identity;
    recovery = BuildRecovery(t);
  }
  if (!recovery)
  {
    out.reason = "no unit-step column pair to recover every base variable";
    return out;
  }
  t.recovery = std::move(*recovery);
  out.tmpl = std::move(t);
  return out;
}

GenerationResult GenerateTemplate(const PolySystem &sys, const GeneratorConfig &config)
{
  GenerationResult res;
  std::vector<BasisCandidate> cands;
  ForEachCandidate(
      sys, config,
      [&](BasisCandidate c) {
        ++res.enumerated;
        cands.push_back(std::move(c));
      },
      [&](Rejection r) {
        ++res.enumerated;
        res.rejections.push_back(std::move(r));
      });
  res.accepted = cands.size();

  std::vector<std::size_t> order(cands.size());
  for (std::size_t i = 0; i < order.size(); ++i)
  {
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cands[a].basis.size() < cands[b].basis.size();
  });

  // Outcomes depend only on (hidden, basis); subset and displacement are relabelled.
  std::map<std::pair<std::size_t, std::vector<ExponentVector>>, CandidateOutcome> cache;
  std::size_t i = 0;
  while (i < order.size())
  {
    const std::size_t size = cands[order[i]].basis.size();
    std::optional<std::tuple<std::size_t, int, std::size_t>> best_key;
    std::optional<SolverTemplate> best;
    for (; i < order.size() && cands[order[i]].basis.size() == size; ++i)
    {
      const auto &c = cands[order[i]];
      auto key = std::make_pair(c.hidden_index, c.basis);
      auto it = cache.find(key);
      if (it == cache.end())
      {
        it = cache.emplace(key, EvaluateCandidate(sys, c, config)).first;
      }
      if (!it->second.tmpl)
      {
        res.rejections.push_back(
            {c.hidden_index, c.subset, c.displacement, c.basis.size(), it->second.reason});
        continue;
      }
      const auto &t = *it->second.tmpl;
      auto rank = std::make_tuple(t.reduced_size(), t.hidden_degree, order[i]);
      if (!best_key || rank < *best_key)
      {
        best_key = rank;
        best = t;
        best->subset = c.subset;
        best->displacement = c.displacement;
      }
    }
    if (best)
    {
      res.tmpl = std::move(best);
      return res;
    }
  }
  return res;
}

SolverTemplate Generate(const PolySystem &sys, const GeneratorConfig &config)
{
  auto res = GenerateTemplate(sys, config);
  if (res.tmpl)
  {
    return std::move(*res.tmpl);
  }
  std::ostringstream os;
  os << "no viable basis among " << res.enumerated << " candidates";
  for (const auto &r : res.rejections)
  {
    os << "\n  " << Describe(sys, r);
  }
  throw Error(ErrorCode::GenerationFailed, os.str());
}

}  // namespace hvs
