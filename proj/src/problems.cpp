// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include "hvsolve/problems.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

#include "hvsolve/error.hpp"

namespace hvs
{

namespace
{

struct BuiltinText
{
  const char *name;
  const char *problem;
  const char *instance;
  std::vector<std::vector<double>> roots;
};

const std::vector<BuiltinText> &Texts()
{
  static const std::vector<BuiltinText> texts = {
      {"SYS-A",
       "# x^2 + y^2 - 5, x*y - 2\n"
       "vars: x y\n"
       "poly f1: c1*x^2 + c2*y^2 + c3\n"
       "poly f2: c4*x*y + c5\n",
       "c1 = 1\nc2 = 1\nc3 = -5\nc4 = 1\nc5 = -2\n",
       {{1, 2}, {2, 1}, {-1, -2}, {-2, -1}}},
      {"SYS-B",
       "# x + y - 3, x*y - 2\n"
       "vars: x y\n"
       "poly f1: c1*x + c2*y + c3\n"
       "poly f2: c4*x*y + c5\n",
       "c1 = 1\nc2 = 1\nc3 = -3\nc4 = 1\nc5 = -2\n",
       {{1, 2}, {2, 1}}},
      {"SYS-C",
       "# x + y - 3, x*y - 2, x^2 + y^2 - 5\n"
       "vars: x y\n"
       "poly f1: c1*x + c2*y + c3\n"
       "poly f2: c4*x*y + c5\n"
       "poly f3: c6*x^2 + c7*y^2 + c8\n",
       "c1 = 1\nc2 = 1\nc3 = -3\nc4 = 1\nc5 = -2\nc6 = 1\nc7 = 1\nc8 = -5\n",
       {{1, 2}, {2, 1}}},
  };
  return texts;
}

Point ToPoint(const std::vector<double> &r)
{
  return Point(r.begin(), r.end());
}

double Monomial(const ExponentVector &e, const std::vector<double> &x)
{
  double v = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i)
  {
    v *= std::pow(x[i], e[i]);
  }
  return v;
}

std::mt19937_64 TrialRng(std::uint64_t seed, std::size_t trial)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), 0x68767376u};
  return std::mt19937_64(seq);
}

std::vector<double> NearPartner(const std::vector<double> &root, double gap, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> mag(0.5, 1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> d(root.size());
  double dmax = 0.0;
  for (auto &x : d)
  {
    x = (sign(rng) ? 1.0 : -1.0) * mag(rng);
    dmax = std::max(dmax, std::abs(x));
  }
  std::vector<double> out(root);
  for (std::size_t i = 0; i < out.size(); ++i)
  {
    out[i] += gap * d[i] / dmax;
  }
  return out;
}

std::size_t MinTerms(const PolySystem &sys)
{
  std::size_t t = std::numeric_limits<std::size_t>::max();
  for (const auto &p : sys.polys())
  {
    t = std::min(t, p.terms.size());
  }
  return t;
}

double Quantile(std::vector<double> v, double q)
{
  if (v.empty())
  {
    return std::numeric_limits<double>::quiet_NaN();
  }
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

constexpr double kLogFloor = -17.0;

double SafeLog10(double x)
{
  if (!(x > 0.0))
  {
    return x == 0.0 ? kLogFloor : std::numeric_limits<double>::infinity();
  }
  return std::max(kLogFloor, std::log10(x));
}

}  // namespace

std::vector<std::string> BuiltinNames()
{
  std::vector<std::string> out;
  for (const auto &t : Texts())
  {
    out.emplace_back(t.name);
  }
  return out;
}

Builtin GetBuiltin(std::string_view name)
{
  for (const auto &t : Texts())
  {
    if (name == t.name)
    {
      Builtin b;
      b.name = t.name;
      b.problem_text = t.problem;
      b.instance_text = t.instance;
      b.system = ParseSystem(b.problem_text);
      b.instance = ParseInstance(b.instance_text, b.system);
      for (const auto &r : t.roots)
      {
        b.roots.push_back(ToPoint(r));
      }
      return b;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown builtin '" + std::string(name) + "'");
}

std::vector<std::vector<double>> RandomRoots(std::size_t n, std::size_t count, double separation,
                                             std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<std::vector<double>> roots;
  for (int attempt = 0; roots.size() < count; ++attempt)
  {
    if (attempt > 100000)
    {
      throw Error(ErrorCode::InvalidArgument, "cannot place that many separated roots");
    }
    std::vector<double> r(n);
    for (auto &x : r)
    {
      x = (sign(rng) ? 1.0 : -1.0) * u(rng);
    }
    bool ok = true;
    for (const auto &q : roots)
    {
      double dist = 0.0;
      for (std::size_t i = 0; i < n; ++i)
      {
        dist = std::max(dist, std::abs(r[i] - q[i]));
        ok = ok && std::abs(r[i] - q[i]) >= separation / 4;
      }
      ok = ok && dist >= separation;
    }
    if (ok)
    {
      roots.push_back(std::move(r));
    }
  }
  return roots;
}

CoefficientInstance PlantCoefficients(const PolySystem &sys,
                                      const std::vector<std::vector<double>> &roots,
                                      std::mt19937_64 &rng, const std::vector<SlotId> &zero_slots)
{
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> values(sys.num_slots(), 0.0);
  for (const auto &poly : sys.polys())
  {
    std::vector<const Term *> free;
    for (const auto &t : poly.terms)
    {
      if (std::find(zero_slots.begin(), zero_slots.end(), t.slot) == zero_slots.end())
      {
        free.push_back(&t);
      }
    }
    const auto r = static_cast<Eigen::Index>(roots.size());
    const auto k = static_cast<Eigen::Index>(free.size());
    if (k == 0)
    {
      throw Error(ErrorCode::InvalidArgument, "polynomial " + poly.name + " has no free slot");
    }
    Eigen::MatrixXd v(std::max<Eigen::Index>(r, 1), k);
    v.setZero();
    for (Eigen::Index j = 0; j < r; ++j)
    {
      for (Eigen::Index c = 0; c < k; ++c)
      {
        v(j, c) = Monomial(free[static_cast<std::size_t>(c)]->exponent,
                           roots[static_cast<std::size_t>(j)]);
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeFullV);
    const auto &s = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
    {
      rank += s(i) > 1e-12 * std::max(1.0, s(0)) ? 1 : 0;
    }
    if (r == 0)
    {
      rank = 0;
    }
    if (rank >= k)
    {
      throw Error(ErrorCode::InvalidArgument,
                  "polynomial " + poly.name + " has too few monomials for the planted roots");
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = rank; i < k; ++i)
    {
      c += g(rng) * svd.matrixV().col(i);
    }
    c /= c.norm();
    for (Eigen::Index i = 0; i < k; ++i)
    {
      values[free[static_cast<std::size_t>(i)]->slot] = c(i);
    }
  }
  return CoefficientInstance(std::move(values));
}

namespace
{

PolySystem RandomSystem(const PlantedSpec &cfg, std::size_t need, std::mt19937_64 &rng)
{
  std::vector<std::string> vars;
  const char *names[] = {"x", "y", "z", "w", "u", "v", "s", "t"};
  for (std::size_t i = 0; i < cfg.n; ++i)
  {
    vars.emplace_back(names[i]);
  }
  std::bernoulli_distribution keep(std::clamp(cfg.density, 0.0, 1.0));
  std::vector<CoeffSlot> slots;
  std::vector<ParamPolynomial> polys;
  for (std::size_t i = 0; i < cfg.m; ++i)
  {
    const int d = cfg.degrees.empty() ? cfg.degree : cfg.degrees.at(i);
    if (d < 1)
    {
      throw Error(ErrorCode::InvalidArgument, "degree bound must be positive");
    }
    std::vector<ExponentVector> all;
    ExponentVector e(cfg.n);
    // every exponent with total degree <= d, lexicographic
    std::function<void(std::size_t, int)> rec = [&](std::size_t axis, int left) {
      if (axis == cfg.n)
      {
        all.push_back(e);
        return;
      }
      for (int k = 0; k <= left; ++k)
      {
        e[axis] = k;
        rec(axis + 1, left - k);
      }
      e[axis] = 0;
    };
    rec(0, d);
    std::vector<ExponentVector> chosen, optional;
    for (const auto &x : all)
    {
      const bool pure = x.TotalDegree() == 0 ||
                        (x.TotalDegree() == d &&
                         std::count_if(x.begin(), x.end(), [](int v) { return v != 0; }) == 1);
      if (pure || keep(rng))
      {
        chosen.push_back(x);
      }
      else
      {
        optional.push_back(x);
      }
    }
    std::shuffle(optional.begin(), optional.end(), rng);
    while (chosen.size() <= need && !optional.empty())
    {
      chosen.push_back(optional.back());
      optional.pop_back();
    }
    std::sort(chosen.begin(), chosen.end());
    ParamPolynomial p;
    p.name = "f" + std::to_string(i + 1);
    for (std::size_t k = 0; k < chosen.size(); ++k)
    {
      const auto id = static_cast<SlotId>(slots.size());
      slots.push_back({"u" + std::to_string(i + 1) + "_" + std::to_string(k + 1), i, chosen[k]});
      p.terms.push_back({chosen[k], id});
    }
    polys.push_back(std::move(p));
  }
  return PolySystem(std::move(vars), std::move(slots), std::move(polys));
}

PlantedInstance Finish(PolySystem sys, std::vector<std::vector<double>> roots,
                       std::mt19937_64 &rng)
{
  if (MinTerms(sys) <= roots.size())
  {
    throw Error(ErrorCode::InvalidArgument,
                "every polynomial needs more monomials than planted roots");
  }
  PlantedInstance out;
  out.instance = PlantCoefficients(sys, roots, rng);
  out.system = std::move(sys);
  for (const auto &r : roots)
  {
    out.roots.push_back(ToPoint(r));
  }
  return out;
}

}  // namespace

PlantedInstance GeneratePlanted(const PlantedSpec &cfg, std::uint64_t seed)
{
  if (cfg.n < 1 || cfg.n > kMaxVariables || cfg.m < cfg.n)
  {
    throw Error(ErrorCode::InvalidArgument, "planted system needs 1 <= n <= 8 and m >= n");
  }
  std::mt19937_64 rng(seed);
  auto roots = cfg.roots.empty() ? RandomRoots(cfg.n, cfg.num_roots, cfg.separation, rng)
                                  : cfg.roots;
  auto sys = RandomSystem(cfg, roots.size(), rng);
  return Finish(std::move(sys), std::move(roots), rng);
}

PlantedInstance GenerateNearDegenerate(const PlantedSpec &cfg, std::uint64_t seed, double gap)
{
  if (!(gap > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "gap must be positive");
  }
  if (cfg.n < 1 || cfg.n > kMaxVariables || cfg.m < cfg.n)
  {
    throw Error(ErrorCode::InvalidArgument, "planted system needs 1 <= n <= 8 and m >= n");
  }
  std::mt19937_64 rng(seed);
  auto roots = cfg.roots;
  if (roots.empty())
  {
    if (cfg.num_roots < 2)
    {
      throw Error(ErrorCode::InvalidArgument, "near-degenerate mode needs at least 2 roots");
    }
    roots = RandomRoots(cfg.n, cfg.num_roots - 1, cfg.separation, rng);
  }
  roots.push_back(NearPartner(roots.front(), gap, rng));
  auto sys = RandomSystem(cfg, roots.size(), rng);
  return Finish(std::move(sys), std::move(roots), rng);
}

double ClosestRootError(const std::vector<Point> &roots, const std::vector<Solution> &solutions)
{
  double worst = 0.0;
  for (const auto &r : roots)
  {
    double best = std::numeric_limits<double>::infinity();
    for (const auto &s : solutions)
    {
      double d = 0.0;
      for (std::size_t i = 0; i < r.size() && i < s.point.size(); ++i)
      {
        const double e = std::abs(r[i] - s.point[i]);
        d = std::isnan(e) ? std::numeric_limits<double>::infinity() : std::max(d, e);
      }
      best = std::min(best, d);
    }
    worst = std::max(worst, best);
  }
  return worst;
}

StabilityReport RunStability(const SolverTemplate &tmpl, const StabilityConfig &config)
{
  if (config.trials < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  }
  const PolySystem &sys = tmpl.system;
  const std::size_t nroots = std::min(config.roots, MinTerms(sys) - 1);
  const bool near = config.mode == StabilityMode::NearDegenerate;
  if (nroots < (near ? 2u : 1u))
  {
    throw Error(ErrorCode::InvalidArgument,
                near ? "near-degenerate mode needs every polynomial to have at least 3 terms"
                     : "every polynomial needs at least 2 terms to plant a root");
  }
  StabilityReport rep;
  std::vector<double> logs;
  double total_seconds = 0.0;
  for (std::size_t t = 0; t < config.trials; ++t)
  {
    auto rng = TrialRng(config.seed, t);
    TrialRecord rec;
    rec.trial = t;
    try
    {
      std::vector<std::vector<double>> roots;
      if (near)
      {
        roots = RandomRoots(sys.num_variables(), nroots - 1, 0.2, rng);
        roots.push_back(NearPartner(roots.front(), config.gap, rng));
      }
      else
      {
        roots = RandomRoots(sys.num_variables(), nroots, 0.2, rng);
      }
      const auto inst = PlantCoefficients(sys, roots, rng);
      std::vector<Point> planted;
      for (const auto &r : roots)
      {
        planted.push_back(ToPoint(r));
      }
      const auto start = std::chrono::steady_clock::now();
      const auto sols = Solve(tmpl, inst, config.solve);
      rec.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      total_seconds += rec.seconds;
      rec.solutions = sols.size();
      const double err = ClosestRootError(planted, sols);
      double res = 0.0;
      for (const auto &r : planted)
      {
        double best = std::numeric_limits<double>::infinity();
        const Solution *closest = nullptr;
        for (const auto &s : sols)
        {
          const double d = ClosestRootError({r}, {s});
          if (d < best)
          {
            best = d;
            closest = &s;
          }
        }
        res = std::max(res, closest ? closest->relative_residual
                                    : std::numeric_limits<double>::infinity());
      }
      rec.log10_error = SafeLog10(err);
      rec.log10_residual = SafeLog10(res);
      rec.failed = sols.empty() || !(err <= config.failure_error);
    }
    catch (const Error &)
    {
      rec.failed = true;
      rec.log10_error = std::numeric_limits<double>::infinity();
      rec.log10_residual = std::numeric_limits<double>::infinity();
    }
    if (rec.failed)
    {
      ++rep.failures;
    }
    else
    {
      ++rep.successes;
      logs.push_back(rec.log10_error);
    }
    rep.records.push_back(rec);
  }
  rep.q10 = Quantile(logs, 0.1);
  rep.q50 = Quantile(logs, 0.5);
  rep.q90 = Quantile(logs, 0.9);
  rep.mean_solve_seconds = total_seconds / static_cast<double>(config.trials);
  for (int e = static_cast<int>(kLogFloor); e <= 1; ++e)
  {
    rep.edges.push_back(e);
  }
  rep.counts.assign(rep.edges.size() - 1, 0);
  for (double l : logs)
  {
    const double c = std::clamp(l, rep.edges.front(), rep.edges.back() - 1e-9);
    ++rep.counts[static_cast<std::size_t>(std::floor(c - rep.edges.front()))];
  }
  return rep;
}

std::string FormatReportCsv(const StabilityReport &report)
{
  std::ostringstream os;
  os.precision(10);
  os << "trial,failed,log10_error,log10_residual,solutions,seconds\n";
  for (const auto &r : report.records)
  {
    os << r.trial << ',' << (r.failed ? 1 : 0) << ',' << r.log10_error << ','
       << r.log10_residual << ',' << r.solutions << ',' << r.seconds << '\n';
  }
  return os.str();
}

std::string FormatReportSummary(const StabilityReport &report, std::string_view label)
{
  std::ostringstream os;
  os.precision(6);
  os << "[" << label << "]\n"
     << "trials=" << report.records.size() << "\n"
     << "successes=" << report.successes << "\n"
     << "failures=" << report.failures << "\n"
     << "log10_error_q10=" << report.q10 << "\n"
     << "log10_error_q50=" << report.q50 << "\n"
     << "log10_error_q90=" << report.q90 << "\n"
     << "mean_solve_seconds=" << report.mean_solve_seconds << "\n";
  return os.str();
}

std::string FormatHistogram(const StabilityReport &report)
{
  std::ostringstream os;
  os << "# bin_center count\n";
  for (std::size_t i = 0; i < report.counts.size(); ++i)
  {
    os << (report.edges[i] + report.edges[i + 1]) / 2 << ' ' << report.counts[i] << '\n';
  }
  return os.str();
}

}  // namespace hvs
