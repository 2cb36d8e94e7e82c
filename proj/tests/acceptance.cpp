// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "hvsolve/basis_search.hpp"
#include "hvsolve/error.hpp"
#include "hvsolve/numeric.hpp"
#include "hvsolve/pencil.hpp"
#include "hvsolve/problems.hpp"
#include "hvsolve/runtime.hpp"

using namespace hvs;

namespace
{

using Clock = std::chrono::steady_clock;

struct Outcome
{
  bool pass = true;
  std::string detail;

  void Fail(const std::string &why)
  {
    if (pass)
    {
      detail = why;
    }
    pass = false;
  }
};

double Seconds(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::complex<double>> FiniteEigs(const NumericPencil &p)
{
  std::vector<std::complex<double>> out;
  auto d = DeflateInfinite(p.a, p.b);
  for (const auto &e : SolveGep(d.a, d.b))
  {
    if (e.kind == EigenClass::Finite)
    {
      out.push_back(e.value);
    }
  }
  return out;
}

// Clusters the union of GEP eigenvalues and polished oracle roots. A singleton pair is compared
// directly; a cluster of several roots is compared by multiplicity and mean, the oracle side
// taken from argument-principle moments on a circle around it (the mean of a root cluster is
// well conditioned even when its members are not).
bool MatchClusters(const SolverTemplate &t, const CoefficientInstance &inst,
                   const std::vector<std::complex<double>> &gep,
                   const std::vector<std::complex<double>> &oracle, double rel_tol,
                   double cluster_tol = 1e-3)
{
  if (gep.size() != oracle.size())
  {
    return false;
  }
  std::vector<std::complex<double>> all = gep;
  all.insert(all.end(), oracle.begin(), oracle.end());
  std::vector<std::size_t> parent(all.size());
  for (std::size_t i = 0; i < parent.size(); ++i)
  {
    parent[i] = i;
  }
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = root(parent[i]);
  };
  for (std::size_t i = 0; i < all.size(); ++i)
  {
    for (std::size_t j = 0; j < i; ++j)
    {
      if (std::abs(all[i] - all[j]) <= cluster_tol * std::max(1.0, std::abs(all[i])))
      {
        parent[root(i)] = root(j);
      }
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < all.size(); ++i)
  {
    groups[root(i)].push_back(i);
  }
  for (const auto &[id, members] : groups)
  {
    std::vector<std::complex<double>> g;
    std::vector<std::complex<double>> o;
    for (auto i : members)
    {
      (i < gep.size() ? g : o).push_back(all[i]);
    }
    if (g.size() != o.size())
    {
      return false;
    }
    std::complex<double> mg = 0.0;
    for (auto v : g)
    {
      mg += v;
    }
    mg /= static_cast<double>(g.size());
    std::complex<double> mo = 0.0;
    if (g.size() == 1)
    {
      mo = o[0];
    }
    else
    {
      double spread = 0.0;
      for (auto i : members)
      {
        spread = std::max(spread, std::abs(all[i] - mg));
      }
      double clear = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < all.size(); ++i)
      {
        if (root(i) != id)
        {
          clear = std::min(clear, std::abs(all[i] - mg));
        }
      }
      const double radius = std::min(std::max(10.0 * spread, 1e-6 * std::max(1.0, std::abs(mg))),
                                     0.5 * clear);
      auto mom = DeterminantRootMoments(t, inst, mg, radius, 128);
      if (std::abs(mom.count - static_cast<double>(g.size())) > 1e-3)
      {
        return false;
      }
      mo = mom.sum / static_cast<double>(g.size());
    }
    if (std::abs(mg - mo) > rel_tol * std::max(1.0, std::abs(mg)))
    {
      return false;
    }
  }
  return true;
}

double PointDistance(const Point &a, const Point &b)
{
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

std::string Fmt(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// 1: SYS-A end to end
Outcome WorkedExample()
{
  Outcome o;
  auto t0 = Clock::now();
  auto b = GetBuiltin("SYS-A");
  auto t = Generate(b.system);
  if (t.basis_size() != 3 || t.pencil_size() != 6 || t.reduced_size() != 4)
  {
    o.Fail("sizes " + std::to_string(t.basis_size()) + "/" + std::to_string(t.pencil_size()) +
           "/" + std::to_string(t.reduced_size()));
  }
  auto sols = Solve(t, b.instance);
  std::vector<Point> valid;
  for (const auto &s : sols)
  {
    if (s.valid())
    {
      valid.push_back(s.point);
    }
  }
  if (valid.size() != 4)
  {
    o.Fail(std::to_string(valid.size()) + " valid solutions");
  }
  double worst = 0;
  for (const auto &r : b.roots)
  {
    double best = 1e300;
    for (const auto &p : valid)
    {
      best = std::min(best, PointDistance(r, p));
    }
    worst = std::max(worst, best);
  }
  if (!(worst < 1e-8))
  {
    o.Fail("root error " + Fmt(worst));
  }
  auto oracle = OracleRoots(DetInterpolationOracle(t, b.instance));
  if (!MatchMultisets(oracle, {1.0, -1.0, 2.0, -2.0}, 1e-8))
  {
    o.Fail("oracle roots differ from (y^2-1)(y^2-4)");
  }
  const double secs = Seconds(t0);
  if (secs >= 5.0)
  {
    o.Fail("took " + Fmt(secs) + " s");
  }
  if (o.pass)
  {
    o.detail = "basis=3 gep=6 reduced=4, 4 valid, max error " + Fmt(worst) + ", " + Fmt(secs) + " s";
  }
  return o;
}

// 2: planted systems vs determinant oracle
Outcome OracleEquivalence()
{
  Outcome o;
  auto t0 = Clock::now();
  std::size_t systems = 0;
  double worst_root = 0;
  std::uint64_t seed = 1000;
  const std::vector<std::pair<std::size_t, std::size_t>> shapes = {{2, 2}, {2, 3}, {3, 3}, {3, 4}};
  for (const auto &[n, m] : shapes)
  {
    for (int degree = 1; degree <= 3; ++degree)
    {
      int made = 0;
      const int want = 9;
      for (int attempt = 0; made < want && attempt < 40; ++attempt)
      {
        PlantedSpec cfg;
        cfg.n = n;
        cfg.m = m;
        cfg.degree = degree;
        cfg.density = n == 3 && degree == 3 ? 0.3 : 0.6;
        // two linear equations through two points coincide
        cfg.num_roots = degree == 1 ? 1 : 2;
        PlantedInstance p;
        SolverTemplate t;
        try
        {
          p = GeneratePlanted(cfg, ++seed);
          t = Generate(p.system);
        }
        catch (const Error &)
        {
          continue;
        }
        ++made;
        ++systems;
        auto full = Instantiate(t, p.instance);
        // infinite Jordan chains of length q perturb to |beta| ~ eps^(1/q) |alpha|, so they are
        // deflated before QZ
        auto gep = FiniteEigs(full);
        auto det = DetInterpolationOracle(t, p.instance);
        auto oracle = PolishDeterminantRoots(t, p.instance, OracleRoots(det));
        if (det.degenerate || !MatchClusters(t, p.instance, gep, oracle, 1e-6))
        {
          o.Fail("spectrum mismatch on seed " + std::to_string(seed) + " n=" + std::to_string(n) +
                 " m=" + std::to_string(m) + " degree=" + std::to_string(degree) + " (" +
                 std::to_string(gep.size()) + " eigenvalues vs " + std::to_string(oracle.size()) +
                 " oracle roots" + (det.degenerate ? ", oracle degenerate)" : ")"));
        }
        const double err = ClosestRootError(p.roots, Solve(t, p.instance));
        worst_root = std::max(worst_root, err);
        if (!(err < 1e-6))
        {
          o.Fail("root error " + Fmt(err) + " on seed " + std::to_string(seed));
        }
      }
    }
  }
  const double secs = Seconds(t0);
  if (systems < 100)
  {
    o.Fail("only " + std::to_string(systems) + " systems generated");
  }
  if (o.pass)
  {
    o.detail = std::to_string(systems) + " systems, worst root error " + Fmt(worst_root) + ", " +
               Fmt(secs) + " s";
  }
  return o;
}

std::vector<SolverTemplate> Corpus()
{
  std::vector<SolverTemplate> out;
  for (const auto &name : BuiltinNames())
  {
    out.push_back(Generate(GetBuiltin(name).system));
  }
  out.push_back(Generate(ParseSystem(
      "vars: x y\npoly f1: u1 + u2*y^2 + u3*x + u4*x^2\npoly f2: v1 + v2*y^2 + v3*x^2\n")));
  PlantedSpec cfg;
  for (std::uint64_t seed = 1; seed <= 4; ++seed)
  {
    cfg.n = seed <= 2 ? 2 : 3;
    cfg.m = cfg.n;
    cfg.density = 0.6;
    out.push_back(Generate(GeneratePlanted(cfg, seed).system));
  }
  return out;
}

// 3: reduced vs unreduced spectra
Outcome SpectrumPreservation(const std::vector<SolverTemplate> &corpus)
{
  Outcome o;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(-1, 1);
  std::size_t checks = 0;
  for (const auto &t : corpus)
  {
    auto pencil = TemplatePencil(t);
    auto check = CheckSchedule(pencil, t.schedule, 20, 3030);
    if (!check.ok)
    {
      o.Fail("schedule check failed");
    }
    if (check.removed_zero + check.removed_infinite != t.schedule.CountRemoves())
    {
      o.Fail("removed " + std::to_string(t.schedule.CountRemoves()) + " pairs but spectrum lost " +
             std::to_string(check.removed_zero + check.removed_infinite));
    }
    for (int trial = 0; trial < 20; ++trial)
    {
      std::vector<double> vals(t.system.num_slots());
      for (auto &v : vals)
      {
        v = u(rng);
      }
      CoefficientInstance inst(vals);
      auto full = Instantiate(t, inst);
      auto red = ApplySchedule(full, t.schedule, 1e-12);
      if (!red)
      {
        o.Fail("unexpected fallback on a random instance");
        continue;
      }
      auto p1 = SolveGep(full.a, full.b);
      auto p2 = SolveGep(red->a, red->b);
      if (!MatchMultisets(NonParasiticSpectrum(p1), NonParasiticSpectrum(p2), 1e-8))
      {
        o.Fail("finite spectra differ");
      }
      ++checks;
    }
  }
  if (o.pass)
  {
    o.detail = std::to_string(corpus.size()) + " templates x 20 instances (" +
               std::to_string(checks) + " comparisons)";
  }
  return o;
}

// 4: rank gate
Outcome RankGate(const std::vector<SolverTemplate> &corpus)
{
  Outcome o;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto &t : corpus)
  {
    for (int trial = 0; trial < 5; ++trial)
    {
      std::vector<double> vals(t.system.num_slots());
      for (auto &v : vals)
      {
        v = u(rng);
      }
      auto m = AssembleMatrix(t.system, t.hidden_index, t.columns, t.rows,
                              CoefficientInstance(vals), u(rng));
      if (NumericRank(m, 1e-8) != t.basis_size())
      {
        o.Fail("emitted template with rank-deficient M'");
      }
    }
  }

  // f1 duplicated under shared slots: every polynomial has a multiplier and rows suffice,
  // yet M' has rank 1.
  auto b = GetBuiltin("SYS-B");
  std::vector<CoeffSlot> slots(b.system.slots().begin(), b.system.slots().begin() + 3);
  auto g = b.system.polys()[0];
  g.name = "g1";
  PolySystem dup(b.system.variables(), slots, {b.system.polys()[0], g}, true);
  BasisCandidate c;
  c.hidden_index = 1;
  c.subset = {0, 1};
  c.displacement = Displacement{{0}, Rational(1, 1000)};
  c.basis = {{0}, {1}};
  c.multipliers = {{{0}}, {{0}}};
  if (RankTest(dup, c, 5, 4040, 1e-8))
  {
    o.Fail("duplicated-polynomial candidate passed the rank test");
  }
  try
  {
    Generate(dup);
    o.Fail("generator accepted the duplicated-polynomial system");
  }
  catch (const Error &e)
  {
    if (std::string(e.what()).find("rank deficient") == std::string::npos)
    {
      o.Fail(std::string("unexpected diagnostic: ") + e.what());
    }
  }
  if (o.pass)
  {
    o.detail = std::to_string(corpus.size()) +
               " templates full rank on 5 trials; duplicated-polynomial candidate rejected";
  }
  return o;
}

// 5: overdetermined SYS-C
Outcome Overdetermined()
{
  Outcome o;
  auto b = GetBuiltin("SYS-C");
  auto t = Generate(b.system);
  auto sols = Solve(t, b.instance);
  std::size_t valid = 0;
  double worst_res = 0;
  for (const auto &s : sols)
  {
    if (!s.valid())
    {
      continue;
    }
    ++valid;
    if (s.residuals.size() != 3)
    {
      o.Fail("expected 3 residuals");
    }
    for (double r : s.residuals)
    {
      worst_res = std::max(worst_res, r);
    }
  }
  if (valid != 2)
  {
    o.Fail(std::to_string(valid) + " valid solutions");
  }
  if (!(worst_res < 1e-8))
  {
    o.Fail("residual " + Fmt(worst_res));
  }
  const double err = ClosestRootError(b.roots, sols);
  if (!(err < 1e-8))
  {
    o.Fail("root error " + Fmt(err));
  }
  if (o.pass)
  {
    o.detail = "2 roots, max residual " + Fmt(worst_res);
  }
  return o;
}

// 6: zero pivot forces the unreduced pencil
Outcome Fallback()
{
  Outcome o;
  auto sys = ParseSystem(
      "vars: x y\npoly f1: u1 + u2*y^2 + u3*x + u4*x^2\npoly f2: v1 + v2*y^2 + v3*x^2\n");
  auto t = Generate(sys);
  std::mt19937_64 rng(7);
  auto roots = RandomRoots(2, 2, 0.2, rng);
  auto inst = PlantCoefficients(sys, roots, rng, {3});
  auto rep = SolveDetailed(t, inst);
  if (!rep.used_fallback)
  {
    o.Fail("no fallback");
  }
  std::vector<Point> planted;
  for (const auto &r : roots)
  {
    planted.push_back({r[0], r[1]});
  }
  const double err = ClosestRootError(planted, rep.solutions);
  if (!(err < 1e-8))
  {
    o.Fail("planted root error " + Fmt(err));
  }
  SolveOptions full;
  full.reduce = false;
  auto ref = Solve(t, inst, full);
  std::vector<Point> a, c;
  for (const auto &s : rep.solutions)
  {
    if (s.valid())
    {
      a.push_back(s.point);
    }
  }
  for (const auto &s : ref)
  {
    if (s.valid())
    {
      c.push_back(s.point);
    }
  }
  bool same = a.size() == c.size();
  for (const auto &p : a)
  {
    double best = 1e300;
    for (const auto &q : c)
    {
      best = std::min(best, PointDistance(p, q));
    }
    same = same && best < 1e-8;
  }
  if (!same)
  {
    o.Fail("valid set differs from the unreduced solve");
  }
  if (o.pass)
  {
    o.detail = "fallback used, " + std::to_string(a.size()) + " valid, planted error " + Fmt(err);
  }
  return o;
}

// 7: near-degenerate roots are harder
Outcome StabilityOrdering()
{
  Outcome o;
  PlantedSpec ps;
  auto t = Generate(GeneratePlanted(ps, 77).system);
  StabilityConfig cfg;
  cfg.trials = 200;
  cfg.gap = 1e-2;
  cfg.seed = 7;
  cfg.mode = StabilityMode::Random;
  auto rnd = RunStability(t, cfg);
  cfg.mode = StabilityMode::NearDegenerate;
  auto near = RunStability(t, cfg);
  if (!(near.q50 > rnd.q50))
  {
    o.Fail("median " + Fmt(near.q50) + " <= " + Fmt(rnd.q50));
  }
  if (rnd.failures * 50 > cfg.trials || near.failures * 50 > cfg.trials)
  {
    o.Fail("failures " + std::to_string(rnd.failures) + "/" + std::to_string(near.failures));
  }
  if (o.pass)
  {
    o.detail = "median log10 error random " + Fmt(rnd.q50) + " < near_degenerate " +
               Fmt(near.q50) + ", failures " + std::to_string(rnd.failures) + "+" +
               std::to_string(near.failures) + " of 400";
  }
  return o;
}

std::string Slurp(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 8: byte-identical templates
Outcome Determinism()
{
  Outcome o;
  for (const auto &name : BuiltinNames())
  {
    const std::string base = std::string(HVS_CLI_PATH) + " generate " + name + " --seed 99 -o ";
    const std::string a = "acc_" + name + "_1.json";
    const std::string b = "acc_" + name + "_2.json";
    if (std::system((base + a + " >/dev/null").c_str()) != 0 ||
        std::system((base + b + " >/dev/null").c_str()) != 0)
    {
      o.Fail("cli generate failed for " + name);
      continue;
    }
    const auto x = Slurp(a);
    if (x.empty() || x != Slurp(b))
    {
      o.Fail("templates differ for " + name);
    }
  }
  auto sys = ParseSystem(
      "vars: x y\npoly f1: u1 + u2*y^2 + u3*x + u4*x^2\npoly f2: v1 + v2*y^2 + v3*x^2\n");
  if (SerializeTemplate(Generate(sys)) != SerializeTemplate(Generate(sys)))
  {
    o.Fail("library generation differs");
  }
  if (o.pass)
  {
    o.detail = "cli and library output byte-identical";
  }
  return o;
}

}  // namespace

int main()
{
  int failed = 0;
  auto report = [&](int n, const char *name, const std::function<Outcome()> &f) {
    Outcome o;
    try
    {
      o = f();
    }
    catch (const std::exception &e)
    {
      o.Fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << n << "] " << name << ": " << o.detail
              << std::endl;
    failed += o.pass ? 0 : 1;
  };

  std::vector<SolverTemplate> corpus;
  report(1, "worked example", WorkedExample);
  report(2, "oracle equivalence", OracleEquivalence);
  report(3, "spectrum preservation", [&] {
    corpus = Corpus();
    return SpectrumPreservation(corpus);
  });
  report(4, "rank gate soundness", [&] { return RankGate(corpus); });
  report(5, "overdetermined support", Overdetermined);
  report(6, "reduction robustness", Fallback);
  report(7, "stability ordering", StabilityOrdering);
  report(8, "determinism", Determinism);
  return failed == 0 ? 0 : 1;
}
