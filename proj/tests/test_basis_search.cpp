// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "hvsolve/basis_search.hpp"
#include "hvsolve/error.hpp"
#include "hvsolve/numeric.hpp"
#include "hvsolve/problems.hpp"
#include "hvsolve/template.hpp"

using namespace hvs;
using Points = std::vector<ExponentVector>;

namespace
{

std::complex<double> Monomial(const ExponentVector &e, const std::vector<std::complex<double>> &x)
{
  std::complex<double> v = 1.0;
  for (std::size_t i = 0; i < e.size(); ++i)
  {
    v *= std::pow(x[i], e[i]);
  }
  return v;
}

}  // namespace

TEST_CASE("multiplier sets")
{
  Points basis = {{1}, {2}, {3}};
  Points a = {{0}, {2}};
  CHECK(MultiplierSet(a, basis) == Points{{1}});
  Points b = {{0}, {1}};
  CHECK(MultiplierSet(b, basis) == Points{{1}, {2}});
  Points c = {{1}, {2}, {3}};
  CHECK(MultiplierSet(c, basis) == Points{{0}});
  Points d = {{0}, {4}};
  CHECK(MultiplierSet(d, basis).empty());
}

TEST_CASE("SYS-A enumeration")
{
  auto sys = GetBuiltin("SYS-A").system;
  std::vector<Rejection> rejected;
  auto cands = EnumerateCandidates(sys, {}, &rejected);
  CHECK(cands.size() + rejected.size() == 18);

  // first visited: hidden y, subset {f1, f2}, delta +e
  REQUIRE_FALSE(cands.empty());
  CHECK(cands[0].hidden_index == 1);
  CHECK(cands[0].subset == std::vector<std::size_t>{0, 1});
  CHECK(cands[0].displacement.signs == std::vector<int>{1});
  CHECK(cands[0].basis == Points{{1}, {2}, {3}});

  bool saw = false;
  for (const auto &r : rejected)
  {
    if (r.hidden_index == 1 && r.subset == std::vector<std::size_t>{1} &&
        r.displacement.signs == std::vector<int>{1})
    {
      saw = true;
      CHECK(r.reason.find("f1 has no multiplier") != std::string::npos);
      CHECK(Describe(sys, r).find("subset={f2}") != std::string::npos);
    }
  }
  CHECK(saw);
}

TEST_CASE("SYS-A template")
{
  auto t = Generate(GetBuiltin("SYS-A").system);
  CHECK(t.hidden_index == 1);
  CHECK(t.basis_size() == 3);
  CHECK(t.hidden_degree == 2);
  CHECK(t.pencil_size() == 6);
  CHECK(t.reduced_size() == 4);
  CHECK(t.seed == kDefaultSeed);
  REQUIRE(t.recovery.size() == 1);
  CHECK(t.recovery[0].variable == 0);
}

TEST_CASE("SYS-B template")
{
  auto t = Generate(GetBuiltin("SYS-B").system);
  CHECK(t.hidden_index == 1);
  CHECK(t.columns == Points{{1}, {2}});
  CHECK(t.hidden_degree == 1);
  CHECK(t.pencil_size() == 2);
}

TEST_CASE("assembled rows are the multiplied polynomials")
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto &name : BuiltinNames())
  {
    auto b = GetBuiltin(name);
    auto t = Generate(b.system);
    for (int trial = 0; trial < 5; ++trial)
    {
      std::vector<double> vals(b.system.num_slots());
      for (auto &v : vals)
      {
        v = u(rng);
      }
      CoefficientInstance inst(vals);
      std::vector<std::complex<double>> pt = {u(rng), u(rng)};
      auto m = AssembleMatrix(b.system, t.hidden_index, t.columns, t.rows, inst,
                              pt[t.hidden_index].real());
      std::vector<std::complex<double>> base = {pt[1 - t.hidden_index]};
      Eigen::VectorXcd mono(t.columns.size());
      for (std::size_t c = 0; c < t.columns.size(); ++c)
      {
        mono[c] = Monomial(t.columns[c], base);
      }
      Eigen::VectorXcd lhs = m.cast<std::complex<double>>() * mono;
      auto f = EvaluateComplex(b.system, inst, pt);
      for (std::size_t r = 0; r < t.rows.size(); ++r)
      {
        auto want = Monomial(t.rows[r].multiplier, base) * f[t.rows[r].poly];
        CHECK(std::abs(lhs[r] - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("rank gate rejects dependent rows")
{
  auto b = GetBuiltin("SYS-B");
  const auto &p = b.system.polys();
  std::vector<CoeffSlot> slots(b.system.slots().begin(), b.system.slots().begin() + 3);
  std::vector<ParamPolynomial> polys = {p[0], p[0]};
  polys[1].name = "g1";
  PolySystem dup(b.system.variables(), slots, polys, true);

  BasisCandidate c;
  c.hidden_index = 1;
  c.subset = {0, 1};
  c.displacement = Displacement{{0}, Rational(1, 1000)};
  c.basis = {{0}, {1}};
  c.multipliers = {{{0}}, {{0}}};
  CHECK_FALSE(RankTest(dup, c, 3, 1, 1e-8));

  try
  {
    Generate(dup);
    FAIL("expected generation to fail");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::GenerationFailed);
    std::string msg = e.what();
    CHECK(msg.find("no viable basis") != std::string::npos);
    CHECK(msg.find("stacked M' is rank deficient") != std::string::npos);
  }
}

TEST_CASE("redundant rows are left out")
{
  auto b = GetBuiltin("SYS-C");
  auto cands = EnumerateCandidates(b.system, {});
  bool checked = false;
  for (const auto &c : cands)
  {
    if (c.total_rows() > c.basis.size() && RankTest(b.system, c, 3, 9, 1e-8))
    {
      auto rows = SelectRows(b.system, c, 9, 1e-8);
      REQUIRE(rows.has_value());
      CHECK(rows->size() == c.basis.size());
      checked = true;
      break;
    }
  }
  CHECK(checked);
  auto t = Generate(b.system);
  CHECK(t.rows.size() == t.columns.size());
}

TEST_CASE("generation is deterministic")
{
  for (const auto &name : BuiltinNames())
  {
    auto sys = GetBuiltin(name).system;
    CHECK(SerializeTemplate(Generate(sys)) == SerializeTemplate(Generate(sys)));
  }
  GeneratorConfig other;
  other.seed = 5;
  auto sys = GetBuiltin("SYS-A").system;
  auto a = Generate(sys, other);
  auto b = Generate(sys);
  CHECK(a.columns == b.columns);
  CHECK(a.rows == b.rows);
}

TEST_CASE("forced hidden variable")
{
  GeneratorConfig cfg;
  cfg.forced_hidden = 0;
  auto t = Generate(GetBuiltin("SYS-A").system, cfg);
  CHECK(t.hidden_index == 0);
  cfg.forced_hidden = 5;
  CHECK_THROWS_AS(Generate(GetBuiltin("SYS-A").system, cfg), Error);
}

TEST_CASE("univariate input is refused")
{
  auto sys = ParseSystem("vars: x\nf1: a*x^2 + b*x + c\n");
  try
  {
    Generate(sys);
    FAIL("expected an error");
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::InvalidArgument);
    CHECK(std::string(e.what()).find("root finder") != std::string::npos);
  }
}
