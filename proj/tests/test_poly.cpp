// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <functional>
#include <random>

#include "doctest.h"
#include "hvsolve/error.hpp"
#include "hvsolve/poly.hpp"

using namespace hvs;

namespace
{

const char *kSysA = "vars: x y\npoly f1: c1*x^2 + c2*y^2 + c3\npoly f2: c4*x*y + c5\n";

ErrorCode CodeOf(const std::function<void()> &f)
{
  try
  {
    f();
  }
  catch (const Error &e)
  {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST_CASE("parse inline system")
{
  auto sys = ParseSystem("vars: x y; f1: c1*x^2+c2*y^2+c3; f2: c4*x*y+c5");
  CHECK(sys.num_variables() == 2);
  CHECK(sys.num_polys() == 2);
  CHECK(sys.num_slots() == 5);
  CHECK(sys.slots()[3].name == "c4");
  CHECK(sys.slots()[3].exponent == ExponentVector{1, 1});
  CHECK(sys.slots()[3].poly_index == 1);
}

TEST_CASE("overdetermined systems are accepted")
{
  auto sys = ParseSystem("vars: x y\nf1: a*x + b*y + c\nf2: d*x*y + e\nf3: g*x^2 + h*y^2 + k\n");
  CHECK(sys.num_polys() == 3);
}

TEST_CASE("format round trip")
{
  auto sys = ParseSystem(kSysA);
  auto text = FormatSystem(sys);
  CHECK(FormatSystem(ParseSystem(text)) == text);
  CHECK(text.find("poly f2: c4*x*y + c5") != std::string::npos);
}

TEST_CASE("parse errors")
{
  CHECK(CodeOf([] { ParseSystem("vars: x; f1: c1"); }) == ErrorCode::Parse);
  CHECK(CodeOf([] { ParseSystem("vars: x y; f1: c1*z + c2"); }) == ErrorCode::Parse);
  CHECK(CodeOf([] { ParseSystem("vars: x y; f1: c1*x + c1*y"); }) == ErrorCode::Parse);
  CHECK(CodeOf([] { ParseSystem("vars: x y; f1: c1*x + c2*x"); }) == ErrorCode::Parse);
  CHECK(CodeOf([] { ParseSystem("vars:; f1: c1"); }) == ErrorCode::Parse);
  CHECK(CodeOf([] { ParseSystem("f1: c1*x"); }) == ErrorCode::Parse);
  CHECK(CodeOf([] { ParseSystem("vars: x y\nf1: c1*x^2 + c2\n"); }) == ErrorCode::Parse);

  try
  {
    ParseSystem("vars: x y\nf1: c1*x + c2*q\n");
    FAIL("expected a parse error");
  }
  catch (const Error &e)
  {
    std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
  }
}

TEST_CASE("shared slots only by request")
{
  std::vector<CoeffSlot> slots = {{"a", 0, {1, 0}}, {"b", 0, {0, 1}}};
  std::vector<ParamPolynomial> polys = {{"f1", {{{1, 0}, 0}, {{0, 1}, 1}}},
                                        {"f2", {{{1, 0}, 0}, {{0, 1}, 1}}}};
  CHECK_THROWS_AS(PolySystem({"x", "y"}, slots, polys), Error);
  PolySystem shared({"x", "y"}, slots, polys, true);
  CHECK(shared.shares_slots());
}

TEST_CASE("hide variable projects SYS-A")
{
  auto sys = ParseSystem(kSysA);
  auto p = HideVariable(sys, 1);
  CHECK(p.hidden_degree == 2);
  CHECK(p.base_variables == std::vector<std::string>{"x"});

  const auto &f1 = p.polys[0].terms;
  REQUIRE(f1.size() == 2);
  std::vector<int> degs;
  for (const auto &t : f1.at(ExponentVector{0}))
  {
    degs.push_back(t.hidden_degree);
  }
  std::sort(degs.begin(), degs.end());
  CHECK(degs == std::vector<int>{0, 2});
  REQUIRE(f1.at(ExponentVector{2}).size() == 1);
  CHECK(f1.at(ExponentVector{2})[0].hidden_degree == 0);

  const auto &f2 = p.polys[1].terms;
  CHECK(f2.at(ExponentVector{1})[0].hidden_degree == 1);
  CHECK(f2.at(ExponentVector{0})[0].hidden_degree == 0);
  CHECK(p.polys[1].Support() == std::vector<ExponentVector>{{0}, {1}});

  CHECK_THROWS_AS(HideVariable(sys, 2), Error);
}

TEST_CASE("hiding an absent variable leaves degree zero")
{
  auto sys = ParseSystem("vars: x y\nf1: a*x^2 + b\nf2: c*x*y + d\n");
  auto p = HideVariable(sys, 1);
  for (const auto &[e, terms] : p.polys[0].terms)
  {
    for (const auto &t : terms)
    {
      CHECK(t.hidden_degree == 0);
    }
  }
}

TEST_CASE("projection reassembles for every hidden variable")
{
  auto sys = ParseSystem(
      "vars: x y z\nf1: a*x^2*y + b*y*z^3 + c*z + d\nf2: e*x*y*z + g*x + h\n"
      "f3: k*z^2 + m*y^2 + n*x^3*z\n");
  for (std::size_t h = 0; h < 3; ++h)
  {
    auto p = HideVariable(sys, h);
    auto back = p.Reassemble();
    int maxdeg = 0;
    for (std::size_t i = 0; i < sys.num_polys(); ++i)
    {
      auto orig = sys.polys()[i].terms;
      std::sort(orig.begin(), orig.end(),
                [](const Term &a, const Term &b) { return a.exponent < b.exponent; });
      REQUIRE(back[i].size() == orig.size());
      for (std::size_t k = 0; k < orig.size(); ++k)
      {
        CHECK(back[i][k].exponent == orig[k].exponent);
        CHECK(back[i][k].slot == orig[k].slot);
        maxdeg = std::max(maxdeg, orig[k].exponent[h]);
      }
    }
    CHECK(p.hidden_degree == maxdeg);
  }
}

TEST_CASE("evaluate SYS-A")
{
  auto sys = ParseSystem(kSysA);
  CoefficientInstance inst({1, 1, -5, 1, -2});
  std::vector<std::complex<double>> root = {1.0, 2.0};
  auto r = Evaluate(sys, inst, root);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 0.0);
  std::vector<std::complex<double>> origin = {0.0, 0.0};
  r = Evaluate(sys, inst, origin);
  CHECK(r[0] == 5.0);
  CHECK(r[1] == 2.0);
  CoefficientInstance zero({0, 0, 0, 0, 0});
  r = Evaluate(sys, zero, root);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 0.0);
  CHECK(CoefficientNorms(sys, inst) == std::vector<double>{7.0, 3.0});
}

TEST_CASE("evaluation is linear in the slot values")
{
  auto sys = ParseSystem(kSysA);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial)
  {
    std::vector<double> a(5), b(5), s(5);
    for (int i = 0; i < 5; ++i)
    {
      a[i] = u(rng);
      b[i] = u(rng);
      s[i] = a[i] + b[i];
    }
    std::vector<std::complex<double>> pt = {{u(rng), u(rng)}, {u(rng), u(rng)}};
    auto fa = EvaluateComplex(sys, CoefficientInstance(a), pt);
    auto fb = EvaluateComplex(sys, CoefficientInstance(b), pt);
    auto fs = EvaluateComplex(sys, CoefficientInstance(s), pt);
    for (int i = 0; i < 2; ++i)
    {
      CHECK(std::abs(fs[i] - fa[i] - fb[i]) < 1e-14);
    }
  }
}

TEST_CASE("instances")
{
  auto sys = ParseSystem(kSysA);
  auto inst = ParseInstance("# standard\nc1 = 1\nc2 = 1.0\nc3 = -5e0\nc4 = 1\nc5 = -2\n", sys);
  CHECK(inst[2] == -5.0);
  CHECK(FormatInstance(sys, ParseInstance(FormatInstance(sys, inst), sys)) ==
        FormatInstance(sys, inst));
  CHECK(CodeOf([&] { ParseInstance("c1 = 1\nc2 = 1\nc3 = 1\nc4 = 1\n", sys); }) ==
        ErrorCode::MissingSlot);
  CHECK(CodeOf([&] { ParseInstance("c1 = 1\nc2 = 1\nc3 = 1\nc4 = 1\nc5 = inf\n", sys); }) ==
        ErrorCode::NonFinite);
  CHECK(CodeOf([&] { ParseInstance("c1 = 1\nc2 = 1\nc3 = 1\nc4 = 1\nc5 = 2\nzz = 1\n", sys); }) ==
        ErrorCode::Parse);
  CHECK(CodeOf([&] { ValidateInstance(sys, CoefficientInstance({1, 2})); }) ==
        ErrorCode::MissingSlot);
}

TEST_CASE("exponent vectors")
{
  ExponentVector e{1, 2, 3};
  CHECK(e.TotalDegree() == 6);
  CHECK(e.Erase(1) == ExponentVector{1, 3});
  CHECK(e.Insert(0, 7) == ExponentVector{7, 1, 2, 3});
  CHECK((e - ExponentVector{2, 0, 0}).IsNonNegative() == false);
  CHECK(ExponentVector::Unit(3, 2) == ExponentVector{0, 0, 1});
  std::vector<std::string> names = {"x", "y", "z"};
  CHECK(MonomialString(ExponentVector{2, 1, 0}, names) == "x^2*y");
  CHECK(MonomialString(ExponentVector{0, 0, 0}, names) == "1");
}
