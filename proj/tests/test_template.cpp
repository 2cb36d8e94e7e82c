// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include <functional>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "hvsolve/basis_search.hpp"
#include "hvsolve/error.hpp"
#include "hvsolve/problems.hpp"
#include "hvsolve/template.hpp"

using namespace hvs;
using nlohmann::json;

namespace
{

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

TEST_CASE("template round trip")
{
  for (const auto &name : BuiltinNames())
  {
    auto t = Generate(GetBuiltin(name).system);
    auto text = SerializeTemplate(t);
    auto back = ParseTemplate(text);
    CHECK(SerializeTemplate(back) == text);
    CHECK(back.columns == t.columns);
    CHECK(back.rows == t.rows);
    CHECK(back.placement == t.placement);
    CHECK(back.schedule == t.schedule);
    CHECK(back.recovery == t.recovery);
    CHECK(back.hidden_degree == t.hidden_degree);
    CHECK(back.seed == t.seed);
  }
}

TEST_CASE("version mismatch")
{
  auto t = Generate(GetBuiltin("SYS-A").system);
  auto j = json::parse(SerializeTemplate(t));
  j["version"] = 2;
  CHECK(CodeOf([&] { ParseTemplate(j.dump()); }) == ErrorCode::Version);
}

TEST_CASE("integrity errors")
{
  auto t = Generate(GetBuiltin("SYS-A").system);
  auto text = SerializeTemplate(t);
  CHECK(CodeOf([&] { ParseTemplate(text.substr(0, text.size() / 2)); }) == ErrorCode::Integrity);
  CHECK(CodeOf([&] { ParseTemplate("{}"); }) == ErrorCode::Integrity);
  CHECK(CodeOf([&] { ParseTemplate("[1,2]"); }) == ErrorCode::Integrity);

  auto j = json::parse(text);
  auto broken = j;
  broken["placement"][0][3] = 4;
  CHECK(CodeOf([&] { ParseTemplate(broken.dump()); }) == ErrorCode::Integrity);

  broken = j;
  broken["rows"].erase(0);
  CHECK(CodeOf([&] { ParseTemplate(broken.dump()); }) == ErrorCode::Integrity);

  broken = j;
  broken["hidden_degree"] = 3;
  CHECK(CodeOf([&] { ParseTemplate(broken.dump()); }) == ErrorCode::Integrity);

  broken = j;
  broken["schedule"]["surviving_cols"].erase(0);
  CHECK(CodeOf([&] { ParseTemplate(broken.dump()); }) == ErrorCode::Integrity);

  broken = j;
  broken["schedule"]["ops"][0]["pivot"] = 99;
  CHECK(CodeOf([&] { ParseTemplate(broken.dump()); }) == ErrorCode::Integrity);

  broken = j;
  broken["recovery"][0]["numerator"] = 99;
  CHECK(CodeOf([&] { ParseTemplate(broken.dump()); }) == ErrorCode::Integrity);

  broken = j;
  broken.erase("seed");
  CHECK(CodeOf([&] { ParseTemplate(broken.dump()); }) == ErrorCode::Integrity);
}

TEST_CASE("placement of SYS-A")
{
  auto t = Generate(GetBuiltin("SYS-A").system);
  // hidden y, basis {x, x^2, x^3}, rows f1*x, f2*x, f2*x^2
  REQUIRE(t.columns.size() == 3);
  CHECK(t.hidden_index == 1);
  CHECK(t.columns[0] == ExponentVector{1});
  CHECK(t.columns[2] == ExponentVector{3});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0] == RowSpec{0, ExponentVector{1}});
  CHECK(t.rows[1] == RowSpec{1, ExponentVector{1}});
  CHECK(t.rows[2] == RowSpec{1, ExponentVector{2}});
  CHECK(t.placement.size() == 7);
  CHECK(t.hidden_degree == 2);
}
