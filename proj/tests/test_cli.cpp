// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace
{

struct Run
{
  int code = -1;
  std::string out;
};

// stdout only; stderr goes to <tag>.err
Run Exec(const std::string &args, const std::string &tag = "cli")
{
  std::string cmd = std::string(HVS_CLI_PATH) + " " + args + " 2>" + tag + ".err";
  Run r;
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0)
  {
    r.out.append(buf.data(), n);
  }
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const std::string &path)
{
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Data(const std::string &name)
{
  return std::string(HVS_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("generate SYS-A")
{
  auto r = Exec("generate " + Data("sys_a.poly") + " -o cli_a.json");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("basis=3 gep=6 reduced=4 hidden=y") != std::string::npos);
  auto again = Exec("generate " + Data("sys_a.poly") + " -o cli_a2.json");
  REQUIRE(again.code == 0);
  CHECK(Slurp("cli_a.json") == Slurp("cli_a2.json"));
}

TEST_CASE("inspect")
{
  REQUIRE(Exec("generate " + Data("sys_a.poly") + " -o cli_i.json").code == 0);
  auto r = Exec("inspect cli_i.json");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("schedule=2 eliminates + 2 removes") != std::string::npos);
  CHECK(r.out.find("hidden=y") != std::string::npos);
  CHECK(r.out.find("recovery") != std::string::npos);
}

TEST_CASE("solve formats")
{
  REQUIRE(Exec("generate " + Data("sys_a.poly") + " -o cli_s.json").code == 0);
  auto csv = Exec("solve cli_s.json " + Data("sys_a.inst"));
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("index,status,valid", 0) == 0);
  int lines = 0;
  for (char c : csv.out)
  {
    lines += c == '\n';
  }
  CHECK(lines == 5);

  auto st = Exec("solve cli_s.json " + Data("sys_a.inst") + " --format struct");
  REQUIRE(st.code == 0);
  CHECK(st.out.find("\"valid_count\": 4") != std::string::npos);
  CHECK(st.out.find("\"solved_size\": 4") != std::string::npos);

  auto full = Exec("solve cli_s.json " + Data("sys_a.inst") + " --format struct --no-reduce");
  REQUIRE(full.code == 0);
  CHECK(full.out.find("\"solved_size\": 6") != std::string::npos);
  CHECK(full.out.find("\"valid_count\": 4") != std::string::npos);

  auto all = Exec("solve cli_s.json " + Data("sys_a.inst") + " --keep-all --no-reduce");
  REQUIRE(all.code == 0);
  CHECK(all.out.size() >= csv.out.size());
}

TEST_CASE("builtin names and texts")
{
  auto r = Exec("builtin SYS-B");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("poly f2: c4*x*y + c5") != std::string::npos);
  auto g = Exec("generate SYS-B -o cli_b.json");
  REQUIRE(g.code == 0);
  CHECK(g.out.find("basis=2 gep=2") != std::string::npos);
  CHECK(Exec("builtin NOPE").code == 1);
}

TEST_CASE("errors and usage")
{
  CHECK(Exec("").code == 2);
  CHECK(Exec("frobnicate").code == 2);
  REQUIRE(Exec("generate " + Data("sys_a.poly") + " -o cli_e.json").code == 0);
  CHECK(Exec("bench " + Data("sys_a.poly") + " --trials 0").code == 2);

  auto text = Slurp("cli_e.json");
  {
    std::ofstream out("cli_trunc.json");
    out << text.substr(0, text.size() / 2);
  }
  auto r = Exec("solve cli_trunc.json " + Data("sys_a.inst"), "trunc");
  CHECK(r.code == 1);
  CHECK(Slurp("trunc.err").find("integrity") != std::string::npos);

  {
    std::ofstream out("cli_missing.inst");
    out << "c1 = 1\n";
  }
  CHECK(Exec("solve cli_e.json cli_missing.inst").code == 1);
  CHECK(Exec("solve cli_e.json does_not_exist.inst").code == 1);
  CHECK(Exec("generate --eps 3/2 " + Data("sys_a.poly") + " -o x.json").code != 0);
}

TEST_CASE("bench writes reports")
{
  auto r = Exec("bench " + Data("dense_quadratic.poly") + " --trials 10 --compare -o cli_bench");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("[compare]") != std::string::npos);
  CHECK(Slurp("cli_bench.csv").rfind("trial,", 0) == 0);
  CHECK_FALSE(Slurp("cli_bench.summary.txt").empty());
  CHECK_FALSE(Slurp("cli_bench.hist.dat").empty());
  CHECK(Slurp("cli_bench.near_degenerate.csv").rfind("trial,", 0) == 0);

  auto sparse = Exec("bench SYS-A --trials 5 --mode near_degenerate");
  CHECK(sparse.code == 1);
}
