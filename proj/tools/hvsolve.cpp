// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

// hvsolve command line: generate, solve, inspect, bench, builtin.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hvsolve/hvsolve.h"

namespace
{

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

struct CliError
{
  int code;
  std::string message;
};

void Check(hvs_status s)
{
  if (s != HVS_OK)
  {
    throw CliError{kExitError, std::string(hvs_status_name(s)) + ": " + hvs_last_error()};
  }
}

struct StrDeleter
{
  void operator()(char *p) const { hvs_string_free(p); }
};
using CStr = std::unique_ptr<char, StrDeleter>;

template <typename T, void (*Free)(T *)>
struct Deleter
{
  void operator()(T *p) const { Free(p); }
};
using System = std::unique_ptr<hvs_system, Deleter<hvs_system, hvs_system_free>>;
using Template = std::unique_ptr<hvs_template, Deleter<hvs_template, hvs_template_free>>;
using Instance = std::unique_ptr<hvs_instance, Deleter<hvs_instance, hvs_instance_free>>;
using Solutions = std::unique_ptr<hvs_solutions, Deleter<hvs_solutions, hvs_solutions_free>>;
using Report = std::unique_ptr<hvs_report, Deleter<hvs_report, hvs_report_free>>;

std::string ReadFile(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw CliError{kExitError, "cannot read " + path};
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void WriteFile(const std::string &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out)
  {
    throw CliError{kExitError, "cannot write " + path};
  }
}

bool IsBuiltin(const std::string &name)
{
  for (size_t i = 0; i < hvs_builtin_count(); ++i)
  {
    if (name == hvs_builtin_name(i))
    {
      return true;
    }
  }
  return false;
}

// Problem text from a file, or from a built-in name when no such file exists.
std::string ProblemText(const std::string &arg)
{
  if (!std::filesystem::exists(arg) && IsBuiltin(arg))
  {
    char *p = nullptr;
    Check(hvs_builtin_texts(arg.c_str(), &p, nullptr));
    CStr owned(p);
    return owned.get();
  }
  return ReadFile(arg);
}

struct GenFlags
{
  std::string hidden;
  std::string eps = "1/1000";
  double rank_tol = 1e-8;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t max_subset_size = 0;
  bool no_reduce = false;
};

struct SolveFlags
{
  double residual_tol = 1e-6;
  double pivot_tol = 1e-12;
  double inf_tol = 1e-10;
  bool keep_all = false;
  bool no_reduce = false;
};

void AddGenFlags(CLI::App *cmd, GenFlags &g)
{
  cmd->add_option("--hidden", g.hidden, "Variable to hide (default: search all)");
  cmd->add_option("--eps", g.eps, "Displacement size as p/q")->capture_default_str();
  cmd->add_option("--rank-tol", g.rank_tol, "Relative singular value threshold")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--max-subset-size", g.max_subset_size, "Largest polynomial subset (0: all)");
}

void AddSolveFlags(CLI::App *cmd, SolveFlags &s)
{
  cmd->add_option("--residual-tol", s.residual_tol, "Relative residual bound")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--pivot-tol", s.pivot_tol, "Schedule pivot guard")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--inf-tol", s.inf_tol, "Infinite eigenvalue threshold")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_flag("--no-reduce", s.no_reduce, "Solve the unreduced pencil");
}

hvs_generate_options GenOptions(const GenFlags &g)
{
  hvs_generate_options o;
  hvs_generate_options_default(&o);
  const auto slash = g.eps.find('/');
  try
  {
    if (slash == std::string::npos)
    {
      throw std::invalid_argument("missing '/'");
    }
    std::size_t used = 0;
    o.eps_num = std::stoll(g.eps.substr(0, slash), &used);
    if (used != slash)
    {
      throw std::invalid_argument("numerator");
    }
    const std::string den = g.eps.substr(slash + 1);
    o.eps_den = std::stoll(den, &used);
    if (used != den.size())
    {
      throw std::invalid_argument("denominator");
    }
  }
  catch (const std::exception &)
  {
    throw CliError{kExitUsage, "--eps expects a fraction p/q, got '" + g.eps + "'"};
  }
  o.rank_tol = g.rank_tol;
  if (g.seed_set)
  {
    o.seed = g.seed;
  }
  o.max_subset_size = g.max_subset_size;
  o.hidden = g.hidden.empty() ? nullptr : g.hidden.c_str();
  o.reduce = g.no_reduce ? 0 : 1;
  return o;
}

hvs_solve_options SolveOptions(const SolveFlags &s)
{
  hvs_solve_options o;
  hvs_solve_options_default(&o);
  o.residual_tol = s.residual_tol;
  o.pivot_tol = s.pivot_tol;
  o.inf_tol = s.inf_tol;
  o.keep_all = s.keep_all ? 1 : 0;
  o.reduce = s.no_reduce ? 0 : 1;
  return o;
}

Template GenerateFrom(const std::string &problem, const GenFlags &g)
{
  const std::string text = ProblemText(problem);
  hvs_system *raw = nullptr;
  Check(hvs_system_parse(text.c_str(), &raw));
  System sys(raw);
  const auto opts = GenOptions(g);
  hvs_template *t = nullptr;
  Check(hvs_generate(sys.get(), &opts, &t));
  return Template(t);
}

Template LoadTemplate(const std::string &path)
{
  const std::string text = ReadFile(path);
  hvs_template *t = nullptr;
  Check(hvs_template_parse(text.c_str(), &t));
  return Template(t);
}

std::string SummaryLine(const hvs_template *t)
{
  hvs_template_info info;
  Check(hvs_template_info_get(t, &info));
  std::ostringstream os;
  os << "basis=" << info.basis_size << " gep=" << info.pencil_size
     << " reduced=" << info.reduced_size << " hidden=" << hvs_template_variable(t, info.hidden_index);
  return os.str();
}

std::string DefaultTemplatePath(const std::string &problem)
{
  std::filesystem::path p(problem);
  if (!std::filesystem::exists(p) && IsBuiltin(problem))
  {
    return problem + ".template.json";
  }
  return p.replace_extension(".template.json").string();
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"hidden-variable resultant solver generator and runtime"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hvs_version());

  GenFlags gen;
  SolveFlags solve;

  auto *generate = app.add_subcommand("generate", "Build a solver template from a problem file");
  std::string problem;
  std::string output;
  generate->add_option("problem", problem, "Problem file or built-in name")->required();
  generate->add_option("-o,--output", output, "Template path (default: <problem>.template.json)");
  AddGenFlags(generate, gen);
  generate->add_option("--seed", gen.seed, "Random seed")->each([&](const std::string &) {
    gen.seed_set = true;
  });
  generate->add_flag("--no-reduce", gen.no_reduce, "Skip parasitic eigenvalue reduction");

  auto *solve_cmd = app.add_subcommand("solve", "Solve one instance with a template");
  std::string tmpl_path;
  std::string inst_path;
  std::string format = "csv";
  solve_cmd->add_option("template", tmpl_path, "Template file")->required();
  solve_cmd->add_option("instance", inst_path, "Instance file")->required();
  solve_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "struct"}))
      ->capture_default_str();
  solve_cmd->add_flag("--keep-all", solve.keep_all, "Also print invalid and indeterminate records");
  AddSolveFlags(solve_cmd, solve);

  auto *inspect = app.add_subcommand("inspect", "Print template sizes and structure");
  inspect->add_option("template", tmpl_path, "Template file")->required();

  auto *bench = app.add_subcommand("bench", "Planted-root stability benchmark");
  std::string bench_problem;
  long long trials = 100;
  std::string mode = "random";
  double gap = 1e-2;
  bool compare = false;
  std::string prefix;
  bench->add_option("problem", bench_problem, "Problem file or built-in name")->required();
  bench->add_option("--trials", trials, "Number of trials")->capture_default_str();
  bench->add_option("--mode", mode, "Instance mode")
      ->check(CLI::IsMember({"random", "near_degenerate"}))
      ->capture_default_str();
  bench->add_option("--gap", gap, "Near-degenerate root distance")->capture_default_str();
  bench->add_flag("--compare", compare, "Also run the other mode and report both medians");
  bench->add_option("-o,--output", prefix, "Write <prefix>.csv, .summary.txt and .hist.dat");
  bench->add_option("--seed", gen.seed, "Random seed")->each([&](const std::string &) {
    gen.seed_set = true;
  });
  AddGenFlags(bench, gen);
  AddSolveFlags(bench, solve);

  auto *builtin = app.add_subcommand("builtin", "Print a built-in problem or its instance");
  std::string builtin_name;
  bool builtin_instance = false;
  builtin->add_option("name", builtin_name, "SYS-A, SYS-B or SYS-C")->required();
  builtin->add_flag("--instance", builtin_instance, "Print the standard instance instead");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try
  {
    if (*generate)
    {
      Template t = GenerateFrom(problem, gen);
      char *text = nullptr;
      Check(hvs_template_serialize(t.get(), &text));
      CStr owned(text);
      WriteFile(output.empty() ? DefaultTemplatePath(problem) : output, owned.get());
      std::cout << SummaryLine(t.get()) << '\n';
    }
    else if (*solve_cmd)
    {
      Template t = LoadTemplate(tmpl_path);
      const std::string text = ReadFile(inst_path);
      hvs_instance *raw = nullptr;
      Check(hvs_instance_parse(t.get(), text.c_str(), &raw));
      Instance inst(raw);
      const auto opts = SolveOptions(solve);
      hvs_solutions *sraw = nullptr;
      Check(hvs_solve(t.get(), inst.get(), &opts, &sraw));
      Solutions sols(sraw);
      char *out = nullptr;
      Check(hvs_solutions_format(sols.get(),
                                 format == "struct" ? HVS_FORMAT_STRUCT : HVS_FORMAT_CSV, &out));
      CStr owned(out);
      std::cout << owned.get();
      std::cerr << "solutions=" << hvs_solutions_count(sols.get())
                << " valid=" << hvs_solutions_valid_count(sols.get())
                << " fallback=" << hvs_solutions_used_fallback(sols.get()) << '\n';
    }
    else if (*inspect)
    {
      Template t = LoadTemplate(tmpl_path);
      char *out = nullptr;
      Check(hvs_template_describe(t.get(), &out));
      CStr owned(out);
      std::cout << owned.get();
    }
    else if (*bench)
    {
      if (trials < 1)
      {
        throw CliError{kExitUsage, "--trials must be at least 1"};
      }
      if (!(gap > 0.0))
      {
        throw CliError{kExitUsage, "--gap must be positive"};
      }
      Template t = GenerateFrom(bench_problem, gen);
      std::cout << SummaryLine(t.get()) << '\n';
      hvs_bench_options opts;
      hvs_bench_options_default(&opts);
      opts.trials = static_cast<std::size_t>(trials);
      opts.mode = mode == "near_degenerate" ? HVS_BENCH_NEAR_DEGENERATE : HVS_BENCH_RANDOM;
      opts.gap = gap;
      if (gen.seed_set)
      {
        opts.seed = gen.seed;
      }
      opts.solve = SolveOptions(solve);

      auto run = [&](hvs_bench_mode m, const std::string &label, const std::string &file_prefix) {
        hvs_bench_options o = opts;
        o.mode = m;
        hvs_report *raw = nullptr;
        Check(hvs_bench(t.get(), &o, &raw));
        Report rep(raw);
        char *summary = nullptr;
        Check(hvs_report_summary_text(rep.get(), label.c_str(), &summary));
        CStr s(summary);
        std::cout << s.get();
        if (!file_prefix.empty())
        {
          char *csv = nullptr;
          char *hist = nullptr;
          Check(hvs_report_csv(rep.get(), &csv));
          CStr c(csv);
          Check(hvs_report_histogram(rep.get(), &hist));
          CStr h(hist);
          WriteFile(file_prefix + ".csv", c.get());
          WriteFile(file_prefix + ".summary.txt", s.get());
          WriteFile(file_prefix + ".hist.dat", h.get());
        }
        hvs_report_summary sum;
        Check(hvs_report_summary_get(rep.get(), &sum));
        return sum;
      };
      const auto primary = run(opts.mode, mode, prefix);
      if (compare)
      {
        const auto other_mode =
            opts.mode == HVS_BENCH_RANDOM ? HVS_BENCH_NEAR_DEGENERATE : HVS_BENCH_RANDOM;
        const std::string other = other_mode == HVS_BENCH_RANDOM ? "random" : "near_degenerate";
        const auto second = run(other_mode, other, prefix.empty() ? "" : prefix + "." + other);
        std::cout << "[compare]\nmedian_" << mode << '=' << primary.q50 << "\nmedian_" << other
                  << '=' << second.q50 << '\n';
      }
    }
    else if (*builtin)
    {
      char *p = nullptr;
      char *i = nullptr;
      Check(hvs_builtin_texts(builtin_name.c_str(), &p, &i));
      CStr pp(p);
      CStr ii(i);
      std::cout << (builtin_instance ? ii.get() : pp.get());
    }
  }
  catch (const CliError &e)
  {
    std::cerr << "hvsolve: " << e.message << '\n';
    return e.code;
  }
  return 0;
}
