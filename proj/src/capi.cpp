// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include "hvsolve/hvsolve.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "hvsolve/basis_search.hpp"
#include "hvsolve/error.hpp"
#include "hvsolve/problems.hpp"
#include "hvsolve/runtime.hpp"
#include "hvsolve/template.hpp"

struct hvs_system
{
  hvs::PolySystem sys;
};

struct hvs_instance
{
  hvs::CoefficientInstance inst;
};

struct hvs_template
{
  hvs::SolverTemplate tmpl;
};

struct hvs_solutions
{
  hvs::SolveReport report;
  hvs::SolverTemplate tmpl;
};

struct hvs_report
{
  hvs::StabilityReport report;
};

namespace
{

thread_local std::string g_error;

hvs_status Fail(hvs_status s, const std::string &msg)
{
  g_error = msg;
  return s;
}

template <typename F>
hvs_status Guard(F &&f)
{
  try
  {
    g_error.clear();
    f();
    return HVS_OK;
  }
  catch (const hvs::Error &e)
  {
    return Fail(static_cast<hvs_status>(e.code()), e.what());
  }
  catch (const std::bad_alloc &)
  {
    return Fail(HVS_ERR_INTERNAL, "out of memory");
  }
  catch (const std::exception &e)
  {
    return Fail(HVS_ERR_INTERNAL, e.what());
  }
}

char *Dup(const std::string &s)
{
  char *p = static_cast<char *>(std::malloc(s.size() + 1));
  if (!p)
  {
    throw std::bad_alloc();
  }
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void Need(const void *p, const char *what)
{
  if (!p)
  {
    throw hvs::Error(hvs::ErrorCode::InvalidArgument, std::string(what) + " is null");
  }
}

hvs::SolveOptions ToOptions(const hvs_solve_options *o)
{
  hvs::SolveOptions out;
  if (!o)
  {
    return out;
  }
  out.reduce = o->reduce != 0;
  out.keep_all = o->keep_all != 0;
  out.residual_tol = o->residual_tol;
  out.consistency_tol = o->consistency_tol;
  out.ratio_tol = o->ratio_tol;
  out.pivot_tol = o->pivot_tol;
  out.inf_tol = o->inf_tol;
  for (double v : {out.residual_tol, out.consistency_tol, out.ratio_tol, out.pivot_tol, out.inf_tol})
  {
    if (!(v > 0.0 && v < 1.0))
    {
      throw hvs::Error(hvs::ErrorCode::InvalidArgument, "tolerances must lie in (0, 1)");
    }
  }
  return out;
}

std::string Describe(const hvs::SolverTemplate &t)
{
  const auto &vars = t.system.variables();
  std::vector<std::string> base;
  for (std::size_t i = 0; i < vars.size(); ++i)
  {
    if (i != t.hidden_index)
    {
      base.push_back(vars[i]);
    }
  }
  std::ostringstream os;
  os << "variables:";
  for (const auto &v : vars)
  {
    os << ' ' << v;
  }
  os << "\nhidden=" << vars[t.hidden_index] << "\nl=" << t.hidden_degree
     << "\nbasis=" << t.basis_size() << "\nk=" << t.pencil_size() << "\nk'=" << t.reduced_size()
     << "\nschedule=" << t.schedule.CountEliminates() << " eliminates + "
     << t.schedule.CountRemoves() << " removes\ncolumns:";
  for (const auto &c : t.columns)
  {
    os << ' ' << hvs::MonomialString(c, base);
  }
  os << "\nrows:";
  for (const auto &r : t.rows)
  {
    os << ' ' << t.system.polys()[r.poly].name << '*' << hvs::MonomialString(r.multiplier, base);
  }
  os << "\nsubset:";
  for (auto i : t.subset)
  {
    os << ' ' << t.system.polys()[i].name;
  }
  os << "\nops:\n";
  for (const auto &op : t.schedule.ops)
  {
    const char *side = op.side == hvs::ZeroSide::A ? "A" : "B";
    if (op.kind == hvs::ScheduleOp::Kind::Eliminate)
    {
      os << "  eliminate zero=" << side << " col=" << op.col << " pivot=" << op.pivot
         << " target=" << op.target << '\n';
    }
    else
    {
      os << "  remove zero=" << side << " row=" << op.pivot << " col=" << op.col << '\n';
    }
  }
  os << "recovery:\n";
  for (const auto &r : t.recovery)
  {
    os << "  " << vars[r.variable] << " = y[" << r.numerator << "] / y[" << r.denominator << "]\n";
  }
  os << "seed=" << t.seed << '\n';
  return os.str();
}

}  // namespace

extern "C" {

const char *hvs_last_error(void)
{
  return g_error.c_str();
}

const char *hvs_version(void)
{
  return "0.1.0";
}

const char *hvs_status_name(hvs_status s)
{
  switch (s)
  {
    case HVS_OK:
      return "ok";
    case HVS_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case HVS_ERR_PARSE:
      return "parse error";
    case HVS_ERR_MISSING_SLOT:
      return "missing slot";
    case HVS_ERR_NON_FINITE:
      return "non-finite value";
    case HVS_ERR_VERSION:
      return "unsupported version";
    case HVS_ERR_INTEGRITY:
      return "integrity error";
    case HVS_ERR_GENERATION_FAILED:
      return "generation failed";
    case HVS_ERR_NUMERICAL:
      return "numerical failure";
    case HVS_ERR_IO:
      return "i/o error";
    case HVS_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void hvs_string_free(char *s)
{
  std::free(s);
}

hvs_status hvs_system_parse(const char *text, hvs_system **out)
{
  return Guard([&] {
    Need(text, "text");
    Need(out, "out");
    *out = new hvs_system{hvs::ParseSystem(text)};
  });
}

void hvs_system_free(hvs_system *sys)
{
  delete sys;
}

size_t hvs_system_num_variables(const hvs_system *sys)
{
  return sys ? sys->sys.num_variables() : 0;
}

size_t hvs_system_num_polys(const hvs_system *sys)
{
  return sys ? sys->sys.num_polys() : 0;
}

size_t hvs_system_num_slots(const hvs_system *sys)
{
  return sys ? sys->sys.num_slots() : 0;
}

hvs_status hvs_system_format(const hvs_system *sys, char **out)
{
  return Guard([&] {
    Need(sys, "system");
    Need(out, "out");
    *out = Dup(hvs::FormatSystem(sys->sys));
  });
}

size_t hvs_builtin_count(void)
{
  return hvs::BuiltinNames().size();
}

const char *hvs_builtin_name(size_t i)
{
  static const std::vector<std::string> names = hvs::BuiltinNames();
  return i < names.size() ? names[i].c_str() : nullptr;
}

hvs_status hvs_builtin_texts(const char *name, char **problem, char **instance)
{
  return Guard([&] {
    Need(name, "name");
    const auto b = hvs::GetBuiltin(name);
    if (problem)
    {
      *problem = Dup(b.problem_text);
    }
    if (instance)
    {
      *instance = Dup(b.instance_text);
    }
  });
}

void hvs_generate_options_default(hvs_generate_options *opts)
{
  if (!opts)
  {
    return;
  }
  const hvs::GeneratorConfig c;
  opts->eps_num = c.epsilon.numerator();
  opts->eps_den = c.epsilon.denominator();
  opts->rank_tol = c.rank_tol;
  opts->seed = c.seed;
  opts->max_subset_size = c.max_subset_size;
  opts->hidden = nullptr;
  opts->reduce = c.reduce ? 1 : 0;
}

hvs_status hvs_generate(const hvs_system *sys, const hvs_generate_options *opts,
                        hvs_template **out)
{
  return Guard([&] {
    Need(sys, "system");
    Need(out, "out");
    hvs::GeneratorConfig c;
    if (opts)
    {
      if (opts->eps_den <= 0 || opts->eps_num <= 0 || opts->eps_num >= opts->eps_den)
      {
        throw hvs::Error(hvs::ErrorCode::InvalidArgument, "epsilon must satisfy 0 < eps < 1");
      }
      if (!(opts->rank_tol > 0.0 && opts->rank_tol < 1.0))
      {
        throw hvs::Error(hvs::ErrorCode::InvalidArgument, "rank tolerance must lie in (0, 1)");
      }
      c.epsilon = hvs::Rational(opts->eps_num, opts->eps_den);
      c.rank_tol = opts->rank_tol;
      c.seed = opts->seed;
      c.max_subset_size = opts->max_subset_size;
      c.reduce = opts->reduce != 0;
      if (opts->hidden)
      {
        auto idx = sys->sys.FindVariable(opts->hidden);
        if (!idx)
        {
          throw hvs::Error(hvs::ErrorCode::InvalidArgument,
                           std::string("unknown hidden variable '") + opts->hidden + "'");
        }
        c.forced_hidden = *idx;
      }
    }
    *out = new hvs_template{hvs::Generate(sys->sys, c)};
  });
}

hvs_status hvs_template_parse(const char *text, hvs_template **out)
{
  return Guard([&] {
    Need(text, "text");
    Need(out, "out");
    *out = new hvs_template{hvs::ParseTemplate(text)};
  });
}

hvs_status hvs_template_serialize(const hvs_template *t, char **out)
{
  return Guard([&] {
    Need(t, "template");
    Need(out, "out");
    *out = Dup(hvs::SerializeTemplate(t->tmpl));
  });
}

hvs_status hvs_template_describe(const hvs_template *t, char **out)
{
  return Guard([&] {
    Need(t, "template");
    Need(out, "out");
    *out = Dup(Describe(t->tmpl));
  });
}

hvs_status hvs_template_info_get(const hvs_template *t, hvs_template_info *info)
{
  return Guard([&] {
    Need(t, "template");
    Need(info, "info");
    const auto &x = t->tmpl;
    info->basis_size = x.basis_size();
    info->pencil_size = x.pencil_size();
    info->reduced_size = x.reduced_size();
    info->hidden_index = x.hidden_index;
    info->hidden_degree = x.hidden_degree;
    info->eliminates = x.schedule.CountEliminates();
    info->removes = x.schedule.CountRemoves();
    info->num_variables = x.system.num_variables();
    info->num_slots = x.system.num_slots();
  });
}

const char *hvs_template_variable(const hvs_template *t, size_t i)
{
  if (!t || i >= t->tmpl.system.num_variables())
  {
    return nullptr;
  }
  return t->tmpl.system.variables()[i].c_str();
}

void hvs_template_free(hvs_template *t)
{
  delete t;
}

hvs_status hvs_instance_parse(const hvs_template *t, const char *text, hvs_instance **out)
{
  return Guard([&] {
    Need(t, "template");
    Need(text, "text");
    Need(out, "out");
    *out = new hvs_instance{hvs::ParseInstance(text, t->tmpl.system)};
  });
}

hvs_status hvs_instance_from_values(const hvs_template *t, const double *values, size_t count,
                                    hvs_instance **out)
{
  return Guard([&] {
    Need(t, "template");
    Need(out, "out");
    if (count > 0)
    {
      Need(values, "values");
    }
    hvs::CoefficientInstance inst(std::vector<double>(values, values + count));
    hvs::ValidateInstance(t->tmpl.system, inst);
    *out = new hvs_instance{std::move(inst)};
  });
}

void hvs_instance_free(hvs_instance *inst)
{
  delete inst;
}

void hvs_solve_options_default(hvs_solve_options *opts)
{
  if (!opts)
  {
    return;
  }
  const hvs::SolveOptions o;
  opts->reduce = o.reduce ? 1 : 0;
  opts->keep_all = o.keep_all ? 1 : 0;
  opts->residual_tol = o.residual_tol;
  opts->consistency_tol = o.consistency_tol;
  opts->ratio_tol = o.ratio_tol;
  opts->pivot_tol = o.pivot_tol;
  opts->inf_tol = o.inf_tol;
}

hvs_status hvs_solve(const hvs_template *t, const hvs_instance *inst,
                     const hvs_solve_options *opts, hvs_solutions **out)
{
  return Guard([&] {
    Need(t, "template");
    Need(inst, "instance");
    Need(out, "out");
    *out = new hvs_solutions{hvs::SolveDetailed(t->tmpl, inst->inst, ToOptions(opts)), t->tmpl};
  });
}

size_t hvs_solutions_count(const hvs_solutions *s)
{
  return s ? s->report.solutions.size() : 0;
}

size_t hvs_solutions_valid_count(const hvs_solutions *s)
{
  size_t n = 0;
  if (s)
  {
    for (const auto &x : s->report.solutions)
    {
      n += x.valid() ? 1 : 0;
    }
  }
  return n;
}

int hvs_solutions_used_fallback(const hvs_solutions *s)
{
  return s && s->report.used_fallback ? 1 : 0;
}

size_t hvs_solutions_solved_size(const hvs_solutions *s)
{
  return s ? s->report.solved_size : 0;
}

hvs_status hvs_solutions_point(const hvs_solutions *s, size_t i, double *re, double *im)
{
  return Guard([&] {
    Need(s, "solutions");
    if (i >= s->report.solutions.size())
    {
      throw hvs::Error(hvs::ErrorCode::InvalidArgument, "solution index out of range");
    }
    const auto &p = s->report.solutions[i].point;
    for (std::size_t v = 0; v < p.size(); ++v)
    {
      if (re)
      {
        re[v] = p[v].real();
      }
      if (im)
      {
        im[v] = p[v].imag();
      }
    }
  });
}

hvs_status hvs_solutions_stats(const hvs_solutions *s, size_t i, double *residual_max,
                               double *consistency, hvs_solution_status *status)
{
  return Guard([&] {
    Need(s, "solutions");
    if (i >= s->report.solutions.size())
    {
      throw hvs::Error(hvs::ErrorCode::InvalidArgument, "solution index out of range");
    }
    const auto &x = s->report.solutions[i];
    if (residual_max)
    {
      *residual_max = x.max_residual();
    }
    if (consistency)
    {
      *consistency = x.consistency;
    }
    if (status)
    {
      *status = static_cast<hvs_solution_status>(x.status);
    }
  });
}

hvs_status hvs_solutions_format(const hvs_solutions *s, hvs_format format, char **out)
{
  return Guard([&] {
    Need(s, "solutions");
    Need(out, "out");
    *out = Dup(hvs::FormatSolutions(s->tmpl, s->report,
                                    format == HVS_FORMAT_STRUCT ? hvs::OutputFormat::Struct
                                                                : hvs::OutputFormat::Csv));
  });
}

void hvs_solutions_free(hvs_solutions *s)
{
  delete s;
}

void hvs_bench_options_default(hvs_bench_options *opts)
{
  if (!opts)
  {
    return;
  }
  const hvs::StabilityConfig c;
  opts->trials = c.trials;
  opts->mode = HVS_BENCH_RANDOM;
  opts->gap = c.gap;
  opts->seed = c.seed;
  hvs_solve_options_default(&opts->solve);
}

hvs_status hvs_bench(const hvs_template *t, const hvs_bench_options *opts, hvs_report **out)
{
  return Guard([&] {
    Need(t, "template");
    Need(opts, "options");
    Need(out, "out");
    hvs::StabilityConfig c;
    c.trials = opts->trials;
    c.mode = opts->mode == HVS_BENCH_NEAR_DEGENERATE ? hvs::StabilityMode::NearDegenerate
                                                     : hvs::StabilityMode::Random;
    if (!(opts->gap > 0.0))
    {
      throw hvs::Error(hvs::ErrorCode::InvalidArgument, "gap must be positive");
    }
    c.gap = opts->gap;
    c.seed = opts->seed;
    c.solve = ToOptions(&opts->solve);
    *out = new hvs_report{hvs::RunStability(t->tmpl, c)};
  });
}

hvs_status hvs_report_summary_get(const hvs_report *r, hvs_report_summary *out)
{
  return Guard([&] {
    Need(r, "report");
    Need(out, "out");
    out->trials = r->report.records.size();
    out->successes = r->report.successes;
    out->failures = r->report.failures;
    out->q10 = r->report.q10;
    out->q50 = r->report.q50;
    out->q90 = r->report.q90;
    out->mean_solve_seconds = r->report.mean_solve_seconds;
  });
}

hvs_status hvs_report_csv(const hvs_report *r, char **out)
{
  return Guard([&] {
    Need(r, "report");
    Need(out, "out");
    *out = Dup(hvs::FormatReportCsv(r->report));
  });
}

hvs_status hvs_report_summary_text(const hvs_report *r, const char *label, char **out)
{
  return Guard([&] {
    Need(r, "report");
    Need(out, "out");
    *out = Dup(hvs::FormatReportSummary(r->report, label ? label : "report"));
  });
}

hvs_status hvs_report_histogram(const hvs_report *r, char **out)
{
  return Guard([&] {
    Need(r, "report");
    Need(out, "out");
    *out = Dup(hvs::FormatHistogram(r->report));
  });
}

void hvs_report_free(hvs_report *r)
{
  delete r;
}

}  // extern "C"
