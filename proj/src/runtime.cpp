// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include "hvsolve/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hvsolve/error.hpp"

namespace hvs
{

NumericPencil Instantiate(const SolverTemplate &tmpl, const CoefficientInstance &inst)
{
  ValidateInstance(tmpl.system, inst);
  const auto b = static_cast<Eigen::Index>(tmpl.basis_size());
  const auto l = static_cast<Eigen::Index>(tmpl.hidden_degree);
  const Eigen::Index k = b * l;
  NumericPencil p{Eigen::MatrixXd::Zero(k, k), Eigen::MatrixXd::Zero(k, k)};
  for (Eigen::Index blk = 0; blk + 1 < l; ++blk)
  {
    for (Eigen::Index i = 0; i < b; ++i)
    {
      p.a(blk * b + i, (blk + 1) * b + i) = 1.0;
      p.b(blk * b + i, blk * b + i) = 1.0;
    }
  }
  const Eigen::Index last = (l - 1) * b;
  for (const auto &e : tmpl.placement)
  {
    const auto r = static_cast<Eigen::Index>(e.row);
    const auto c = static_cast<Eigen::Index>(e.col);
    const double v = inst[e.slot];
    if (e.hidden_degree == tmpl.hidden_degree)
    {
      p.b(last + r, last + c) = v;
    }
    else
    {
      p.a(last + r, e.hidden_degree * b + c) = -v;
    }
  }
  return p;
}

std::optional<NumericPencil> ApplySchedule(const NumericPencil &pencil,
                                           const ReductionSchedule &schedule, double pivot_tol)
{
  const Eigen::Index k = pencil.a.rows();
  if (pencil.a.cols() != k || pencil.b.rows() != k || pencil.b.cols() != k)
  {
    throw Error(ErrorCode::InvalidArgument, "pencil matrices are not square of equal size");
  }
  for (const auto &op : schedule.ops)
  {
    if (static_cast<Eigen::Index>(std::max({op.col, op.pivot, op.target})) >= k)
    {
      throw Error(ErrorCode::InvalidArgument, "schedule does not fit the pencil size");
    }
  }
  NumericPencil w = pencil;
  std::vector<char> row_alive(static_cast<std::size_t>(k), 1);
  std::vector<char> col_alive(static_cast<std::size_t>(k), 1);

  for (const auto &op : schedule.ops)
  {
    Eigen::MatrixXd &other = op.side == ZeroSide::A ? w.b : w.a;
    const auto j = static_cast<Eigen::Index>(op.col);
    const auto i1 = static_cast<Eigen::Index>(op.pivot);
    if (op.kind == ScheduleOp::Kind::Eliminate)
    {
      const auto i2 = static_cast<Eigen::Index>(op.target);
      double col_max = 0.0;
      for (Eigen::Index r = 0; r < k; ++r)
      {
        if (row_alive[static_cast<std::size_t>(r)])
        {
          col_max = std::max(col_max, std::abs(other(r, j)));
        }
      }
      const double pivot = other(i1, j);
      if (std::abs(pivot) <= pivot_tol * col_max || pivot == 0.0)
      {
        return std::nullopt;
      }
      const double mult = -other(i2, j) / pivot;
      w.a.row(i2) += mult * w.a.row(i1);
      w.b.row(i2) += mult * w.b.row(i1);
      other(i2, j) = 0.0;
    }
    else
    {
      double scale = 0.0;
      for (Eigen::Index r = 0; r < k; ++r)
      {
        if (!row_alive[static_cast<std::size_t>(r)])
        {
          continue;
        }
        for (Eigen::Index c = 0; c < k; ++c)
        {
          if (col_alive[static_cast<std::size_t>(c)])
          {
            scale = std::max(scale, std::abs(other(r, c)));
          }
        }
      }
      const double kept = other(i1, j);
      if (std::abs(kept) <= pivot_tol * scale || kept == 0.0)
      {
        return std::nullopt;
      }
      row_alive[op.pivot] = 0;
      col_alive[op.col] = 0;
    }
  }

  const auto nr = static_cast<Eigen::Index>(schedule.surviving_rows.size());
  const auto nc = static_cast<Eigen::Index>(schedule.surviving_cols.size());
  if (nr != nc)
  {
    throw Error(ErrorCode::InvalidArgument, "schedule leaves a non-square pencil");
  }
  NumericPencil out{Eigen::MatrixXd(nr, nc), Eigen::MatrixXd(nr, nc)};
  for (Eigen::Index r = 0; r < nr; ++r)
  {
    for (Eigen::Index c = 0; c < nc; ++c)
    {
      const auto sr = static_cast<Eigen::Index>(schedule.surviving_rows[static_cast<std::size_t>(r)]);
      const auto sc = static_cast<Eigen::Index>(schedule.surviving_cols[static_cast<std::size_t>(c)]);
      out.a(r, c) = w.a(sr, sc);
      out.b(r, c) = w.b(sr, sc);
    }
  }
  return out;
}

const char *ToString(SolutionStatus s)
{
  switch (s)
  {
    case SolutionStatus::Valid:
      return "valid";
    case SolutionStatus::Invalid:
      return "invalid";
    case SolutionStatus::Indeterminate:
      return "indeterminate";
  }
  return "?";
}

double Solution::max_residual() const
{
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

namespace
{

// Entries smaller than this fraction of max|v| are too noisy to enter the consistency score.
constexpr double kConsistencyFloor = 1e-6;

}  // namespace

RecoveredPoint RecoverPoint(const SolverTemplate &tmpl, std::span<const std::size_t> columns,
                            const Eigen::VectorXcd &v, std::complex<double> eigenvalue,
                            double ratio_tol)
{
  const std::size_t n = tmpl.system.num_variables();
  const std::size_t b = tmpl.basis_size();
  const std::size_t h = tmpl.hidden_index;
  std::map<std::size_t, Eigen::Index> pos;
  for (std::size_t i = 0; i < columns.size(); ++i)
  {
    pos[columns[i]] = static_cast<Eigen::Index>(i);
  }
  RecoveredPoint out;
  out.point.assign(n, 0.0);
  out.point[h] = eigenvalue;
  const double norm = v.norm();
  for (const auto &rp : tmpl.recovery)
  {
    auto ni = pos.find(rp.numerator);
    auto di = pos.find(rp.denominator);
    if (ni == pos.end() || di == pos.end())
    {
      throw Error(ErrorCode::Integrity, "recovery column missing from the solved pencil");
    }
    const std::complex<double> den = v(di->second);
    if (std::abs(den) < ratio_tol * norm || den == 0.0)
    {
      out.indeterminate = true;
      out.point[rp.variable] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    out.point[rp.variable] = v(ni->second) / den;
  }
  if (out.indeterminate)
  {
    return out;
  }

  // Every unit step between available columns predicts a variable value.
  const double vmax = v.cwiseAbs().maxCoeff();
  std::map<std::pair<std::size_t, ExponentVector>, Eigen::Index> by_label;
  for (const auto &[c, p] : pos)
  {
    by_label[{c / b, tmpl.columns[c % b]}] = p;
  }
  double worst = 0.0;
  auto check = [&](Eigen::Index num, Eigen::Index den, std::complex<double> expect) {
    if (std::abs(v(den)) < kConsistencyFloor * vmax)
    {
      return;
    }
    worst = std::max(worst, std::abs(v(num) / v(den) - expect) / std::max(1.0, std::abs(expect)));
  };
  for (const auto &[label, p] : by_label)
  {
    for (std::size_t var = 0; var < n; ++var)
    {
      if (var == h)
      {
        auto it = by_label.find({label.first + 1, label.second});
        if (it != by_label.end())
        {
          check(it->second, p, eigenvalue);
        }
        continue;
      }
      const std::size_t base = var < h ? var : var - 1;
      auto it = by_label.find({label.first, label.second + ExponentVector::Unit(n - 1, base)});
      if (it != by_label.end())
      {
        check(it->second, p, out.point[var]);
      }
    }
  }
  out.consistency = worst;
  return out;
}

SolveReport SolveDetailed(const SolverTemplate &tmpl, const CoefficientInstance &inst,
                          const SolveOptions &options)
{
  ValidateInstance(tmpl.system, inst);
  SolveReport report;
  NumericPencil full = Instantiate(tmpl, inst);
  report.pencil_size = static_cast<std::size_t>(full.a.rows());

  std::vector<std::size_t> columns;
  std::optional<NumericPencil> reduced;
  if (options.reduce && !tmpl.schedule.ops.empty())
  {
    reduced = ApplySchedule(full, tmpl.schedule, options.pivot_tol);
    report.used_fallback = !reduced.has_value();
  }
  const NumericPencil &work = reduced ? *reduced : full;
  if (reduced)
  {
    columns = tmpl.schedule.surviving_cols;
  }
  else
  {
    for (std::size_t c = 0; c < report.pencil_size; ++c)
    {
      columns.push_back(c);
    }
  }
  report.solved_size = static_cast<std::size_t>(work.a.rows());

  const auto norms = CoefficientNorms(tmpl.system, inst);
  for (const auto &pair : SolveGep(work.a, work.b, options.inf_tol))
  {
    if (pair.kind != EigenClass::Finite)
    {
      continue;
    }
    ++report.finite_eigenvalues;
    auto rec = RecoverPoint(tmpl, columns, pair.vector, pair.value, options.ratio_tol);
    Solution s;
    s.eigenvalue = pair.value;
    s.point = rec.point;
    s.consistency = rec.consistency;
    if (rec.indeterminate)
    {
      s.status = SolutionStatus::Indeterminate;
      s.relative_residual = std::numeric_limits<double>::infinity();
      s.residuals.assign(tmpl.system.num_polys(), std::numeric_limits<double>::infinity());
      if (options.keep_all)
      {
        report.solutions.push_back(std::move(s));
      }
      continue;
    }
    if (options.realify_tol)
    {
      bool real = std::all_of(s.point.begin(), s.point.end(), [&](std::complex<double> z) {
        return std::abs(z.imag()) <= *options.realify_tol * std::max(1.0, std::abs(z.real()));
      });
      if (real)
      {
        for (auto &z : s.point)
        {
          z = z.real();
        }
      }
    }
    s.residuals = Evaluate(tmpl.system, inst, s.point);
    for (std::size_t i = 0; i < s.residuals.size(); ++i)
    {
      const double scale = norms[i] > 0.0 ? norms[i] : 1.0;
      s.relative_residual = std::max(s.relative_residual, s.residuals[i] / scale);
    }
    const bool ok = std::isfinite(s.relative_residual) &&
                    s.relative_residual <= options.residual_tol &&
                    s.consistency <= options.consistency_tol;
    s.status = ok ? SolutionStatus::Valid : SolutionStatus::Invalid;
    if (ok || options.keep_all)
    {
      report.solutions.push_back(std::move(s));
    }
  }
  std::stable_sort(report.solutions.begin(), report.solutions.end(),
                   [](const Solution &a, const Solution &b) {
                     return a.max_residual() < b.max_residual();
                   });
  return report;
}

std::string FormatSolutions(const SolverTemplate &tmpl, const SolveReport &report,
                            OutputFormat format)
{
  const auto &vars = tmpl.system.variables();
  std::ostringstream os;
  os.precision(17);
  if (format == OutputFormat::Csv)
  {
    os << "index,status,valid,eigen_re,eigen_im";
    for (const auto &v : vars)
    {
      os << ',' << v << "_re," << v << "_im";
    }
    os << ",residual_max,consistency\n";
    for (std::size_t i = 0; i < report.solutions.size(); ++i)
    {
      const auto &s = report.solutions[i];
      os << i << ',' << ToString(s.status) << ',' << (s.valid() ? 1 : 0) << ','
         << s.eigenvalue.real() << ',' << s.eigenvalue.imag();
      for (const auto &z : s.point)
      {
        os << ',' << z.real() << ',' << z.imag();
      }
      os << ',' << s.max_residual() << ',' << s.consistency << '\n';
    }
    return os.str();
  }
  using nlohmann::json;
  auto num = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  json sols = json::array();
  std::size_t valid = 0;
  for (const auto &s : report.solutions)
  {
    valid += s.valid() ? 1 : 0;
    json point = json::object();
    for (std::size_t v = 0; v < vars.size(); ++v)
    {
      point[vars[v]] = {num(s.point[v].real()), num(s.point[v].imag())};
    }
    sols.push_back({{"status", ToString(s.status)},
                    {"valid", s.valid()},
                    {"eigenvalue", {num(s.eigenvalue.real()), num(s.eigenvalue.imag())}},
                    {"point", point},
                    {"residual_max", num(s.max_residual())},
                    {"consistency", num(s.consistency)}});
  }
  json j = {{"solutions", sols},
            {"count", report.solutions.size()},
            {"valid_count", valid},
            {"pencil_size", report.pencil_size},
            {"solved_size", report.solved_size},
            {"fallback", report.used_fallback}};
  return j.dump(2) + "\n";
}

}  // namespace hvs
