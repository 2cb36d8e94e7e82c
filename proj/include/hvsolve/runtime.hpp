// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hvsolve/numeric.hpp"
#include "hvsolve/template.hpp"

namespace hvs
{

struct NumericPencil
{
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
};

// Unreduced k x k pencil with slot values filled in; structural zeros stay exactly 0.0.
NumericPencil Instantiate(const SolverTemplate &tmpl, const CoefficientInstance &inst);

// Replays the schedule on live values. Eliminate multipliers are -O[target,col]/O[pivot,col]
// and hit the same row of A and B. Returns nullopt (fallback) when an Eliminate pivot is at
// most pivot_tol * max|column| or a Remove's kept entry is at most pivot_tol * max|O|.
// The result is indexed by (surviving_rows, surviving_cols).
std::optional<NumericPencil> ApplySchedule(const NumericPencil &pencil,
                                           const ReductionSchedule &schedule, double pivot_tol);

enum class SolutionStatus
{
  Valid,
  Invalid,        // residual or consistency test failed
  Indeterminate,  // a recovery denominator vanished
};

const char *ToString(SolutionStatus s);

struct Solution
{
  std::vector<std::complex<double>> point;  // all n variables, hidden one included
  std::vector<double> residuals;            // |f_i(point)|
  std::complex<double> eigenvalue;
  double consistency = 0.0;  // max relative deviation among redundant monomial ratios
  double relative_residual = 0.0;
  SolutionStatus status = SolutionStatus::Invalid;

  bool valid() const { return status == SolutionStatus::Valid; }
  double max_residual() const;
};

struct SolveOptions
{
  bool reduce = true;
  bool keep_all = false;
  double residual_tol = 1e-6;  // relative to the coefficient 1-norm of each polynomial
  double consistency_tol = 1e-4;
  double ratio_tol = 1e-12;
  double pivot_tol = 1e-12;
  double inf_tol = kDefaultInfTol;
  std::optional<double> realify_tol;  // drop imaginary parts below this (relative) when set
};

struct SolveReport
{
  std::vector<Solution> solutions;  // sorted by max residual
  bool used_fallback = false;
  std::size_t pencil_size = 0;
  std::size_t solved_size = 0;
  std::size_t finite_eigenvalues = 0;
};

SolveReport SolveDetailed(const SolverTemplate &tmpl, const CoefficientInstance &inst,
                          const SolveOptions &options = {});

inline std::vector<Solution> Solve(const SolverTemplate &tmpl, const CoefficientInstance &inst,
                                   const SolveOptions &options = {})
{
  return SolveDetailed(tmpl, inst, options).solutions;
}

struct RecoveredPoint
{
  std::vector<std::complex<double>> point;
  double consistency = 0.0;
  bool indeterminate = false;
};

// Reads the variables off an eigenvector whose entries correspond to the unreduced pencil
// columns listed in `columns`.
RecoveredPoint RecoverPoint(const SolverTemplate &tmpl, std::span<const std::size_t> columns,
                            const Eigen::VectorXcd &v, std::complex<double> eigenvalue,
                            double ratio_tol);

enum class OutputFormat
{
  Csv,
  Struct,
};

std::string FormatSolutions(const SolverTemplate &tmpl, const SolveReport &report,
                            OutputFormat format);

}  // namespace hvs
