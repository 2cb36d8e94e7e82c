// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hvsolve/template.hpp"

namespace hvs
{

// coefficient * value(slot), or a plain integer constant when there is no slot.
struct SymbolicEntry
{
  std::int64_t coefficient = 0;
  std::optional<SlotId> slot;

  double Value(const CoefficientInstance &inst) const
  {
    return static_cast<double>(coefficient) * (slot ? inst[*slot] : 1.0);
  }

  friend bool operator==(const SymbolicEntry &, const SymbolicEntry &) = default;
};

// Unmapped entries are structural zeros: zero for every coefficient instance.
class SymbolicMatrix
{
public:
  SymbolicMatrix() = default;
  SymbolicMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::map<std::pair<std::size_t, std::size_t>, SymbolicEntry> &entries() const
  {
    return entries_;
  }

  void Set(std::size_t r, std::size_t c, SymbolicEntry e) { entries_[{r, c}] = e; }
  const SymbolicEntry *Find(std::size_t r, std::size_t c) const;
  bool IsStructuralZero(std::size_t r, std::size_t c) const { return Find(r, c) == nullptr; }

  Eigen::MatrixXd Instantiate(const CoefficientInstance &inst) const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, SymbolicEntry> entries_;
};

// Column c carries x_h^block * x^monomial in the eigenvector.
struct ColumnLabel
{
  std::size_t block = 0;
  ExponentVector monomial;
};

struct MatrixPencil
{
  SymbolicMatrix a;
  SymbolicMatrix b;
  std::size_t block_size = 0;
  std::size_t blocks = 0;
  std::vector<ColumnLabel> labels;

  std::size_t size() const { return a.rows(); }
};

// M_0 ... M_l of (M_0 + M_1 x + ... + M_l x^l) x' = 0.
std::vector<SymbolicMatrix> BuildPep(const SolverTemplate &tmpl);

// First companion form: A has identity blocks on the block super-diagonal and
// [-M_0 ... -M_{l-1}] in its last block row; B = diag(I, ..., I, M_l).
MatrixPencil Linearize(std::span<const SymbolicMatrix> coeffs,
                       std::span<const ExponentVector> columns);

inline MatrixPencil TemplatePencil(const SolverTemplate &tmpl)
{
  auto pep = BuildPep(tmpl);
  return Linearize(pep, tmpl.columns);
}

// Greedy structural reduction: zero columns of A (then of B) whose partner column in the other
// matrix is cleared down to one structural non-zero by row eliminations, then removed together
// with that row. Iterates to a fixpoint.
ReductionSchedule ReduceSchedule(const MatrixPencil &pencil);

struct ScheduleCheck
{
  bool ok = false;
  std::size_t removed_zero = 0;      // drop in |lambda| < zero_tol count, last trial
  std::size_t removed_infinite = 0;  // drop in infinite / |lambda| > big count, last trial
};

// Compares non-parasitic spectra of the unreduced and reduced pencils on random instances
// (slots uniform on [-1, 1]).
ScheduleCheck CheckSchedule(const MatrixPencil &pencil, const ReductionSchedule &schedule,
                            int trials, std::uint64_t seed, double rel_tol = 1e-8);

inline bool VerifySchedule(const MatrixPencil &pencil, const ReductionSchedule &schedule,
                           int trials, std::uint64_t seed)
{
  return CheckSchedule(pencil, schedule, trials, seed).ok;
}

}  // namespace hvs
