// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hvsolve/poly.hpp"
#include "hvsolve/polytope.hpp"

namespace hvs
{

// Row of M'(x_h): polynomial `poly` multiplied by the base monomial `multiplier`.
struct RowSpec
{
  std::size_t poly = 0;
  ExponentVector multiplier;

  friend bool operator==(const RowSpec &, const RowSpec &) = default;
};

// Slot `slot` sits at (row, col) of M_{hidden_degree}.
struct PlacementEntry
{
  std::size_t row = 0;
  std::size_t col = 0;
  int hidden_degree = 0;
  SlotId slot = 0;

  friend bool operator==(const PlacementEntry &, const PlacementEntry &) = default;
};

// Which matrix of the pencil carries the structurally zero column.
enum class ZeroSide
{
  A,  // removes a parasitic zero eigenvalue
  B,  // removes a parasitic infinite eigenvalue
};

struct ScheduleOp
{
  enum class Kind
  {
    Eliminate,  // row `target` -= (O[target,col] / O[pivot,col]) * row `pivot`, in A and B
    Remove,     // delete row `pivot` and column `col`
  };

  Kind kind = Kind::Remove;
  ZeroSide side = ZeroSide::A;
  std::size_t col = 0;
  std::size_t pivot = 0;
  std::size_t target = 0;  // Eliminate only

  friend bool operator==(const ScheduleOp &, const ScheduleOp &) = default;
};

// Offline-recorded parasitic eigenvalue removal. All indices refer to the unreduced pencil.
struct ReductionSchedule
{
  std::vector<ScheduleOp> ops;
  std::vector<std::size_t> surviving_rows;
  std::vector<std::size_t> surviving_cols;

  std::size_t CountEliminates() const;
  std::size_t CountRemoves() const;

  friend bool operator==(const ReductionSchedule &, const ReductionSchedule &) = default;
};

// Base variable `variable` equals y[numerator] / y[denominator] for an eigenvector y of the
// unreduced pencil; both columns survive the schedule.
struct RecoveryPair
{
  std::size_t variable = 0;
  std::size_t numerator = 0;
  std::size_t denominator = 0;

  friend bool operator==(const RecoveryPair &, const RecoveryPair &) = default;
};

struct SolverTemplate
{
  static constexpr int kFormatVersion = 1;

  PolySystem system;
  std::size_t hidden_index = 0;
  std::vector<std::size_t> subset;  // polynomials whose Newton polytopes shaped the basis
  Displacement displacement;
  std::vector<ExponentVector> columns;  // basis monomials over the base variables
  std::vector<RowSpec> rows;
  int hidden_degree = 0;
  std::vector<PlacementEntry> placement;
  ReductionSchedule schedule;
  std::vector<RecoveryPair> recovery;
  std::uint64_t seed = 0;

  std::size_t basis_size() const { return columns.size(); }
  std::size_t pencil_size() const { return columns.size() * static_cast<std::size_t>(hidden_degree); }
  std::size_t reduced_size() const { return schedule.surviving_cols.size(); }
};

// Entries of M'(x_h) for the given rows and columns; the hidden degree of the resulting
// template is the largest hidden degree placed.
std::vector<PlacementEntry> BuildPlacement(const PolySystem &sys, std::size_t hidden,
                                           const std::vector<ExponentVector> &columns,
                                           const std::vector<RowSpec> &rows);

// Canonical JSON text; Serialize(Parse(Serialize(t))) == Serialize(t).
std::string SerializeTemplate(const SolverTemplate &tmpl);

// Throws Version for an unsupported format and Integrity for malformed or inconsistent files.
SolverTemplate ParseTemplate(std::string_view text);

}  // namespace hvs
