// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hvsolve/poly.hpp"
#include "hvsolve/polytope.hpp"
#include "hvsolve/template.hpp"

namespace hvs
{

inline constexpr std::uint64_t kDefaultSeed = 20260417;

struct GeneratorConfig
{
  Rational epsilon{1, 1000};
  double rank_tol = 1e-8;
  int rank_trials = 3;
  int schedule_trials = 3;
  std::uint64_t seed = kDefaultSeed;
  std::size_t max_subset_size = 0;  // 0: every subset (needs m <= 12)
  std::optional<std::size_t> forced_hidden;
  bool reduce = true;
};

struct BasisCandidate
{
  std::size_t hidden_index = 0;
  std::vector<std::size_t> subset;
  Displacement displacement;
  std::vector<ExponentVector> basis;                     // sorted
  std::vector<std::vector<ExponentVector>> multipliers;  // per polynomial, sorted

  std::size_t total_rows() const;
  // Every (poly, multiplier) row in enumeration order.
  std::vector<RowSpec> AllRows() const;
};

struct Rejection
{
  std::size_t hidden_index = 0;
  std::vector<std::size_t> subset;
  Displacement displacement;
  std::size_t basis_size = 0;
  std::string reason;
};

std::string Describe(const PolySystem &sys, const Rejection &r);

// { t >= 0 : t + support subset of basis }
std::vector<ExponentVector> MultiplierSet(std::span<const ExponentVector> support,
                                          std::span<const ExponentVector> basis);

// Visits candidates in tie-break order: hidden index descending, subsets by decreasing size
// then ascending index list, displacements +eps < 0 < -eps per axis. Candidates failing the
// multiplier acceptance rule go to `reject` instead of `accept`.
void ForEachCandidate(const PolySystem &sys, const GeneratorConfig &config,
                      const std::function<void(BasisCandidate)> &accept,
                      const std::function<void(Rejection)> &reject);

std::vector<BasisCandidate> EnumerateCandidates(const PolySystem &sys,
                                                const GeneratorConfig &config,
                                                std::vector<Rejection> *rejected = nullptr);

// M'(z) with the given rows and columns at numeric slot values.
Eigen::MatrixXd AssembleMatrix(const PolySystem &sys, std::size_t hidden,
                               std::span<const ExponentVector> columns,
                               std::span<const RowSpec> rows, const CoefficientInstance &inst,
                               double z);

// Stacked M' has numeric rank |B| at `trials` random instantiations (slots and hidden value
// uniform on [-1, 1]).
bool RankTest(const PolySystem &sys, const BasisCandidate &cand, int trials, std::uint64_t seed,
              double rank_tol);

// Greedy pick of |B| rows in enumeration order, each raising the numeric rank at a random
// instantiation; nullopt unless the square result is full rank on 3 fresh trials.
std::optional<std::vector<RowSpec>> SelectRows(const PolySystem &sys, const BasisCandidate &cand,
                                               std::uint64_t seed, double rank_tol);

// Per base variable, a surviving same-block column pair one unit step apart, preferring
// low-degree denominators and low blocks. nullopt if some variable has none.
std::optional<std::vector<RecoveryPair>> BuildRecovery(const SolverTemplate &tmpl);

struct CandidateOutcome
{
  std::optional<SolverTemplate> tmpl;
  std::string reason;  // set when tmpl is empty
};

// Rank gate, row selection, placement, reduction schedule and recovery map for one candidate.
CandidateOutcome EvaluateCandidate(const PolySystem &sys, const BasisCandidate &cand,
                                   const GeneratorConfig &config);

struct GenerationResult
{
  std::optional<SolverTemplate> tmpl;
  std::vector<Rejection> rejections;
  std::size_t enumerated = 0;
  std::size_t accepted = 0;  // passed the multiplier rule
};

GenerationResult GenerateTemplate(const PolySystem &sys, const GeneratorConfig &config = {});

// Throws GenerationFailed with per-candidate diagnostics when nothing survives.
SolverTemplate Generate(const PolySystem &sys, const GeneratorConfig &config = {});

}  // namespace hvs
