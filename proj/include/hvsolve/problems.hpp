// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hvsolve/poly.hpp"
#include "hvsolve/runtime.hpp"
#include "hvsolve/template.hpp"

namespace hvs
{

using Point = std::vector<std::complex<double>>;

struct Builtin
{
  std::string name;
  std::string problem_text;
  std::string instance_text;
  PolySystem system;
  CoefficientInstance instance;
  std::vector<Point> roots;
};

std::vector<std::string> BuiltinNames();
Builtin GetBuiltin(std::string_view name);  // SYS-A, SYS-B, SYS-C

struct PlantedSpec
{
  std::size_t n = 2;
  std::size_t m = 2;
  std::vector<int> degrees;      // total degree bound per polynomial; empty: `degree` for all
  int degree = 2;
  double density = 1.0;          // chance to keep each mixed monomial; 1 and x_j^d always kept
  std::size_t num_roots = 2;     // used when `roots` is empty
  std::vector<std::vector<double>> roots;
  double separation = 0.2;       // minimum max-norm distance between random roots
};

struct PlantedInstance
{
  PolySystem system;
  CoefficientInstance instance;
  std::vector<Point> roots;
};

// Real roots uniform on [-1, 1] with every |coordinate| >= 0.1, pairwise max-norm distance at
// least `separation` and coordinates at least separation/4 apart on every axis.
std::vector<std::vector<double>> RandomRoots(std::size_t n, std::size_t count, double separation,
                                             std::mt19937_64 &rng);

// Random unit-norm null vector of each polynomial's root-evaluation matrix. Slots listed in
// `zero_slots` are forced to 0. Throws InvalidArgument when a polynomial has no free null
// direction.
CoefficientInstance PlantCoefficients(const PolySystem &sys,
                                      const std::vector<std::vector<double>> &roots,
                                      std::mt19937_64 &rng,
                                      const std::vector<SlotId> &zero_slots = {});

PlantedInstance GeneratePlanted(const PlantedSpec &cfg, std::uint64_t seed);

// Roots as GeneratePlanted plus a partner of the first root at max-norm distance `gap`.
PlantedInstance GenerateNearDegenerate(const PlantedSpec &cfg, std::uint64_t seed, double gap);

// Closest-solution error: max over roots of min over solutions of the max-norm distance.
double ClosestRootError(const std::vector<Point> &roots, const std::vector<Solution> &solutions);

enum class StabilityMode
{
  Random,
  NearDegenerate,
};

struct StabilityConfig
{
  std::size_t trials = 100;
  StabilityMode mode = StabilityMode::Random;
  double gap = 1e-2;
  std::uint64_t seed = 1;
  std::size_t roots = 3;          // capped by the smallest term count minus one
  double failure_error = 1e-4;
  SolveOptions solve;
};

struct TrialRecord
{
  std::size_t trial = 0;
  bool failed = false;
  double log10_error = 0.0;
  double log10_residual = 0.0;
  std::size_t solutions = 0;
  double seconds = 0.0;
};

struct StabilityReport
{
  std::vector<TrialRecord> records;
  std::size_t successes = 0;
  std::size_t failures = 0;
  double q10 = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
  double mean_solve_seconds = 0.0;
  // histogram of successful log10 errors; bin i covers [edges[i], edges[i+1])
  std::vector<double> edges;
  std::vector<std::size_t> counts;
};

// Plants roots on the template's own system each trial (trial seeds derived from the trial
// index), solves and aggregates.
StabilityReport RunStability(const SolverTemplate &tmpl, const StabilityConfig &config);

std::string FormatReportCsv(const StabilityReport &report);
std::string FormatReportSummary(const StabilityReport &report, std::string_view label);
std::string FormatHistogram(const StabilityReport &report);

}  // namespace hvs
