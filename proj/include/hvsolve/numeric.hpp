// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hvsolve/poly.hpp"

namespace hvs
{

struct SolverTemplate;

enum class EigenClass
{
  Finite,
  Infinite,
  Indeterminate,  // alpha and beta both vanish: singular pencil direction
};

// One generalized eigenpair of A y = lambda B y, kept in the (alpha, beta) form produced by
// the QZ algorithm so infinite eigenvalues are representable.
struct EigenPair
{
  std::complex<double> alpha;
  double beta = 0.0;
  std::complex<double> value;  // alpha / beta for finite pairs, otherwise inf
  Eigen::VectorXcd vector;     // unit 2-norm
  EigenClass kind = EigenClass::Finite;
};

inline constexpr double kDefaultInfTol = 1e-10;

// Generalized eigen-decomposition via QZ (LAPACK dggev). B may be singular. A pair is
// infinite when |beta| <= inf_tol * |alpha|.
std::vector<EigenPair> SolveGep(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b,
                                double inf_tol = kDefaultInfTol);

// ||A v - lambda B v|| / ((||A|| + |lambda| ||B||) ||v||), Frobenius norms.
double BackwardError(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b, const EigenPair &p);

// Number of singular values above rel_tol * sigma_max. Zero for the zero matrix.
std::size_t NumericRank(const Eigen::MatrixXd &m, double rel_tol);

// Roots of c[0] + c[1] z + ... + c[q] z^q from the companion matrix eigenvalues.
std::vector<std::complex<double>> PolyRoots(std::span<const std::complex<double>> coeffs);

// Finite eigenvalues with zero_tol < |lambda| < big; these are the ones a parasitic-eigenvalue
// reduction must preserve.
std::vector<std::complex<double>> NonParasiticSpectrum(std::span<const EigenPair> pairs,
                                                       double zero_tol = 1e-10,
                                                       double big = 1e10);

// True when a and b have equal size and can be paired with |x - y| <= rel_tol * max(1, |x|).
bool MatchMultisets(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b,
                    double rel_tol);

struct DeterminantPolynomial
{
  std::vector<std::complex<double>> coeffs;  // ascending powers of the hidden variable
  bool degenerate = false;                   // M'(x) numerically singular at every sample
};

// Test oracle: samples det M'(x) on l*b+1 points of a circle and interpolates the determinant
// polynomial by an inverse DFT. M'(x) is rebuilt from the template's rows and the original
// polynomials rather than from the stored placement.
DeterminantPolynomial DetInterpolationOracle(const SolverTemplate &tmpl,
                                             const CoefficientInstance &inst,
                                             double radius = 1.0);

// Roots of an oracle polynomial: leading coefficients below trim_tol * max|c| are dropped
// (infinite eigenvalues); each negligible trailing one is an exact root at zero.
std::vector<std::complex<double>> OracleRoots(const DeterminantPolynomial &p,
                                              double trim_tol = 1e-11);

// Aberth iteration on det M'(z) evaluated directly (LU, Jacobi's formula for the log
// derivative), started from interpolated roots. Needs the full root count.
std::vector<std::complex<double>> PolishDeterminantRoots(const SolverTemplate &tmpl,
                                                         const CoefficientInstance &inst,
                                                         std::vector<std::complex<double>> roots,
                                                         int max_iter = 100);

struct RootMoments
{
  double count = 0.0;              // roots of det M'(z) inside the circle
  std::complex<double> sum = 0.0;  // their sum
};

// Argument-principle moments of det M'(z) on a circle, from tr(M'^-1 dM'/dz). The circle must
// stay clear of roots; a cluster's mean sum/count is well conditioned even when its members
// are not.
RootMoments DeterminantRootMoments(const SolverTemplate &tmpl, const CoefficientInstance &inst,
                                   std::complex<double> center, double radius, int samples = 64);

struct DeflatedPencil
{
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  std::size_t infinite = 0;  // eigenvalues at infinity removed
};

// Staircase removal of the infinite eigenvalues of a regular pencil: repeatedly splits off the
// numerical null space of B (singular values <= rank_tol * max(||A||, ||B||)) together with its
// image under A. Whole Jordan chains at infinity go at once, so none survive as huge finite
// eigenvalues. Throws Numerical for a singular pencil.
DeflatedPencil DeflateInfinite(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b,
                               double rank_tol = 1e-10);

}  // namespace hvs
