// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/rational.hpp>

#include "hvsolve/poly.hpp"

namespace hvs
{

using Rational = boost::rational<std::int64_t>;

// normal . x <= offset, with a primitive integer normal.
struct HalfSpace
{
  std::vector<std::int64_t> normal;
  std::int64_t offset = 0;

  friend auto operator<=>(const HalfSpace &, const HalfSpace &) = default;
};

// normal . x == offset
struct Hyperplane
{
  std::vector<std::int64_t> normal;
  std::int64_t offset = 0;

  friend auto operator<=>(const Hyperplane &, const Hyperplane &) = default;
};

// Convex hull of finitely many integer points, kept in exact form: the vertex set, the
// facet inequalities inside the affine hull, and the equalities cutting out the affine hull
// when the polytope is not full-dimensional.
class LatticePolytope
{
public:
  std::size_t dim() const { return dim_; }
  std::size_t affine_dim() const { return affine_dim_; }
  const std::vector<ExponentVector> &vertices() const { return vertices_; }
  const std::vector<HalfSpace> &facets() const { return facets_; }
  const std::vector<Hyperplane> &affine_hull() const { return equalities_; }

  bool Contains(const ExponentVector &p) const;

  friend bool operator==(const LatticePolytope &a, const LatticePolytope &b)
  {
    return a.dim_ == b.dim_ && a.vertices_ == b.vertices_;
  }

  friend LatticePolytope ConvexHull(std::span<const ExponentVector> points);

private:
  std::size_t dim_ = 0;
  std::size_t affine_dim_ = 0;
  std::vector<ExponentVector> vertices_;  // sorted
  std::vector<HalfSpace> facets_;         // sorted
  std::vector<Hyperplane> equalities_;
};

LatticePolytope ConvexHull(std::span<const ExponentVector> points);

inline LatticePolytope NewtonPolytope(std::span<const ExponentVector> support)
{
  return ConvexHull(support);
}

LatticePolytope MinkowskiSum(const LatticePolytope &p, const LatticePolytope &q);

// delta = epsilon * signs, signs in {-1, 0, +1}.
struct Displacement
{
  std::vector<int> signs;
  Rational epsilon{1, 1000};

  std::size_t dim() const { return signs.size(); }
  friend bool operator==(const Displacement &, const Displacement &) = default;
};

// All 3^dim sign patterns. Ordered lexicographically with +eps before 0 before -eps.
std::vector<Displacement> AllDisplacements(std::size_t dim, Rational epsilon);

// Integer points p with p - delta in P, decided in exact integer arithmetic.
std::vector<ExponentVector> LatticePoints(const LatticePolytope &p, const Displacement &delta);

}  // namespace hvs
