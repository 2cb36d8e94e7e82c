// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include "hvsolve/polytope.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "hvsolve/error.hpp"

namespace hvs
{

namespace
{

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using RatRow = std::vector<cpp_rational>;

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> RowReduce(std::vector<RatRow> &m, std::size_t cols)
{
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c)
  {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0)
    {
      ++p;
    }
    if (p == m.size())
    {
      continue;
    }
    std::swap(m[p], m[r]);
    cpp_rational inv = 1 / m[r][c];
    for (auto &v : m[r])
    {
      v *= inv;
    }
    for (std::size_t i = 0; i < m.size(); ++i)
    {
      if (i != r && m[i][c] != 0)
      {
        cpp_rational f = m[i][c];
        for (std::size_t j = 0; j < cols; ++j)
        {
          m[i][j] -= f * m[r][j];
        }
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t Rank(std::vector<RatRow> m, std::size_t cols)
{
  return RowReduce(m, cols).size();
}

std::vector<std::int64_t> Primitive(const RatRow &v)
{
  cpp_int l = 1;
  for (const auto &x : v)
  {
    l = boost::multiprecision::lcm(l, denominator(x));
  }
  std::vector<cpp_int> ints;
  cpp_int g = 0;
  for (const auto &x : v)
  {
    cpp_int i = numerator(x) * (l / denominator(x));
    g = boost::multiprecision::gcd(g, i);
    ints.push_back(i);
  }
  std::vector<std::int64_t> out;
  for (auto &i : ints)
  {
    if (g != 0)
    {
      i /= g;
    }
    if (i > cpp_int(INT64_MAX / 4) || i < cpp_int(INT64_MIN / 4))
    {
      throw Error(ErrorCode::Numerical, "polytope normal exceeds 64-bit range");
    }
    out.push_back(static_cast<std::int64_t>(i));
  }
  return out;
}

// Basis of {x : m x = 0} as rows.
std::vector<RatRow> NullSpace(std::vector<RatRow> m, std::size_t cols)
{
  auto pivots = RowReduce(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots)
  {
    is_pivot[p] = true;
  }
  std::vector<RatRow> basis;
  for (std::size_t f = 0; f < cols; ++f)
  {
    if (is_pivot[f])
    {
      continue;
    }
    RatRow v(cols, cpp_rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
    {
      v[pivots[r]] = -m[r][f];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

RatRow ToRat(const ExponentVector &e)
{
  return RatRow(e.begin(), e.end());
}

std::int64_t Dot(const std::vector<std::int64_t> &a, const ExponentVector &p)
{
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    s += a[i] * p[i];
  }
  return s;
}

void ForEachCombination(std::size_t n, std::size_t k,
                        const std::function<void(const std::vector<std::size_t> &)> &f)
{
  if (k > n)
  {
    return;
  }
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true)
  {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1)
    {
      --i;
    }
    if (i == 0)
    {
      return;
    }
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j)
    {
      idx[j] = idx[j - 1] + 1;
    }
  }
}

}  // namespace

bool LatticePolytope::Contains(const ExponentVector &p) const
{
  for (const auto &h : equalities_)
  {
    if (Dot(h.normal, p) != h.offset)
    {
      return false;
    }
  }
  for (const auto &f : facets_)
  {
    if (Dot(f.normal, p) > f.offset)
    {
      return false;
    }
  }
  return true;
}

LatticePolytope ConvexHull(std::span<const ExponentVector> points)
{
  if (points.empty())
  {
    throw Error(ErrorCode::InvalidArgument, "convex hull of an empty point set");
  }
  const std::size_t d = points.front().size();
  std::set<ExponentVector> uniq;
  for (const auto &p : points)
  {
    if (p.size() != d)
    {
      throw Error(ErrorCode::InvalidArgument, "points of mixed dimension");
    }
    uniq.insert(p);
  }
  std::vector<ExponentVector> pts(uniq.begin(), uniq.end());

  LatticePolytope poly;
  poly.dim_ = d;

  // Direction space of the affine hull.
  const ExponentVector &p0 = pts.front();
  std::vector<RatRow> dirs;
  for (std::size_t i = 1; i < pts.size(); ++i)
  {
    auto trial = dirs;
    trial.push_back(ToRat(pts[i] - p0));
    if (Rank(trial, d) == trial.size())
    {
      dirs = std::move(trial);
    }
  }
  const std::size_t k = dirs.size();
  poly.affine_dim_ = k;

  for (const auto &c : NullSpace(dirs, d))
  {
    auto normal = Primitive(c);
    poly.equalities_.push_back({normal, Dot(normal, p0)});
  }
  std::sort(poly.equalities_.begin(), poly.equalities_.end());

  if (k == 0)
  {
    poly.vertices_ = {p0};
    return poly;
  }

  // A facet hyperplane contains k affinely independent input points; its normal lies in the
  // direction space and is orthogonal to the facet's own directions.
  std::set<HalfSpace> facets;
  ForEachCombination(pts.size(), k, [&](const std::vector<std::size_t> &s) {
    std::vector<RatRow> g;
    for (std::size_t j = 1; j < k; ++j)
    {
      ExponentVector w = pts[s[j]] - pts[s[0]];
      RatRow row(k);
      for (std::size_t t = 0; t < k; ++t)
      {
        cpp_rational acc = 0;
        for (std::size_t c = 0; c < d; ++c)
        {
          acc += dirs[t][c] * w[c];
        }
        row[t] = acc;
      }
      g.push_back(std::move(row));
    }
    auto ns = NullSpace(g, k);
    if (ns.size() != 1)
    {
      return;
    }
    RatRow a(d, cpp_rational(0));
    for (std::size_t t = 0; t < k; ++t)
    {
      for (std::size_t c = 0; c < d; ++c)
      {
        a[c] += ns[0][t] * dirs[t][c];
      }
    }
    auto normal = Primitive(a);
    std::int64_t b = Dot(normal, pts[s[0]]);
    bool le = true;
    bool ge = true;
    for (const auto &p : pts)
    {
      std::int64_t v = Dot(normal, p);
      le = le && v <= b;
      ge = ge && v >= b;
    }
    if (le)
    {
      facets.insert({normal, b});
    }
    else if (ge)
    {
      for (auto &x : normal)
      {
        x = -x;
      }
      facets.insert({normal, -b});
    }
  });
  poly.facets_.assign(facets.begin(), facets.end());

  for (const auto &p : pts)
  {
    std::vector<RatRow> active;
    for (const auto &f : poly.facets_)
    {
      if (Dot(f.normal, p) == f.offset)
      {
        active.emplace_back(f.normal.begin(), f.normal.end());
      }
    }
    if (active.size() >= k && Rank(active, d) == k)
    {
      poly.vertices_.push_back(p);
    }
  }
  return poly;
}

LatticePolytope MinkowskiSum(const LatticePolytope &p, const LatticePolytope &q)
{
  if (p.dim() != q.dim())
  {
    throw Error(ErrorCode::InvalidArgument, "Minkowski sum of polytopes of different dimension");
  }
  std::vector<ExponentVector> sums;
  for (const auto &a : p.vertices())
  {
    for (const auto &b : q.vertices())
    {
      sums.push_back(a + b);
    }
  }
  return ConvexHull(sums);
}

std::vector<Displacement> AllDisplacements(std::size_t dim, Rational epsilon)
{
  if (epsilon <= 0)
  {
    throw Error(ErrorCode::InvalidArgument, "displacement epsilon must be positive");
  }
  static constexpr int kOrder[3] = {1, 0, -1};
  std::vector<Displacement> out;
  std::vector<int> digit(dim, 0);
  while (true)
  {
    Displacement d;
    d.epsilon = epsilon;
    for (int x : digit)
    {
      d.signs.push_back(kOrder[x]);
    }
    out.push_back(std::move(d));
    std::size_t i = dim;
    while (i > 0 && digit[i - 1] == 2)
    {
      digit[--i] = 0;
    }
    if (i == 0)
    {
      return out;
    }
    ++digit[i - 1];
  }
}

std::vector<ExponentVector> LatticePoints(const LatticePolytope &p, const Displacement &delta)
{
  const std::size_t d = p.dim();
  if (delta.dim() != d)
  {
    throw Error(ErrorCode::InvalidArgument, "displacement dimension mismatch");
  }
  if (delta.epsilon <= 0 || delta.epsilon >= 1)
  {
    throw Error(ErrorCode::InvalidArgument, "displacement epsilon must lie in (0, 1)");
  }
  const __int128 num = delta.epsilon.numerator();
  const __int128 den = delta.epsilon.denominator();
  auto sign_dot = [&](const std::vector<std::int64_t> &a) {
    __int128 s = 0;
    for (std::size_t i = 0; i < d; ++i)
    {
      s += static_cast<__int128>(a[i]) * delta.signs[i];
    }
    return s;
  };
  auto point_dot = [&](const std::vector<std::int64_t> &a, const ExponentVector &x) {
    __int128 s = 0;
    for (std::size_t i = 0; i < d; ++i)
    {
      s += static_cast<__int128>(a[i]) * x[i];
    }
    return s;
  };

  // With |delta| < 1 every member lies in the vertex bounding box.
  ExponentVector lo = p.vertices().front();
  ExponentVector hi = lo;
  for (const auto &v : p.vertices())
  {
    for (std::size_t i = 0; i < d; ++i)
    {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  }

  std::vector<ExponentVector> out;
  ExponentVector x = lo;
  while (true)
  {
    bool inside = true;
    // (x - eps*s) . a == b  <=>  den*(a.x - b) == num*(a.s)
    for (const auto &h : p.affine_hull())
    {
      if (den * (point_dot(h.normal, x) - h.offset) != num * sign_dot(h.normal))
      {
        inside = false;
        break;
      }
    }
    for (std::size_t f = 0; inside && f < p.facets().size(); ++f)
    {
      const auto &h = p.facets()[f];
      inside = den * (point_dot(h.normal, x) - h.offset) <= num * sign_dot(h.normal);
    }
    if (inside)
    {
      out.push_back(x);
    }
    std::size_t i = d;
    while (i > 0 && x[i - 1] == hi[i - 1])
    {
      x[i - 1] = lo[i - 1];
      --i;
    }
    if (i == 0)
    {
      break;
    }
    ++x[i - 1];
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace hvs
