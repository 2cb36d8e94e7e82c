// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include "hvsolve/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <lapacke.h>

#include "hvsolve/error.hpp"
#include "hvsolve/template.hpp"

namespace hvs
{

std::vector<EigenPair> SolveGep(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b,
                                double inf_tol)
{
  const Eigen::Index k = a.rows();
  if (a.cols() != k || b.rows() != k || b.cols() != k)
  {
    throw Error(ErrorCode::InvalidArgument, "GEP matrices must be square and of equal size");
  }
  if (k == 0)
  {
    return {};
  }
  if (!a.allFinite() || !b.allFinite())
  {
    throw Error(ErrorCode::NonFinite, "GEP matrices contain non-finite entries");
  }
  Eigen::MatrixXd wa = a;
  Eigen::MatrixXd wb = b;
  Eigen::VectorXd ar(k), ai(k), be(k);
  Eigen::MatrixXd vr(k, k);
  double dummy = 0.0;
  const auto n = static_cast<lapack_int>(k);
  lapack_int info = LAPACKE_dggev(LAPACK_COL_MAJOR, 'N', 'V', n, wa.data(), n, wb.data(), n,
                                  ar.data(), ai.data(), be.data(), &dummy, 1, vr.data(), n);
  if (info != 0)
  {
    throw Error(ErrorCode::Numerical, "QZ iteration failed (dggev info " + std::to_string(info) + ")");
  }

  const double eps = std::numeric_limits<double>::epsilon();
  const double na = a.norm();
  const double nb = b.norm();
  const double small_a = 100.0 * static_cast<double>(k) * eps * std::max(na, 1e-300);
  const double small_b = 100.0 * static_cast<double>(k) * eps * std::max(nb, 1e-300);

  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j)
  {
    EigenPair p;
    p.alpha = {ar(j), ai(j)};
    p.beta = be(j);
    if (ai(j) != 0.0 && j + 1 < k)
    {
      Eigen::VectorXcd v(k);
      v.real() = vr.col(j);
      v.imag() = vr.col(j + 1);
      EigenPair q;
      q.alpha = {ar(j + 1), ai(j + 1)};
      q.beta = be(j + 1);
      p.vector = v;
      q.vector = v.conjugate();
      out.push_back(std::move(p));
      out.push_back(std::move(q));
      ++j;
      continue;
    }
    p.vector = vr.col(j).cast<std::complex<double>>();
    out.push_back(std::move(p));
  }
  for (auto &p : out)
  {
    const double nv = p.vector.norm();
    if (nv > 0.0)
    {
      p.vector /= nv;
    }
    const double aa = std::abs(p.alpha);
    const double ab = std::abs(p.beta);
    if (aa <= small_a && ab <= small_b)
    {
      p.kind = EigenClass::Indeterminate;
      p.value = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    }
    else if (ab <= inf_tol * aa)
    {
      p.kind = EigenClass::Infinite;
      p.value = {std::numeric_limits<double>::infinity(), 0.0};
    }
    else
    {
      p.kind = EigenClass::Finite;
      p.value = p.alpha / p.beta;
    }
  }
  return out;
}

double BackwardError(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b, const EigenPair &p)
{
  if (p.kind != EigenClass::Finite)
  {
    return std::numeric_limits<double>::infinity();
  }
  const Eigen::VectorXcd r = a.cast<std::complex<double>>() * p.vector -
                             p.value * (b.cast<std::complex<double>>() * p.vector);
  const double denom = (a.norm() + std::abs(p.value) * b.norm()) * p.vector.norm();
  return denom > 0.0 ? r.norm() / denom : r.norm();
}

std::size_t NumericRank(const Eigen::MatrixXd &m, double rel_tol)
{
  if (m.size() == 0)
  {
    return 0;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto &s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0)
  {
    return 0;
  }
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
  {
    if (s(i) > rel_tol * s(0))
    {
      ++r;
    }
  }
  return r;
}

std::vector<std::complex<double>> PolyRoots(std::span<const std::complex<double>> coeffs)
{
  std::size_t q = coeffs.size();
  while (q > 0 && coeffs[q - 1] == 0.0)
  {
    --q;
  }
  if (q <= 1)
  {
    return {};
  }
  const auto d = static_cast<Eigen::Index>(q - 1);
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 1; i < d; ++i)
  {
    c(i, i - 1) = 1.0;
  }
  for (Eigen::Index i = 0; i < d; ++i)
  {
    c(i, d - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs[q - 1];
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
  if (es.info() != Eigen::Success)
  {
    throw Error(ErrorCode::Numerical, "companion eigenvalue iteration failed");
  }
  std::vector<std::complex<double>> out(es.eigenvalues().begin(), es.eigenvalues().end());
  return out;
}

std::vector<std::complex<double>> NonParasiticSpectrum(std::span<const EigenPair> pairs,
                                                       double zero_tol, double big)
{
  std::vector<std::complex<double>> out;
  for (const auto &p : pairs)
  {
    if (p.kind == EigenClass::Finite && std::abs(p.value) > zero_tol && std::abs(p.value) < big)
    {
      out.push_back(p.value);
    }
  }
  return out;
}

bool MatchMultisets(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b,
                    double rel_tol)
{
  if (a.size() != b.size())
  {
    return false;
  }
  std::vector<char> used(b.size(), 0);
  for (const auto &x : a)
  {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j)
    {
      if (used[j])
      {
        continue;
      }
      const double d = std::abs(x - b[j]);
      if (d < best_d)
      {
        best_d = d;
        best = j;
      }
    }
    if (best == b.size() || best_d > rel_tol * std::max(1.0, std::abs(x)))
    {
      return false;
    }
    used[best] = 1;
  }
  return true;
}

namespace
{

// M'(z) and, when `dm` is given, dM'/dz.
Eigen::MatrixXcd OracleMatrix(const SolverTemplate &tmpl, const CoefficientInstance &inst,
                              std::complex<double> z, Eigen::MatrixXcd *dm = nullptr)
{
  const std::size_t h = tmpl.hidden_index;
  const auto b = static_cast<Eigen::Index>(tmpl.columns.size());
  std::map<ExponentVector, Eigen::Index> col;
  for (Eigen::Index c = 0; c < b; ++c)
  {
    col[tmpl.columns[static_cast<std::size_t>(c)]] = c;
  }
  const auto rows = static_cast<Eigen::Index>(tmpl.rows.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, b);
  if (dm)
  {
    *dm = Eigen::MatrixXcd::Zero(rows, b);
  }
  for (std::size_t r = 0; r < tmpl.rows.size(); ++r)
  {
    const auto &row = tmpl.rows[r];
    for (const auto &t : tmpl.system.polys()[row.poly].terms)
    {
      auto it = col.find(t.exponent.Erase(h) + row.multiplier);
      if (it == col.end())
      {
        throw Error(ErrorCode::Integrity, "row monomial outside the basis");
      }
      const int e = t.exponent[h];
      const auto ri = static_cast<Eigen::Index>(r);
      m(ri, it->second) += inst[t.slot] * std::pow(z, e);
      if (dm && e > 0)
      {
        (*dm)(ri, it->second) += inst[t.slot] * static_cast<double>(e) * std::pow(z, e - 1);
      }
    }
  }
  return m;
}

}  // namespace

DeterminantPolynomial DetInterpolationOracle(const SolverTemplate &tmpl,
                                             const CoefficientInstance &inst, double radius)
{
  ValidateInstance(tmpl.system, inst);
  if (tmpl.rows.size() != tmpl.columns.size())
  {
    throw Error(ErrorCode::InvalidArgument, "M' is not square");
  }
  const std::size_t n = tmpl.pencil_size() + 1;
  std::vector<std::complex<double>> samples(n);
  bool singular_everywhere = true;
  for (std::size_t j = 0; j < n; ++j)
  {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    const std::complex<double> z = std::polar(radius, ang);
    const Eigen::MatrixXcd m = OracleMatrix(tmpl, inst, z);
    samples[j] = m.size() == 0 ? 1.0 : m.partialPivLu().determinant();
    if (singular_everywhere && m.size() != 0)
    {
      const Eigen::VectorXd sv = m.bdcSvd().singularValues();
      singular_everywhere = sv(sv.size() - 1) <= 1e-12 * sv(0);
    }
    else if (m.size() == 0)
    {
      singular_everywhere = false;
    }
  }
  DeterminantPolynomial out;
  out.coeffs.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
  {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
    {
      const double ang =
          -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      acc += samples[j] * std::polar(1.0, ang);
    }
    out.coeffs[k] = acc / static_cast<double>(n) / std::pow(radius, static_cast<double>(k));
  }
  out.degenerate = singular_everywhere;
  return out;
}

std::vector<std::complex<double>> OracleRoots(const DeterminantPolynomial &p, double trim_tol)
{
  if (p.degenerate || p.coeffs.empty())
  {
    return {};
  }
  double cmax = 0.0;
  for (const auto &c : p.coeffs)
  {
    cmax = std::max(cmax, std::abs(c));
  }
  std::size_t lo = 0;
  std::size_t hi = p.coeffs.size();
  while (hi > lo && std::abs(p.coeffs[hi - 1]) <= trim_tol * cmax)
  {
    --hi;
  }
  while (lo < hi && std::abs(p.coeffs[lo]) <= trim_tol * cmax)
  {
    ++lo;
  }
  std::vector<std::complex<double>> c(p.coeffs.begin() + static_cast<std::ptrdiff_t>(lo),
                                      p.coeffs.begin() + static_cast<std::ptrdiff_t>(hi));
  auto roots = PolyRoots(c);
  roots.insert(roots.end(), lo, std::complex<double>(0.0));
  return roots;
}

std::vector<std::complex<double>> PolishDeterminantRoots(const SolverTemplate &tmpl,
                                                         const CoefficientInstance &inst,
                                                         std::vector<std::complex<double>> roots,
                                                         int max_iter)
{
  ValidateInstance(tmpl.system, inst);
  const std::size_t d = roots.size();
  std::vector<char> done(d, 0);
  for (int iter = 0; iter < max_iter; ++iter)
  {
    double biggest = 0.0;
    for (std::size_t i = 0; i < d; ++i)
    {
      if (done[i])
      {
        continue;
      }
      Eigen::MatrixXcd dm;
      const Eigen::MatrixXcd m = OracleMatrix(tmpl, inst, roots[i], &dm);
      const auto lu = m.partialPivLu();
      // Jacobi: f'/f = tr(M^-1 M')
      const std::complex<double> ratio = lu.solve(dm).trace();
      if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag()))
      {
        done[i] = 1;  // M' exactly singular here
        continue;
      }
      std::complex<double> pull = 0.0;
      for (std::size_t j = 0; j < d; ++j)
      {
        if (j != i && roots[j] != roots[i])
        {
          pull += 1.0 / (roots[i] - roots[j]);
        }
      }
      const std::complex<double> w = 1.0 / (ratio - pull);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
      {
        done[i] = 1;
        continue;
      }
      roots[i] -= w;
      const double step = std::abs(w) / std::max(1.0, std::abs(roots[i]));
      biggest = std::max(biggest, step);
      if (step <= 1e-16)
      {
        done[i] = 1;
      }
    }
    if (biggest <= 1e-15)
    {
      break;
    }
  }
  return roots;
}

RootMoments DeterminantRootMoments(const SolverTemplate &tmpl, const CoefficientInstance &inst,
                                   std::complex<double> center, double radius, int samples)
{
  ValidateInstance(tmpl.system, inst);
  if (!(radius > 0.0) || samples < 8)
  {
    throw Error(ErrorCode::InvalidArgument, "contour needs a positive radius and >= 8 samples");
  }
  // trapezoid rule on z = c + r e^{it}: (1/2 pi i) \oint g dz = mean of g(z) (z - c)
  std::complex<double> zeroth = 0.0;
  std::complex<double> first = 0.0;
  for (int j = 0; j < samples; ++j)
  {
    const std::complex<double> off =
        std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(j) / samples);
    const std::complex<double> z = center + off;
    Eigen::MatrixXcd dm;
    const Eigen::MatrixXcd m = OracleMatrix(tmpl, inst, z, &dm);
    const std::complex<double> g = m.partialPivLu().solve(dm).trace() * off;
    zeroth += g;
    first += g * z;
  }
  RootMoments out;
  out.count = zeroth.real() / samples;
  out.sum = first / static_cast<double>(samples);
  return out;
}

DeflatedPencil DeflateInfinite(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b,
                               double rank_tol)
{
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
  {
    throw Error(ErrorCode::InvalidArgument, "pencil matrices must be square and of equal size");
  }
  DeflatedPencil out{a, b, 0};
  const double scale = std::max(a.norm(), b.norm());
  while (out.b.rows() > 0)
  {
    const Eigen::Index n = out.b.rows();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.b, Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < n && sv(r) > rank_tol * scale)
    {
      ++r;
    }
    if (r == n)
    {
      break;
    }
    const Eigen::Index s = n - r;
    const Eigen::MatrixXd v1 = svd.matrixV().leftCols(r);
    const Eigen::MatrixXd av2 = out.a * svd.matrixV().rightCols(s);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(av2);
    qr.setThreshold(rank_tol * std::max(scale, 1e-300) / std::max(av2.norm(), 1e-300));
    if (qr.rank() < s)
    {
      throw Error(ErrorCode::Numerical, "singular pencil: a common null vector of A and B");
    }
    const Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd u2 = q.rightCols(n - s);
    out.a = u2.transpose() * out.a * v1;
    out.b = u2.transpose() * out.b * v1;
    out.infinite += static_cast<std::size_t>(s);
  }
  return out;
}

}  // namespace hvs
