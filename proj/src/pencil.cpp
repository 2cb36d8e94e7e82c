// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#include "hvsolve/pencil.hpp"

#include <algorithm>
#include <random>

#include "hvsolve/error.hpp"
#include "hvsolve/numeric.hpp"
#include "hvsolve/runtime.hpp"

namespace hvs
{

const SymbolicEntry *SymbolicMatrix::Find(std::size_t r, std::size_t c) const
{
  auto it = entries_.find({r, c});
  return it == entries_.end() ? nullptr : &it->second;
}

Eigen::MatrixXd SymbolicMatrix::Instantiate(const CoefficientInstance &inst) const
{
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_),
                                            static_cast<Eigen::Index>(cols_));
  for (const auto &[rc, e] : entries_)
  {
    m(static_cast<Eigen::Index>(rc.first), static_cast<Eigen::Index>(rc.second)) = e.Value(inst);
  }
  return m;
}

std::vector<SymbolicMatrix> BuildPep(const SolverTemplate &tmpl)
{
  const std::size_t b = tmpl.basis_size();
  std::vector<SymbolicMatrix> m(static_cast<std::size_t>(tmpl.hidden_degree) + 1,
                                SymbolicMatrix(b, b));
  for (const auto &p : tmpl.placement)
  {
    if (p.hidden_degree < 0 || p.hidden_degree > tmpl.hidden_degree || p.row >= b || p.col >= b)
    {
      throw Error(ErrorCode::Integrity, "placement entry outside the PEP");
    }
    auto &target = m[static_cast<std::size_t>(p.hidden_degree)];
    if (!target.IsStructuralZero(p.row, p.col))
    {
      throw Error(ErrorCode::Integrity, "two slots placed at the same PEP entry");
    }
    target.Set(p.row, p.col, {1, p.slot});
  }
  return m;
}

MatrixPencil Linearize(std::span<const SymbolicMatrix> coeffs,
                       std::span<const ExponentVector> columns)
{
  if (coeffs.size() < 2)
  {
    throw Error(ErrorCode::InvalidArgument, "linearization needs hidden degree >= 1");
  }
  const std::size_t l = coeffs.size() - 1;
  const std::size_t b = coeffs.front().rows();
  if (columns.size() != b)
  {
    throw Error(ErrorCode::InvalidArgument, "column labels do not match PEP size");
  }
  const std::size_t k = l * b;
  MatrixPencil p;
  p.a = SymbolicMatrix(k, k);
  p.b = SymbolicMatrix(k, k);
  p.block_size = b;
  p.blocks = l;
  for (std::size_t blk = 0; blk + 1 < l; ++blk)
  {
    for (std::size_t i = 0; i < b; ++i)
    {
      p.a.Set(blk * b + i, (blk + 1) * b + i, {1, std::nullopt});
      p.b.Set(blk * b + i, blk * b + i, {1, std::nullopt});
    }
  }
  const std::size_t last = (l - 1) * b;
  for (std::size_t e = 0; e < l; ++e)
  {
    for (const auto &[rc, entry] : coeffs[e].entries())
    {
      p.a.Set(last + rc.first, e * b + rc.second, {-entry.coefficient, entry.slot});
    }
  }
  for (const auto &[rc, entry] : coeffs[l].entries())
  {
    p.b.Set(last + rc.first, last + rc.second, entry);
  }
  for (std::size_t c = 0; c < k; ++c)
  {
    p.labels.push_back({c / b, columns[c % b]});
  }
  return p;
}

namespace
{

using Pattern = std::vector<std::vector<char>>;

Pattern ToPattern(const SymbolicMatrix &m)
{
  Pattern p(m.rows(), std::vector<char>(m.cols(), 0));
  for (const auto &[rc, e] : m.entries())
  {
    if (e.coefficient != 0)
    {
      p[rc.first][rc.second] = 1;
    }
  }
  return p;
}

}  // namespace

ReductionSchedule ReduceSchedule(const MatrixPencil &pencil)
{
  const std::size_t k = pencil.size();
  Pattern pa = ToPattern(pencil.a);
  Pattern pb = ToPattern(pencil.b);
  std::vector<char> row_alive(k, 1);
  std::vector<char> col_alive(k, 1);
  ReductionSchedule s;

  // One structural step on `side`; false when no zero column can be processed.
  auto step = [&](ZeroSide side) {
    Pattern &zero = side == ZeroSide::A ? pa : pb;
    Pattern &other = side == ZeroSide::A ? pb : pa;
    for (std::size_t j = 0; j < k; ++j)
    {
      if (!col_alive[j])
      {
        continue;
      }
      std::vector<std::size_t> nz;
      bool zero_col = true;
      for (std::size_t r = 0; r < k && zero_col; ++r)
      {
        if (!row_alive[r])
        {
          continue;
        }
        zero_col = !zero[r][j];
        if (other[r][j])
        {
          nz.push_back(r);
        }
      }
      // A column zero in both matrices makes the pencil singular; leave it alone.
      if (!zero_col || nz.empty())
      {
        continue;
      }
      const std::size_t pivot = nz.front();
      for (std::size_t t = 1; t < nz.size(); ++t)
      {
        const std::size_t target = nz[t];
        s.ops.push_back({ScheduleOp::Kind::Eliminate, side, j, pivot, target});
        for (std::size_t c = 0; c < k; ++c)
        {
          other[target][c] |= other[pivot][c];
          zero[target][c] |= zero[pivot][c];
        }
        other[target][j] = 0;
      }
      s.ops.push_back({ScheduleOp::Kind::Remove, side, j, pivot, 0});
      row_alive[pivot] = 0;
      col_alive[j] = 0;
      return true;
    }
    return false;
  };

  bool progress = true;
  while (progress)
  {
    progress = false;
    while (step(ZeroSide::A))
    {
      progress = true;
    }
    while (step(ZeroSide::B))
    {
      progress = true;
    }
  }
  for (std::size_t i = 0; i < k; ++i)
  {
    if (row_alive[i])
    {
      s.surviving_rows.push_back(i);
    }
    if (col_alive[i])
    {
      s.surviving_cols.push_back(i);
    }
  }
  return s;
}

ScheduleCheck CheckSchedule(const MatrixPencil &pencil, const ReductionSchedule &schedule,
                            int trials, std::uint64_t seed, double rel_tol)
{
  SlotId slots = 0;
  for (const auto *m : {&pencil.a, &pencil.b})
  {
    for (const auto &[_, e] : m->entries())
    {
      if (e.slot)
      {
        slots = std::max<SlotId>(slots, *e.slot + 1);
      }
    }
  }
  constexpr double kZero = 1e-10;
  constexpr double kBig = 1e10;
  auto count = [&](const std::vector<EigenPair> &pairs, bool zero) {
    return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [&](const EigenPair &p) {
      if (zero)
      {
        return p.kind == EigenClass::Finite && std::abs(p.value) < kZero;
      }
      return p.kind == EigenClass::Infinite ||
             (p.kind == EigenClass::Finite && std::abs(p.value) > kBig);
    }));
  };

  ScheduleCheck out;
  out.ok = true;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < trials; ++t)
  {
    std::vector<double> v(slots);
    for (auto &x : v)
    {
      x = u(rng);
    }
    CoefficientInstance inst(std::move(v));
    NumericPencil full{pencil.a.Instantiate(inst), pencil.b.Instantiate(inst)};
    auto reduced = ApplySchedule(full, schedule, 0.0);
    if (!reduced)
    {
      out.ok = false;
      return out;
    }
    auto before = SolveGep(full.a, full.b);
    auto after = SolveGep(reduced->a, reduced->b);
    if (!MatchMultisets(NonParasiticSpectrum(before, kZero, kBig),
                        NonParasiticSpectrum(after, kZero, kBig), rel_tol))
    {
      out.ok = false;
    }
    const auto zb = count(before, true);
    const auto za = count(after, true);
    const auto ib = count(before, false);
    const auto ia = count(after, false);
    out.removed_zero = zb >= za ? zb - za : 0;
    out.removed_infinite = ib >= ia ? ib - ia : 0;
  }
  return out;
}

}  // namespace hvs
