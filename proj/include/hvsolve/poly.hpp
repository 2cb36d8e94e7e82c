// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hvs
{

inline constexpr std::size_t kMaxVariables = 8;

// Dense integer vector of at most kMaxVariables entries. Used both for monomial exponents
// (entries >= 0) and for general lattice points, which may be negative.
class ExponentVector
{
public:
  ExponentVector() = default;
  explicit ExponentVector(std::size_t dim);
  ExponentVector(std::initializer_list<int> entries);
  explicit ExponentVector(std::span<const int> entries);

  static ExponentVector Unit(std::size_t dim, std::size_t axis);

  std::size_t size() const { return size_; }
  int operator[](std::size_t i) const { return e_[i]; }
  int &operator[](std::size_t i) { return e_[i]; }
  const int *begin() const { return e_.data(); }
  const int *end() const { return e_.data() + size_; }

  int TotalDegree() const;
  bool IsNonNegative() const;

  // Copy with entry `axis` deleted / a new entry inserted before `axis`.
  ExponentVector Erase(std::size_t axis) const;
  ExponentVector Insert(std::size_t axis, int value) const;

  friend ExponentVector operator+(const ExponentVector &a, const ExponentVector &b);
  friend ExponentVector operator-(const ExponentVector &a, const ExponentVector &b);
  friend auto operator<=>(const ExponentVector &, const ExponentVector &) = default;
  friend bool operator==(const ExponentVector &, const ExponentVector &) = default;

private:
  std::uint8_t size_ = 0;
  std::array<int, kMaxVariables> e_{};
};

std::string ToString(const ExponentVector &e);

// "x^2*y", or "1" for the zero exponent.
std::string MonomialString(const ExponentVector &e, std::span<const std::string> names);

using SlotId = std::uint32_t;

// Symbolic coefficient u_{i,alpha}: the coefficient of x^alpha in polynomial i.
struct CoeffSlot
{
  std::string name;
  std::size_t poly_index = 0;
  ExponentVector exponent;
};

struct Term
{
  ExponentVector exponent;
  SlotId slot = 0;
};

struct ParamPolynomial
{
  std::string name;
  std::vector<Term> terms;  // declaration order, exponents distinct

  std::vector<ExponentVector> Support() const;  // sorted
  int MaxExponent(std::size_t var) const;
};

class PolySystem
{
public:
  PolySystem() = default;

  // Validates every structural invariant. With allow_shared_slots a slot may be referenced by
  // several polynomials; the parser never produces such systems.
  PolySystem(std::vector<std::string> variables, std::vector<CoeffSlot> slots,
             std::vector<ParamPolynomial> polys, bool allow_shared_slots = false);

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_polys() const { return polys_.size(); }
  std::size_t num_slots() const { return slots_.size(); }
  const std::vector<std::string> &variables() const { return variables_; }
  const std::vector<ParamPolynomial> &polys() const { return polys_; }
  const std::vector<CoeffSlot> &slots() const { return slots_; }
  bool shares_slots() const { return shared_; }

  std::optional<SlotId> FindSlot(std::string_view name) const;
  std::optional<std::size_t> FindVariable(std::string_view name) const;

private:
  std::vector<std::string> variables_;
  std::vector<CoeffSlot> slots_;
  std::vector<ParamPolynomial> polys_;
  bool shared_ = false;
};

// Numeric values for every slot of a system, indexed by SlotId.
class CoefficientInstance
{
public:
  CoefficientInstance() = default;
  explicit CoefficientInstance(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  double operator[](SlotId s) const { return values_[s]; }
  double &operator[](SlotId s) { return values_[s]; }
  std::span<const double> values() const { return values_; }

private:
  std::vector<double> values_;
};

// Throws MissingSlot when the instance does not cover the system, NonFinite on inf/nan.
void ValidateInstance(const PolySystem &sys, const CoefficientInstance &inst);

// Problem file grammar (one statement per line, or several separated by ';'):
//   vars: <name>+
//   [poly] <id>: <slot>[*<var>[^<int>]]* ( + <slot>[*<var>[^<int>]]* )*
// '#' starts a comment. Slot names are unique and must not shadow a variable.
PolySystem ParseSystem(std::string_view text);
std::string FormatSystem(const PolySystem &sys);

// Instance file: one `slot = value` per line, '#' comments.
CoefficientInstance ParseInstance(std::string_view text, const PolySystem &sys);
std::string FormatInstance(const PolySystem &sys, const CoefficientInstance &inst);

// |f_i(point)| for every polynomial.
std::vector<double> Evaluate(const PolySystem &sys, const CoefficientInstance &inst,
                             std::span<const std::complex<double>> point);
std::vector<std::complex<double>> EvaluateComplex(const PolySystem &sys,
                                                  const CoefficientInstance &inst,
                                                  std::span<const std::complex<double>> point);
// Sum of |coefficient| per polynomial.
std::vector<double> CoefficientNorms(const PolySystem &sys, const CoefficientInstance &inst);

struct HiddenTerm
{
  int hidden_degree = 0;
  SlotId slot = 0;
};

struct ProjectedPolynomial
{
  // base exponent (hidden entry deleted) -> terms sharing that base exponent
  std::map<ExponentVector, std::vector<HiddenTerm>> terms;

  std::vector<ExponentVector> Support() const;
};

// View of a system with one variable moved into the coefficient field.
struct ProjectedSystem
{
  std::size_t hidden_index = 0;
  std::vector<std::string> base_variables;
  std::vector<ProjectedPolynomial> polys;
  int hidden_degree = 0;  // l: max exponent of the hidden variable

  // Terms rebuilt in full n-variable form, per polynomial, sorted by exponent.
  std::vector<std::vector<Term>> Reassemble() const;
};

ProjectedSystem HideVariable(const PolySystem &sys, std::size_t hidden);

}  // namespace hvs
