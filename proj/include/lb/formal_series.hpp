#pragma once

#include <string>
#include <vector>

#include "lb/potential.hpp"
#include "lb/types.hpp"

namespace lb {

// Truncated formal power series in one deformation variable u, with real
// coefficients and everything at or above u^{order+1} discarded. Binary
// operations insist on equal truncation orders.
class FormalSeries {
 public:
  FormalSeries() = default;
  explicit FormalSeries(int order) : c_(static_cast<std::size_t>(order) + 1, 0.0) {}
  explicit FormalSeries(std::vector<double> coeffs);
  static FormalSeries constant(double a0, int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int k) const;
  double& operator[](int k);
  const std::vector<double>& coeffs() const { return c_; }

  // Partial sum sum_{k<=order} c_k u^k at a numerical u.
  double evaluate(double u) const;

 private:
  std::vector<double> c_;
};

FormalSeries series_add(const FormalSeries& a, const FormalSeries& b);
FormalSeries series_neg(const FormalSeries& a);
// Cauchy product, truncated.
FormalSeries series_mul(const FormalSeries& a, const FormalSeries& b);
// exp(a); requires constant term zero.
FormalSeries series_exp(const FormalSeries& a);
// log(a); requires strictly positive constant term.
FormalSeries series_log(const FormalSeries& a);
// 1/a; requires nonzero constant term.
FormalSeries series_recip(const FormalSeries& a);

// Restrict or pad (with zeros) to a new truncation order.
FormalSeries series_truncate(const FormalSeries& a, int order);

inline FormalSeries operator+(const FormalSeries& a, const FormalSeries& b) { return series_add(a, b); }
inline FormalSeries operator-(const FormalSeries& a) { return series_neg(a); }
inline FormalSeries operator-(const FormalSeries& a, const FormalSeries& b) { return series_add(a, series_neg(b)); }
inline FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) { return series_mul(a, b); }
bool operator==(const FormalSeries& a, const FormalSeries& b);

// Matrix with truncated-series entries, all of one order. Arises as the
// parameter Hessian of a family potential.
class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  SeriesMatrix(int rows, int cols, int order);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int order() const { return order_; }

  const FormalSeries& at(int i, int j) const;
  FormalSeries& at(int i, int j);

  // Coefficient of u^k as a plain matrix.
  Matrix coefficient(int k) const;

  // Numerical partial sum sum_{k<=up_to} coefficient(k) u^k.
  Matrix substitute(double u, int up_to) const;

 private:
  int rows_ = 0, cols_ = 0, order_ = -1;
  std::vector<FormalSeries> entries_;
};

// Potential-valued series: Psi(t, u) = psi_0(t) + u psi_1(t) + ... The zeroth
// coefficient carries the convexity contract; higher coefficients are
// unconstrained smooth functions on the same domain.
struct FamilyPotential {
  BoxDomain domain;
  std::vector<ConvexPotential> coefficients;
  std::string name;

  int order() const { return static_cast<int>(coefficients.size()) - 1; }
  int dim() const { return domain.dim(); }
};

// Validates that every coefficient shares the family domain dimension.
FamilyPotential make_family(BoxDomain domain, std::vector<ConvexPotential> coefficients,
                            std::string name);

// Coefficient-wise evaluation at a base point.
FormalSeries family_eval(const FamilyPotential& f, const Vector& t);

// Gradient in the base variables, one series per component.
std::vector<FormalSeries> family_gradient(const FamilyPotential& f, const Vector& t);

// Base-variable Hessian with series entries. No definiteness gate: only the
// zeroth coefficient is required to be convex, and that is checked elsewhere.
SeriesMatrix family_hessian(const FamilyPotential& f, const Vector& t);

// Per-point report: the zeroth Hessian coefficient must clear the strict
// positive-definiteness gate; higher coefficients are reported unconstrained.
Report formal_convexity_check(const FamilyPotential& f, const std::vector<Vector>& points);

}  // namespace lb
