#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lb/errors.hpp"
#include "lb/report.hpp"
#include "lb/tensor3.hpp"
#include "lb/types.hpp"

namespace lb {

// Hessians whose smallest eigenvalue falls at or below this are rejected as
// not strictly positive definite.
inline constexpr double kPdEpsilon = 1e-10;

// Axis-aligned open box; bounds may be +-infinity.
struct BoxDomain {
  Vector lower;
  Vector upper;

  static BoxDomain unbounded(int dim);
  static BoxDomain bounded(Vector lo, Vector hi);

  int dim() const { return static_cast<int>(lower.size()); }
  bool is_interior(const Vector& x) const;

  // Box midpoint. Infinite bounds are replaced by a finite window edge near
  // the origin so the result is always a concrete interior point.
  Vector center() const;

  // Throws DimensionError on size mismatch, DomainError if x is not interior.
  void require_interior(const Vector& x, const char* what = "point") const;
};

using ScalarFn = std::function<double(const Vector&)>;
using VectorFn = std::function<Vector(const Vector&)>;
using MatrixFn = std::function<Matrix(const Vector&)>;

// Smooth, strictly convex function on an open box. grad_fn and hess_fn are
// optional analytic accelerators; finite differences fill in when they are
// absent. Instances are immutable after construction and safe to share
// across threads.
struct ConvexPotential {
  BoxDomain domain;
  ScalarFn value_fn;
  VectorFn grad_fn;
  MatrixFn hess_fn;
  std::string name;

  int dim() const { return domain.dim(); }
};

double eval(const ConvexPotential& p, const Vector& theta);
Vector gradient(const ConvexPotential& p, const Vector& theta);

// Hessian with a strict positive-definiteness gate (ConvexityError).
Matrix hessian(const ConvexPotential& p, const Vector& theta);

// Same numeric path as hessian() but without the gate. Needed where a
// symmetric second derivative is wanted from a function that is not required
// to be convex.
Matrix hessian_unchecked(const ConvexPotential& p, const Vector& theta);

// Smallest eigenvalue of the Hessian at theta (no gate).
double min_hessian_eigenvalue(const ConvexPotential& p, const Vector& theta);

// Fully symmetric third-derivative tensor. Finite-differenced from the
// Hessian and symmetrized so that permuted index triples agree exactly.
Tensor3 third_derivative(const ConvexPotential& p, const Vector& theta);

// One report entry per sample point with the smallest Hessian eigenvalue;
// passes iff every eigenvalue clears kPdEpsilon.
Report check_strict_convexity(const ConvexPotential& p, const std::vector<Vector>& points);

// One monomial of a polynomial potential: coeff * prod_i theta_i^exponents[i].
struct PolyTerm {
  double coeff = 0.0;
  std::vector<int> exponents;
};

namespace potentials {

// log(1 + e^theta), overflow-safe. Domain R.
ConvexPotential bernoulli();

// log(1 + sum_i e^{theta_i}) on R^n.
ConvexPotential categorical(int n);

// e^theta on R.
ConvexPotential poisson();

// Gaussian log-partition in natural coordinates (theta1, theta2), theta2 < 0:
//   -theta1^2/(4 theta2) + log(pi)/2 - log(-theta2)/2.
ConvexPotential gaussian_natural();

// |theta|^2 / 2 on R^n.
ConvexPotential quadratic(int n);

// Polynomial with analytic derivatives assembled from the term list.
ConvexPotential polynomial(BoxDomain domain, std::vector<PolyTerm> terms,
                           std::string name = "polynomial");

// Identically zero on the given box. Used for vanishing series coefficients.
ConvexPotential zero(BoxDomain domain);

}  // namespace potentials

}  // namespace lb
