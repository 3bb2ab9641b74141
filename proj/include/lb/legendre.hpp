#pragma once

#include "lb/potential.hpp"
#include "lb/types.hpp"

namespace lb {

// Pairs related by the gradient map eta = grad Psi(theta). residual is the
// defect |Psi(theta) + Psi*(eta) - <theta, eta>|, which vanishes exactly on
// matched pairs.
struct DualPair {
  Vector theta;
  Vector eta;
  double psi;
  double psi_star;
  double residual;
};

inline constexpr double kFenchelYoungTol = 1e-9;

struct NewtonOptions {
  double tol = 1e-10;     // sup-norm residual target for grad Psi(theta) - eta
  int max_iter = 100;
  double armijo = 1e-4;   // sufficient-decrease slope fraction
  double shrink = 0.5;    // backtracking step multiplier
};

// Forward map: theta -> (eta, Psi, Psi*) via the gradient.
DualPair to_dual(const ConvexPotential& p, const Vector& theta);

// Inverse map by damped Newton on grad Psi(theta) = eta, started at theta0.
// Throws NonConvergenceError when eta lies at or beyond the boundary of the
// gradient image, DomainError when theta0 is not interior.
Vector from_dual(const ConvexPotential& p, const Vector& eta, const Vector& theta0,
                 const NewtonOptions& opts = {});

// Same, started from the domain's deterministic center point.
Vector from_dual(const ConvexPotential& p, const Vector& eta);

// Convex conjugate Psi*(eta) = <theta_hat, eta> - Psi(theta_hat).
double conjugate(const ConvexPotential& p, const Vector& eta);

// Signed Fenchel-Young gap Psi(theta) + Psi*(eta) - <theta, eta>; always >= 0
// up to solver error, zero iff the pair is matched.
double fenchel_young_residual(const ConvexPotential& p, const Vector& theta, const Vector& eta);

// Bregman divergence D(theta1 | theta2) of Psi.
double bregman_divergence(const ConvexPotential& p, const Vector& theta1, const Vector& theta2);

}  // namespace lb
