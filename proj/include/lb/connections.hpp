#pragma once

#include <memory>

#include "lb/legendre.hpp"
#include "lb/potential.hpp"
#include "lb/tensor3.hpp"
#include "lb/types.hpp"

namespace lb {

// A potential together with the geometry it induces: the Hessian metric and
// the flat affine pair of connections. The conjugate potential on the dual
// coordinate chart is materialized lazily on first use and cached; the cache
// is guarded, so concurrent readers are fine.
class DuallyFlatManifold {
 public:
  explicit DuallyFlatManifold(ConvexPotential potential);

  int dim() const { return potential_.dim(); }
  const ConvexPotential& potential() const { return potential_; }

  // Conjugate potential in dual coordinates. Its value is the Legendre
  // conjugate, its gradient the inverse gradient map; the Hessian falls back
  // to finite differences of that inverse map.
  const ConvexPotential& dual_potential() const;

 private:
  ConvexPotential potential_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

// Coefficients of the flat connection in primal coordinates: identically zero.
Tensor3 christoffel_primal(const DuallyFlatManifold& m, const Vector& theta);

// Mixed coefficients Gamma^k_{ij} of the conjugate connection expressed in
// primal coordinates: the metric inverse applied to the third derivative.
Tensor3 christoffel_dual_in_primal_coords(const DuallyFlatManifold& m, const Vector& theta);

// Defect of the metric-duality relation
//   Z g(X,Y) = g(D+_Z X, Y) + g(X, D-_Z Y)
// for constant coordinate fields X, Y, Z at theta. Zero for exact geometry.
double duality_defect(const DuallyFlatManifold& m, const Vector& theta, const Vector& X,
                      const Vector& Y, const Vector& Z);

// Magnitude of the conjugate connection's coefficients, and of its curvature,
// in the dual chart at eta. Both vanish for a flat conjugate structure, so
// the value is a pure measurement of numerical error.
double dual_flatness_defect(const DuallyFlatManifold& m, const Vector& eta);

}  // namespace lb
