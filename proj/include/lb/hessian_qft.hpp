#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lb/bundle.hpp"
#include "lb/exp_family.hpp"
#include "lb/formal_series.hpp"
#include "lb/types.hpp"

namespace lb {

// A free energy as a formal deformation: couplings live in an open box, the
// free energy is a potential-valued series in the deformation variable, and
// the validation grid fixes where convexity of the leading term is certified.
struct HessianQFT {
  BoxDomain coupling_space;
  FamilyPotential free_energy;
  std::vector<Vector> validation_grid;
  std::string name;

  int dim() const { return coupling_space.dim(); }
  int order() const { return free_energy.order(); }
};

// Validates domain consistency and grid interiority, then certifies the
// leading Hessian coefficient on the grid. Throws ConvexityError naming the
// first offending grid point when certification fails.
HessianQFT build_qft(const BoxDomain& coupling_space, const FamilyPotential& free_energy,
                     const std::vector<Vector>& validation_grid, std::string name);

// Fiber of the family bundle: same frame data as the classical fiber, with
// the Legendre map upgraded to a series-valued matrix. The frames themselves
// do not depend on the deformation variable.
struct FamilyFiber {
  Vector base_point;
  int n = 0;
  int series_order = 0;
  Matrix pairing;
  SeriesMatrix legendre_map;
  Matrix para_complex;
  Matrix symplectic;
};

FamilyFiber family_bundle_fiber(const HessianQFT& q, const Vector& t);

// Same fiber, driven directly by a family potential.
FamilyFiber family_bundle_fiber(const FamilyPotential& f, const Vector& t);

// The classical fiber sitting at order zero of a family fiber. Shares the
// numeric path with build_fiber, so agreement is exact.
LegendreBundleFiber order_zero_fiber(const FamilyFiber& f);

// Geometry of the leading coefficient alone.
DuallyFlatManifold tree_level_limit(const HessianQFT& q);

// Runs the fiber axioms on every order-k partial sum of the Legendre map at
// sampled numerical deformation values. Partial sums whose metric block
// loses positive definiteness are flagged as outside the formal validity
// window rather than failed: the series identities still hold there.
Report verify_family_para_kahler(const HessianQFT& q, const Vector& t);
Report verify_family_para_kahler(const FamilyPotential& f, const Vector& t);

using StateFn = std::function<ComplexVector(const Vector&)>;

// Tolerance on | ||state|| - 1 | before the tensor is computed.
inline constexpr double kStateNormTol = 1e-6;

// Quantum geometric tensor Q_ij = <d_i psi, d_j psi> - <d_i psi, psi><psi, d_j psi>
// with the Hermitian inner product conjugate-linear in its second slot.
// Derivatives are phase-aligned central differences, so a smooth gauge choice
// in `states` is not required. Throws NormalizationError when any stencil
// state misses unit norm by more than kStateNormTol.
ComplexMatrix quantum_geometric_tensor(const StateFn& states, const Vector& theta, int param_dim);

// Square-root-density embedding of a finite exponential family, suitable for
// quantum_geometric_tensor. Components carry the base-weight factor so the
// embedding is an isometry into the unit sphere.
StateFn sqrt_density_states(const FiniteExpFamily& fam);

// The free energy of a finite family viewed as a zero-dimensional field
// theory: the log-partition at order zero with all higher coefficients zero.
HessianQFT zero_dim_qft(const FiniteExpFamily& fam, int order = 4);

}  // namespace lb
