#pragma once

#include "lb/connections.hpp"
#include "lb/report.hpp"
#include "lb/types.hpp"

namespace lb {

// Even criterion for the determinant of the canonical two-form.
inline constexpr double kOmegaDetTol = 1e-12;

// Fiber of the double bundle at a base point: tangent and cotangent copies
// stacked as a 2n-dimensional space. Sections are coordinate vectors
// [X ; alpha] with X the tangent part and alpha the covector part.
struct LegendreBundleFiber {
  Vector base_point;
  int n = 0;             // base dimension; the fiber has dimension 2n
  Matrix pairing;        // 2n x 2n matrix of the canonical pairing
  Matrix legendre_map;   // n x n Hessian block mapping tangent to cotangent
  Matrix para_complex;   // J, +1 on the tangent part, -1 on the cotangent part
  Matrix symplectic;     // omega(s1, s2) = <<J s1, s2>>
};

// Assembles the fiber at theta with the canonical pairing
// <<X + alpha, Y + beta>> = alpha(Y) + beta(X) and the Hessian as the
// fiberwise Legendre map. Throws ConvexityError when the Hessian fails the
// positive-definiteness gate.
LegendreBundleFiber build_fiber(const DuallyFlatManifold& m, const Vector& theta);

// <<s1, s2>> for stacked sections of length 2n.
double pairing_eval(const LegendreBundleFiber& f, const Vector& s1, const Vector& s2);

// Image of a tangent vector under the fiberwise Legendre map.
Vector legendre_morphism_apply(const LegendreBundleFiber& f, const Vector& X);

// Metric recovered from the bundle data alone: g_ij = <<e_i, L e_j>> with the
// morphism image injected into the cotangent slot.
Matrix induced_metric(const LegendreBundleFiber& f);

// omega(s1, s2) evaluated through the pairing.
double symplectic_form_eval(const LegendreBundleFiber& f, const Vector& s1, const Vector& s2);

// Para-complex and symplectic axioms checked exactly at matrix level:
// isotropy of both summands, the pairing evaluation identity, J^2 = id with
// balanced eigenbundles, skewness/non-degeneracy/canonical form of omega,
// anti-invariance under J, and symmetry of the Legendre morphism.
Report verify_para_kahler(const LegendreBundleFiber& f);

// Demonstrates that bundle data and base geometry agree: the induced metric
// must coincide bitwise with the Hessian metric, the primal connection must
// be flat, and the conjugate coefficients must keep their index symmetry.
Report roundtrip_equivalence(const DuallyFlatManifold& m, const Vector& theta);

}  // namespace lb
