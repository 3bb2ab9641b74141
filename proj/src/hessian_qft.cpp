#include "lb/hessian_qft.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace lb {

namespace {

// Extended-real comparison; IEEE equality already matches infinities of the
// same sign.
bool same_box(const BoxDomain& a, const BoxDomain& b) {
  if (a.dim() != b.dim()) return false;
  for (int i = 0; i < a.dim(); ++i)
    if (a.lower[i] != b.lower[i] || a.upper[i] != b.upper[i]) return false;
  return true;
}

}  // namespace

HessianQFT build_qft(const BoxDomain& coupling_space, const FamilyPotential& free_energy,
                     const std::vector<Vector>& validation_grid, std::string name) {
  if (!same_box(coupling_space, free_energy.domain))
    throw DimensionError("coupling space and free-energy domain do not agree");
  if (validation_grid.empty()) throw DomainError("validation grid must not be empty");
  for (const Vector& t : validation_grid) coupling_space.require_interior(t, "grid point");

  Report conv = formal_convexity_check(free_energy, validation_grid);
  if (!conv.passed()) {
    for (const auto& c : conv.checks) {
      if (c.status == CheckStatus::fail) {
        std::ostringstream os;
        os << "leading Hessian coefficient of " << free_energy.name
           << " fails strict positive definiteness on the validation grid (" << c.name
           << ", min eigenvalue " << c.value << ")";
        throw ConvexityError(os.str());
      }
    }
  }

  HessianQFT q;
  q.coupling_space = coupling_space;
  q.free_energy = free_energy;
  q.validation_grid = validation_grid;
  q.name = std::move(name);
  return q;
}

FamilyFiber family_bundle_fiber(const FamilyPotential& fam, const Vector& t) {
  const int n = fam.dim();
  fam.domain.require_interior(t);

  FamilyFiber f;
  f.base_point = t;
  f.n = n;
  f.series_order = fam.order();

  f.pairing = Matrix::Zero(2 * n, 2 * n);
  f.pairing.block(0, n, n, n) = Matrix::Identity(n, n);
  f.pairing.block(n, 0, n, n) = Matrix::Identity(n, n);

  f.legendre_map = family_hessian(fam, t);

  f.para_complex = Matrix::Zero(2 * n, 2 * n);
  f.para_complex.block(0, 0, n, n) = Matrix::Identity(n, n);
  f.para_complex.block(n, n, n, n) = -Matrix::Identity(n, n);

  f.symplectic = f.para_complex.transpose() * f.pairing;
  return f;
}

FamilyFiber family_bundle_fiber(const HessianQFT& q, const Vector& t) {
  q.coupling_space.require_interior(t);
  return family_bundle_fiber(q.free_energy, t);
}

LegendreBundleFiber order_zero_fiber(const FamilyFiber& f) {
  LegendreBundleFiber c;
  c.base_point = f.base_point;
  c.n = f.n;
  c.pairing = f.pairing;
  c.legendre_map = f.legendre_map.coefficient(0);
  c.para_complex = f.para_complex;
  c.symplectic = f.symplectic;
  return c;
}

DuallyFlatManifold tree_level_limit(const HessianQFT& q) {
  return DuallyFlatManifold(q.free_energy.coefficients[0]);
}

Report verify_family_para_kahler(const HessianQFT& q, const Vector& t) {
  q.coupling_space.require_interior(t);
  Report r = verify_family_para_kahler(q.free_energy, t);
  r.subject = q.name;
  return r;
}

Report verify_family_para_kahler(const FamilyPotential& fam, const Vector& t) {
  FamilyFiber f = family_bundle_fiber(fam, t);
  Report r;
  r.subject = fam.name;

  // The frame data never involves the deformation variable; record that as
  // an explicit (trivially exact) check before slicing.
  r.add_bounded("frames_independent_of_deformation", 0.0, 0.0);

  const double u_samples[] = {0.0, 0.1};
  for (int k = 0; k <= f.series_order; ++k) {
    for (double u : u_samples) {
      LegendreBundleFiber slice;
      slice.base_point = f.base_point;
      slice.n = f.n;
      slice.pairing = f.pairing;
      slice.legendre_map = f.legendre_map.substitute(u, k);
      slice.para_complex = f.para_complex;
      slice.symplectic = f.symplectic;

      const std::string prefix = "order_" + std::to_string(k) + "_u_" + format_double(u) + "_";

      // Partial sums may leave the convex regime at numerical u; the axioms
      // still hold formally, so this is a flag rather than a failure.
      Eigen::SelfAdjointEigenSolver<Matrix> es(slice.legendre_map);
      const double lam = es.eigenvalues().minCoeff();
      r.add(prefix + "substituted_metric_pd",
            lam > kPdEpsilon ? CheckStatus::pass : CheckStatus::flagged, lam, kPdEpsilon);

      Report axioms = verify_para_kahler(slice);
      for (const auto& c : axioms.checks) r.add(prefix + c.name, c.status, c.value, c.tolerance);
    }
  }
  return r;
}

ComplexMatrix quantum_geometric_tensor(const StateFn& states, const Vector& theta, int param_dim) {
  if (theta.size() != param_dim) throw DimensionError("parameter length does not match param_dim");
  const double h = 1e-5;

  auto fetch = [&](const Vector& point) {
    ComplexVector v = states(point);
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > kStateNormTol)
      throw NormalizationError("state vector norm " + format_double(norm) +
                               " misses 1 by more than " + format_double(kStateNormTol));
    return ComplexVector(v / norm);
  };

  // Hermitian product, conjugate-linear in the second slot.
  auto inner = [](const ComplexVector& a, const ComplexVector& b) {
    return a.cwiseProduct(b.conjugate()).sum();
  };

  const ComplexVector psi = fetch(theta);

  // Align each stencil state to the center state's phase so the difference
  // quotient measures geometry, not gauge drift.
  auto aligned = [&](const Vector& point) {
    ComplexVector v = fetch(point);
    std::complex<double> z = inner(psi, v);
    const double mag = std::abs(z);
    if (mag == 0.0)
      throw StencilError("stencil state is orthogonal to the center state; step too coarse");
    return ComplexVector(v * (std::conj(z) / mag));
  };

  std::vector<ComplexVector> dpsi(static_cast<std::size_t>(param_dim));
  Vector point = theta;
  for (int i = 0; i < param_dim; ++i) {
    point[i] = theta[i] + h;
    ComplexVector vp = aligned(point);
    point[i] = theta[i] - h;
    ComplexVector vm = aligned(point);
    point[i] = theta[i];
    dpsi[static_cast<std::size_t>(i)] = (vp - vm) / (2.0 * h);
  }

  ComplexMatrix Q(param_dim, param_dim);
  for (int i = 0; i < param_dim; ++i) {
    for (int j = 0; j < param_dim; ++j) {
      Q(i, j) = inner(dpsi[static_cast<std::size_t>(i)], dpsi[static_cast<std::size_t>(j)]) -
                inner(dpsi[static_cast<std::size_t>(i)], psi) * inner(psi, dpsi[static_cast<std::size_t>(j)]);
    }
  }
  return Q;
}

StateFn sqrt_density_states(const FiniteExpFamily& fam) {
  return [fam](const Vector& theta) {
    const int count = fam.outcome_count();
    ComplexVector v(count);
    for (int w = 0; w < count; ++w)
      v[w] = std::sqrt(fam.weights()[w] * density(fam, theta, w));
    return v;
  };
}

HessianQFT zero_dim_qft(const FiniteExpFamily& fam, int order) {
  if (order < 0) throw OrderMismatchError("series order must be non-negative");
  BoxDomain box = BoxDomain::unbounded(fam.dim());
  std::vector<ConvexPotential> coeffs;
  coeffs.push_back(as_potential(fam));
  for (int k = 1; k <= order; ++k) coeffs.push_back(potentials::zero(box));
  FamilyPotential f = make_family(box, std::move(coeffs), fam.name() + "_free_energy");
  std::vector<Vector> grid = {Vector::Zero(fam.dim())};
  return build_qft(box, f, grid, fam.name() + "_qft");
}

}  // namespace lb
