#include "lb/bundle.hpp"

#include <cmath>

namespace lb {

namespace {

void require_section(const LegendreBundleFiber& f, const Vector& s) {
  if (s.size() != 2 * f.n) throw DimensionError("section length does not match fiber dimension");
}

}  // namespace

LegendreBundleFiber build_fiber(const DuallyFlatManifold& m, const Vector& theta) {
  const int n = m.dim();
  m.potential().domain.require_interior(theta);

  LegendreBundleFiber f;
  f.base_point = theta;
  f.n = n;

  f.pairing = Matrix::Zero(2 * n, 2 * n);
  f.pairing.block(0, n, n, n) = Matrix::Identity(n, n);
  f.pairing.block(n, 0, n, n) = Matrix::Identity(n, n);

  f.legendre_map = hessian(m.potential(), theta);

  f.para_complex = Matrix::Zero(2 * n, 2 * n);
  f.para_complex.block(0, 0, n, n) = Matrix::Identity(n, n);
  f.para_complex.block(n, n, n, n) = -Matrix::Identity(n, n);

  f.symplectic = f.para_complex.transpose() * f.pairing;
  return f;
}

double pairing_eval(const LegendreBundleFiber& f, const Vector& s1, const Vector& s2) {
  require_section(f, s1);
  require_section(f, s2);
  return s1.dot(f.pairing * s2);
}

Vector legendre_morphism_apply(const LegendreBundleFiber& f, const Vector& X) {
  if (X.size() != f.n) throw DimensionError("tangent vector length does not match base dimension");
  return f.legendre_map * X;
}

Matrix induced_metric(const LegendreBundleFiber& f) {
  const int n = f.n;
  Matrix g(n, n);
  Vector s1 = Vector::Zero(2 * n), s2 = Vector::Zero(2 * n);
  for (int j = 0; j < n; ++j) {
    Vector lj = legendre_morphism_apply(f, Vector::Unit(n, j));
    s2.setZero();
    s2.segment(n, n) = lj;
    for (int i = 0; i < n; ++i) {
      s1.setZero();
      s1[i] = 1.0;
      g(i, j) = pairing_eval(f, s1, s2);
    }
  }
  return g;
}

double symplectic_form_eval(const LegendreBundleFiber& f, const Vector& s1, const Vector& s2) {
  require_section(f, s1);
  require_section(f, s2);
  return pairing_eval(f, f.para_complex * s1, s2);
}

Report verify_para_kahler(const LegendreBundleFiber& f) {
  const int n = f.n;
  const int N = 2 * n;
  Report r;
  r.subject = "fiber at base dimension " + std::to_string(n);

  // Both summands must be isotropic for the pairing.
  r.add_bounded("pairing_tangent_isotropic",
                f.pairing.block(0, 0, n, n).cwiseAbs().maxCoeff(), 0.0);
  r.add_bounded("pairing_cotangent_isotropic",
                f.pairing.block(n, n, n, n).cwiseAbs().maxCoeff(), 0.0);

  // Off-diagonal blocks realize evaluation of covectors on vectors.
  const double eval_defect =
      std::max((f.pairing.block(0, n, n, n) - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(),
               (f.pairing.block(n, 0, n, n) - Matrix::Identity(n, n)).cwiseAbs().maxCoeff());
  r.add_bounded("pairing_evaluation_identity", eval_defect, 0.0);
  r.add_bounded("pairing_symmetric", (f.pairing - f.pairing.transpose()).cwiseAbs().maxCoeff(), 0.0);

  // Para-complex structure squares to the identity and splits evenly; for an
  // involution the trace counts the eigenvalue imbalance.
  r.add_bounded("para_complex_squares_to_identity",
                (f.para_complex * f.para_complex - Matrix::Identity(N, N)).cwiseAbs().maxCoeff(),
                0.0);
  r.add_bounded("para_complex_balanced_eigenbundles", f.para_complex.trace(), 0.0);

  r.add_bounded("symplectic_skew", (f.symplectic + f.symplectic.transpose()).cwiseAbs().maxCoeff(),
                0.0);

  const double det = std::abs(f.symplectic.determinant());
  r.add("symplectic_nondegenerate", det >= kOmegaDetTol ? CheckStatus::pass : CheckStatus::fail,
        det, kOmegaDetTol);

  Matrix canonical = Matrix::Zero(N, N);
  canonical.block(0, n, n, n) = Matrix::Identity(n, n);
  canonical.block(n, 0, n, n) = -Matrix::Identity(n, n);
  r.add_bounded("symplectic_canonical_frame",
                (f.symplectic - canonical).cwiseAbs().maxCoeff(), 0.0);

  // omega(J a, J b) = -omega(a, b) on all frame pairs.
  double anti = 0.0;
  for (int a = 0; a < N; ++a) {
    Vector ja = f.para_complex.col(a);
    for (int b = 0; b < N; ++b) {
      Vector jb = f.para_complex.col(b);
      const double lhs = ja.dot(f.symplectic * jb);
      const double rhs = f.symplectic(a, b);
      anti = std::max(anti, std::abs(lhs + rhs));
    }
  }
  r.add_bounded("symplectic_anti_invariant_under_j", anti, 0.0);

  // Symmetry of the Legendre morphism through the pairing:
  // <<e_i, L e_j>> = <<e_j, L e_i>>.
  double sym = 0.0;
  Vector s1 = Vector::Zero(N), s2 = Vector::Zero(N);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      s1.setZero();
      s1[i] = 1.0;
      s2.setZero();
      s2.segment(n, n) = legendre_morphism_apply(f, Vector::Unit(n, j));
      const double a = pairing_eval(f, s1, s2);
      s1.setZero();
      s1[j] = 1.0;
      s2.setZero();
      s2.segment(n, n) = legendre_morphism_apply(f, Vector::Unit(n, i));
      const double b = pairing_eval(f, s1, s2);
      sym = std::max(sym, std::abs(a - b));
    }
  }
  r.add_bounded("legendre_morphism_symmetric", sym, 0.0);

  return r;
}

Report roundtrip_equivalence(const DuallyFlatManifold& m, const Vector& theta) {
  Report r;
  r.subject = m.potential().name;

  LegendreBundleFiber f = build_fiber(m, theta);
  const Matrix g_bundle = induced_metric(f);
  const Matrix g_base = hessian(m.potential(), theta);
  r.add_bounded("metric_roundtrip", (g_bundle - g_base).cwiseAbs().maxCoeff(), 0.0);

  r.add_bounded("primal_connection_flat", christoffel_primal(m, theta).max_abs(), 0.0);

  // The conjugate coefficients keep the symmetry of the third derivative.
  Tensor3 gd = christoffel_dual_in_primal_coords(m, theta);
  const int n = m.dim();
  double sym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) sym = std::max(sym, std::abs(gd(i, j, k) - gd(j, i, k)));
  r.add_bounded("dual_connection_torsion_free", sym, 0.0);

  return r;
}

}  // namespace lb
