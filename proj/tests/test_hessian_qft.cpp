#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "lb/hessian_qft.hpp"

using lb::ComplexVector;
using lb::FamilyPotential;
using lb::HessianQFT;
using lb::Vector;

namespace {

Vector vec1(double a) { return (Vector(1) << a).finished(); }
Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

// Psi(t, u) = t^2/2 + u t^4/12 on (-2, 2).
FamilyPotential quartic_family() {
  lb::BoxDomain box = lb::BoxDomain::bounded(vec1(-2.0), vec1(2.0));
  return lb::make_family(
      box,
      {lb::potentials::polynomial(box, {{0.5, {2}}}, "half_square"),
       lb::potentials::polynomial(box, {{1.0 / 12.0, {4}}}, "quartic_twelfth")},
      "quartic");
}

HessianQFT quartic_qft() {
  lb::BoxDomain box = lb::BoxDomain::bounded(vec1(-2.0), vec1(2.0));
  return lb::build_qft(box, quartic_family(), {vec1(0.0), vec1(1.0), vec1(-1.0)}, "quartic_qft");
}

bool has_check(const lb::Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return true;
  return false;
}

}  // namespace

TEST_CASE("build_qft validates domains, grids and leading convexity") {
  FamilyPotential fam = quartic_family();
  CHECK_THROWS_AS(lb::build_qft(lb::BoxDomain::unbounded(1), fam, {vec1(0.0)}, "bad"),
                  lb::DimensionError);

  lb::BoxDomain box = lb::BoxDomain::bounded(vec1(-2.0), vec1(2.0));
  CHECK_THROWS_AS(lb::build_qft(box, fam, {}, "empty"), lb::DomainError);
  CHECK_THROWS_AS(lb::build_qft(box, fam, {vec1(2.5)}, "outside"), lb::DomainError);
  CHECK_THROWS_AS(lb::build_qft(box, fam, {vec1(2.0)}, "boundary"), lb::DomainError);

  // Quartic leading term: flat at the origin, so certification fails there.
  FamilyPotential swapped = lb::make_family(
      box,
      {lb::potentials::polynomial(box, {{1.0 / 12.0, {4}}}, "quartic_twelfth"),
       lb::potentials::polynomial(box, {{0.5, {2}}}, "half_square")},
      "swapped");
  CHECK_THROWS_AS(lb::build_qft(box, swapped, {vec1(0.0)}, "flat"), lb::ConvexityError);

  HessianQFT q = quartic_qft();
  CHECK(q.name == "quartic_qft");
  CHECK(q.dim() == 1);
  CHECK(q.order() == 1);
}

TEST_CASE("family fibers carry a series valued legendre map") {
  HessianQFT q = quartic_qft();
  lb::FamilyFiber f = lb::family_bundle_fiber(q, vec1(1.0));
  CHECK(f.n == 1);
  CHECK(f.series_order == 1);
  CHECK(f.legendre_map.coefficient(0)(0, 0) == 1.0);
  CHECK(std::abs(f.legendre_map.coefficient(1)(0, 0) - 1.0) <= 1e-15);
  CHECK(std::abs(f.legendre_map.substitute(0.1, 1)(0, 0) - 1.1) <= 1e-15);
  CHECK(f.pairing(0, 1) == 1.0);
  CHECK(f.symplectic(1, 0) == -1.0);

  CHECK_THROWS_AS(lb::family_bundle_fiber(q, vec1(2.5)), lb::DomainError);
}

TEST_CASE("order zero slice reproduces the classical fiber bit for bit") {
  HessianQFT q = quartic_qft();
  Vector t = vec1(0.8);
  lb::LegendreBundleFiber a = lb::order_zero_fiber(lb::family_bundle_fiber(q, t));
  lb::LegendreBundleFiber b = lb::build_fiber(lb::tree_level_limit(q), t);
  CHECK((a.legendre_map - b.legendre_map).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.pairing - b.pairing).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.para_complex - b.para_complex).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.symplectic - b.symplectic).cwiseAbs().maxCoeff() == 0.0);
  lb::Report r = lb::verify_para_kahler(a);
  CHECK(r.passed());
}

TEST_CASE("family axioms hold on every order slice at sampled deformations") {
  HessianQFT q = quartic_qft();
  lb::Report r = lb::verify_family_para_kahler(q, vec1(1.0));
  CHECK(r.passed());
  CHECK(r.subject == "quartic_qft");
  CHECK(r.checks.size() == 49);
  CHECK(r.checks[0].name == "frames_independent_of_deformation");
  CHECK(has_check(r, "order_0_u_0_substituted_metric_pd"));
  CHECK(has_check(r, "order_1_u_0.1_substituted_metric_pd"));
  CHECK(has_check(r, "order_1_u_0.1_legendre_morphism_symmetric"));
  for (const auto& c : r.checks) CHECK(c.status != lb::CheckStatus::flagged);
}

TEST_CASE("partial sums outside the convex regime are flagged, not failed") {
  lb::BoxDomain box = lb::BoxDomain::bounded(vec1(-2.0), vec1(2.0));
  // At u = 0.1 the first-order partial sum of the metric is 1 - 10 u = 0.
  FamilyPotential f = lb::make_family(
      box,
      {lb::potentials::polynomial(box, {{0.5, {2}}}, "half_square"),
       lb::potentials::polynomial(box, {{-5.0, {2}}}, "negative_square")},
      "destabilized");
  lb::Report r = lb::verify_family_para_kahler(f, vec1(1.0));
  CHECK(r.passed());
  int flagged = 0;
  for (const auto& c : r.checks)
    if (c.status == lb::CheckStatus::flagged) {
      ++flagged;
      CHECK(c.name == "order_1_u_0.1_substituted_metric_pd");
    }
  CHECK(flagged == 1);
}

TEST_CASE("a finite family is a zero dimensional field theory") {
  lb::FiniteExpFamily fam = lb::bernoulli_family();
  HessianQFT q = lb::zero_dim_qft(fam);
  CHECK(q.order() == 4);
  CHECK(q.name == "bernoulli_qft");
  CHECK(q.free_energy.name == "bernoulli_free_energy");

  Vector t = vec1(0.3);
  lb::FamilyFiber f = lb::family_bundle_fiber(q, t);
  // The deformation direction is entirely trivial here.
  for (int k = 1; k <= 4; ++k)
    CHECK(f.legendre_map.coefficient(k).cwiseAbs().maxCoeff() == 0.0);

  lb::DuallyFlatManifold m(lb::as_potential(fam));
  lb::LegendreBundleFiber classical = lb::build_fiber(m, t);
  lb::LegendreBundleFiber reduced = lb::order_zero_fiber(f);
  CHECK((reduced.legendre_map - classical.legendre_map).cwiseAbs().maxCoeff() == 0.0);
  CHECK((reduced.symplectic - classical.symplectic).cwiseAbs().maxCoeff() == 0.0);

  lb::Report r = lb::verify_family_para_kahler(q, t);
  CHECK(r.passed());
  for (const auto& c : r.checks) CHECK(c.status != lb::CheckStatus::flagged);

  CHECK_THROWS_AS(lb::zero_dim_qft(fam, -1), lb::OrderMismatchError);
}

TEST_CASE("quantum geometric tensor vanishes for a constant state") {
  lb::StateFn constant = [](const Vector&) {
    ComplexVector v(2);
    v << 1.0, 0.0;
    return v;
  };
  lb::ComplexMatrix Q = lb::quantum_geometric_tensor(constant, vec1(0.3), 1);
  CHECK(Q.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("quantum geometric tensor of the bloch sphere family") {
  const double pi = std::acos(-1.0);
  lb::StateFn bloch = [](const Vector& p) {
    ComplexVector v(2);
    v[0] = std::cos(p[0] / 2.0);
    v[1] = std::polar(std::sin(p[0] / 2.0), p[1]);
    return v;
  };
  Vector theta = vec2(pi / 2.0, 0.3);
  lb::ComplexMatrix Q = lb::quantum_geometric_tensor(bloch, theta, 2);

  CHECK(std::abs(Q(0, 0).real() - 0.25) <= 1e-5);
  CHECK(std::abs(Q(1, 1).real() - 0.25) <= 1e-5);
  CHECK(std::abs(Q(0, 1).real()) <= 1e-5);
  CHECK(std::abs(Q(0, 1).imag() + 0.25) <= 1e-5);
  CHECK((Q - Q.adjoint().eval()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("square root densities recover a quarter of the fisher metric") {
  lb::FiniteExpFamily bern = lb::bernoulli_family();
  Vector t = vec1(0.7);
  lb::ComplexMatrix Q = lb::quantum_geometric_tensor(lb::sqrt_density_states(bern), t, 1);
  lb::Matrix g = lb::fisher_metric(bern, t);
  CHECK(std::abs(Q(0, 0).real() - 0.25 * g(0, 0)) <= 1e-5);
  CHECK(std::abs(Q(0, 0).imag()) <= 1e-15);

  lb::FiniteExpFamily cat = lb::categorical_family(2);
  Vector tc = vec2(0.3, -0.2);
  lb::ComplexMatrix Qc = lb::quantum_geometric_tensor(lb::sqrt_density_states(cat), tc, 2);
  lb::Matrix gc = lb::fisher_metric(cat, tc);
  CHECK((Qc.real() - 0.25 * gc).cwiseAbs().maxCoeff() <= 1e-5);
  CHECK(Qc.imag().cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("the tensor rejects bad states and mismatched parameters") {
  lb::StateFn off_sphere = [](const Vector&) {
    ComplexVector v(2);
    v << 1.1, 0.0;
    return v;
  };
  CHECK_THROWS_AS(lb::quantum_geometric_tensor(off_sphere, vec1(0.0), 1),
                  lb::NormalizationError);

  lb::StateFn fine = [](const Vector& p) {
    ComplexVector v(2);
    v << std::cos(p[0]), std::sin(p[0]);
    return v;
  };
  CHECK_THROWS_AS(lb::quantum_geometric_tensor(fine, vec1(0.0), 2), lb::DimensionError);

  // A state that jumps to an orthogonal vector inside the stencil cannot be
  // phase aligned and must be reported as such.
  lb::StateFn jump = [](const Vector& p) {
    ComplexVector v(2);
    if (p[0] < 0.5e-5)
      v << 1.0, 0.0;
    else
      v << 0.0, 1.0;
    return v;
  };
  CHECK_THROWS_AS(lb::quantum_geometric_tensor(jump, vec1(0.0), 1), lb::StencilError);
}
