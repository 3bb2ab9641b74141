#include <doctest.h>

#include <cmath>
#include <vector>

#include "lb/exp_family.hpp"
#include "lb/legendre.hpp"
#include "oracles.hpp"

using lb::FiniteExpFamily;
using lb::Vector;

namespace {

Vector vec1(double a) { return (Vector(1) << a).finished(); }
Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

}  // namespace

TEST_CASE("constructor validates shapes, weights and nondegeneracy") {
  CHECK_THROWS_AS(FiniteExpFamily("empty", {}, Vector(0), {}), lb::DimensionError);
  CHECK_THROWS_AS(
      FiniteExpFamily("ragged", {"a", "b"}, (Vector(3) << 1, 1, 1).finished(),
                      {vec1(0.0), vec1(1.0)}),
      lb::DimensionError);
  CHECK_THROWS_AS(
      FiniteExpFamily("rows", {"a", "b"}, (Vector(2) << 1, 1).finished(),
                      {vec1(0.0), vec2(1.0, 0.0)}),
      lb::DimensionError);
  CHECK_THROWS_AS(
      FiniteExpFamily("bad_weight", {"a", "b"}, (Vector(2) << 1, 0).finished(),
                      {vec1(0.0), vec1(1.0)}),
      lb::DomainError);
  CHECK_THROWS_AS(
      FiniteExpFamily("neg_weight", {"a", "b"}, (Vector(2) << 1, -2).finished(),
                      {vec1(0.0), vec1(1.0)}),
      lb::DomainError);
  // A constant statistic component makes the log-partition affine in that
  // direction, which the rank gate must reject.
  CHECK_THROWS_AS(
      FiniteExpFamily("flat", {"a", "b"}, (Vector(2) << 1, 1).finished(),
                      {vec1(2.0), vec1(2.0)}),
      lb::ConvexityError);
  CHECK_THROWS_AS(
      FiniteExpFamily("single", {"a"}, (Vector(1) << 1).finished(), {vec1(0.0)}),
      lb::ConvexityError);
  CHECK_THROWS_AS(
      FiniteExpFamily("dependent", {"a", "b", "c"}, (Vector(3) << 1, 1, 1).finished(),
                      {vec2(0.0, 0.0), vec2(1.0, 2.0), vec2(2.0, 4.0)}),
      lb::ConvexityError);

  CHECK_THROWS_AS(lb::categorical_family(0), lb::DimensionError);
  CHECK_THROWS_AS(lb::truncated_poisson_family(0), lb::DimensionError);
}

TEST_CASE("log partition is stable at extreme parameters") {
  FiniteExpFamily fam = lb::bernoulli_family();
  CHECK(lb::log_partition(fam, vec1(600.0)) == 600.0);
  CHECK(lb::log_partition(fam, vec1(-600.0)) == 0.0);
  CHECK(std::abs(lb::log_partition(fam, vec1(2.0)) - 2.1269280110429727) <=
        1e-14);
  CHECK_THROWS_AS(lb::log_partition(fam, vec2(0, 0)), lb::DimensionError);
}

TEST_CASE("densities normalize against the weighted counting measure") {
  FiniteExpFamily fam = lb::truncated_poisson_family(60);
  Vector theta = vec1(0.5);
  double total = 0.0;
  for (int w = 0; w < fam.outcome_count(); ++w)
    total += fam.weights()[w] * lb::density(fam, theta, w);
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK_THROWS_AS(lb::density(fam, theta, 61), lb::IndexError);
  CHECK_THROWS_AS(lb::density(fam, theta, -1), lb::IndexError);

  FiniteExpFamily cat = lb::categorical_family(2);
  for (int w = 0; w < 3; ++w)
    CHECK(std::abs(lb::density(cat, Vector::Zero(2), w) - 1.0 / 3.0) <= 1e-15);
}

TEST_CASE("mean parameters differentiate the log partition") {
  auto check_family = [](const FiniteExpFamily& fam, const Vector& theta) {
    auto logz = [&fam](const Vector& t) { return lb::log_partition(fam, t); };
    Vector eta = lb::mean_parameters(fam, theta);
    Vector fd = oracle::fd_gradient(logz, theta);
    CHECK((eta - fd).cwiseAbs().maxCoeff() <= 1e-7);
    lb::Matrix g = lb::fisher_metric(fam, theta);
    lb::Matrix fd2 = oracle::fd_hessian_values(logz, theta);
    CHECK((g - fd2).cwiseAbs().maxCoeff() <= 1e-5);
  };
  check_family(lb::bernoulli_family(), vec1(0.7));
  check_family(lb::categorical_family(2), vec2(0.4, -1.1));
  check_family(lb::truncated_poisson_family(60), vec1(0.5));
}

TEST_CASE("truncated poisson matches the untruncated closed forms") {
  FiniteExpFamily fam = lb::truncated_poisson_family(60);
  // At theta = 0.5 the rate is e^{0.5}; the cutoff tail at 60 is far below
  // double precision, so log Z, mean and variance all equal e^{0.5}.
  const double rate = 1.6487212707001282;
  CHECK(std::abs(lb::log_partition(fam, vec1(0.5)) - rate) <= 1e-12);
  CHECK(std::abs(lb::mean_parameters(fam, vec1(0.5))[0] - rate) <= 1e-9);
  CHECK(std::abs(lb::fisher_metric(fam, vec1(0.5))(0, 0) - rate) <= 1e-9);
}

TEST_CASE("categorical fisher metric has the exchangeable form at zero") {
  FiniteExpFamily fam = lb::categorical_family(2);
  lb::Matrix g = lb::fisher_metric(fam, Vector::Zero(2));
  CHECK(std::abs(g(0, 0) - 2.0 / 9.0) <= 1e-12);
  CHECK(std::abs(g(1, 1) - 2.0 / 9.0) <= 1e-12);
  CHECK(std::abs(g(0, 1) + 1.0 / 9.0) <= 1e-12);
  CHECK(g(0, 1) == g(1, 0));
}

TEST_CASE("negative entropy is the conjugate restricted to the mean polytope") {
  FiniteExpFamily fam = lb::bernoulli_family();
  // At eta = 0.9 the entropy sum is 0.9 log 0.9 + 0.1 log 0.1.
  CHECK(std::abs(lb::negative_entropy(fam, vec1(0.9)) - (-0.3250829733914482)) <= 1e-9);
  CHECK_THROWS_AS(lb::negative_entropy(fam, vec1(1.0)), lb::NonConvergenceError);
  CHECK_THROWS_AS(lb::negative_entropy(fam, vec1(1.2)), lb::NonConvergenceError);
}

TEST_CASE("the packaged potential reuses the family computations unchanged") {
  FiniteExpFamily fam = lb::bernoulli_family();
  lb::ConvexPotential p = lb::as_potential(fam);
  Vector theta = vec1(0.8);
  CHECK(lb::eval(p, theta) == lb::log_partition(fam, theta));
  CHECK(lb::gradient(p, theta)[0] == lb::mean_parameters(fam, theta)[0]);
  CHECK(lb::hessian(p, theta)(0, 0) == lb::fisher_metric(fam, theta)(0, 0));

  Vector eta = lb::mean_parameters(fam, theta);
  CHECK(std::abs(lb::fenchel_young_residual(p, theta, eta)) <= 1e-9);
}

TEST_CASE("kl divergence agrees with the bregman divergence in swapped order") {
  FiniteExpFamily fam = lb::bernoulli_family();
  CHECK(std::abs(lb::kl_divergence(fam, vec1(0.0), vec1(2.0)) - 0.43378083048302729) <= 1e-12);
  CHECK(std::abs(lb::kl_divergence(fam, vec1(2.0), vec1(0.0)) - 0.32781332547273734) <= 1e-12);
  CHECK(lb::kl_divergence(fam, vec1(0.7), vec1(0.7)) == 0.0);

  lb::ConvexPotential p = lb::as_potential(fam);
  Vector a = vec1(-0.4), b = vec1(1.3);
  CHECK(std::abs(lb::bregman_divergence(p, b, a) - lb::kl_divergence(fam, a, b)) <= 1e-14);

  // Cross-check one value against direct summation in extended precision.
  FiniteExpFamily cat = lb::categorical_family(2);
  Vector ta = vec2(0.3, -0.2), tb = vec2(-0.5, 0.8);
  auto probs = [&cat](const Vector& t) {
    std::vector<long double> e;
    for (int w = 0; w < cat.outcome_count(); ++w)
      e.push_back(static_cast<long double>(t.dot(cat.statistic()[w])));
    return oracle::softmax_probs(e);
  };
  CHECK(std::abs(lb::kl_divergence(cat, ta, tb) - oracle::kl(probs(ta), probs(tb))) <= 1e-13);
}
