#include "lb/exp_family.hpp"

#include <cmath>

#include "lb/legendre.hpp"

namespace lb {

FiniteExpFamily::FiniteExpFamily(std::string name, std::vector<std::string> outcomes,
                                 Vector weights, std::vector<Vector> statistic)
    : name_(std::move(name)),
      outcomes_(std::move(outcomes)),
      weights_(std::move(weights)),
      statistic_(std::move(statistic)) {
  const int count = static_cast<int>(outcomes_.size());
  if (count == 0) throw DimensionError("exponential family needs at least one outcome");
  if (weights_.size() != count || static_cast<int>(statistic_.size()) != count)
    throw DimensionError("outcomes, weights and statistic rows must have equal length");
  for (int w = 0; w < count; ++w)
    if (!(weights_[w] > 0.0)) throw DomainError("base weights must be strictly positive");

  dim_ = static_cast<int>(statistic_[0].size());
  for (const Vector& t : statistic_)
    if (t.size() != dim_) throw DimensionError("statistic rows differ in length");

  // The statistic must not be affinely degenerate, otherwise the
  // log-partition is not strictly convex. Centering and checking the rank
  // catches both constant components and linear dependencies.
  Matrix centered(count, dim_);
  Vector mean = Vector::Zero(dim_);
  for (const Vector& t : statistic_) mean += t;
  mean /= count;
  for (int w = 0; w < count; ++w) centered.row(w) = (statistic_[w] - mean).transpose();
  Eigen::JacobiSVD<Matrix> svd(centered);
  const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  const double tol = 1e-10 * std::max(1.0, smax);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol) ++rank;
  if (rank < dim_)
    throw ConvexityError("sufficient statistic is affinely degenerate; the log-partition of " +
                         name_ + " would not be strictly convex");
}

namespace {

// Shifted exponents a_w = <theta, T(w)> + log mu_w and the resulting
// normalized probabilities; shared by the partition, mean and metric paths.
struct Weights {
  Vector prob;
  double log_z;
};

Weights outcome_probabilities(const FiniteExpFamily& fam, const Vector& theta) {
  const int count = fam.outcome_count();
  Vector a(count);
  for (int w = 0; w < count; ++w)
    a[w] = theta.dot(fam.statistic()[w]) + std::log(fam.weights()[w]);
  const double m = a.maxCoeff();
  Vector e = (a.array() - m).exp();
  const double z = e.sum();
  return {e / z, m + std::log(z)};
}

}  // namespace

double log_partition(const FiniteExpFamily& fam, const Vector& theta) {
  if (theta.size() != fam.dim()) throw DimensionError("parameter length does not match family");
  return outcome_probabilities(fam, theta).log_z;
}

double density(const FiniteExpFamily& fam, const Vector& theta, int outcome_index) {
  if (theta.size() != fam.dim()) throw DimensionError("parameter length does not match family");
  if (outcome_index < 0 || outcome_index >= fam.outcome_count())
    throw IndexError("outcome index out of range");
  const double log_z = log_partition(fam, theta);
  return std::exp(theta.dot(fam.statistic()[outcome_index]) - log_z);
}

Vector mean_parameters(const FiniteExpFamily& fam, const Vector& theta) {
  if (theta.size() != fam.dim()) throw DimensionError("parameter length does not match family");
  Weights w = outcome_probabilities(fam, theta);
  Vector eta = Vector::Zero(fam.dim());
  for (int i = 0; i < fam.outcome_count(); ++i) eta += w.prob[i] * fam.statistic()[i];
  return eta;
}

Matrix fisher_metric(const FiniteExpFamily& fam, const Vector& theta) {
  if (theta.size() != fam.dim()) throw DimensionError("parameter length does not match family");
  Weights w = outcome_probabilities(fam, theta);
  Vector eta = Vector::Zero(fam.dim());
  for (int i = 0; i < fam.outcome_count(); ++i) eta += w.prob[i] * fam.statistic()[i];
  Matrix g = Matrix::Zero(fam.dim(), fam.dim());
  for (int i = 0; i < fam.outcome_count(); ++i) {
    Vector c = fam.statistic()[i] - eta;
    g += w.prob[i] * (c * c.transpose());
  }
  return g;
}

ConvexPotential as_potential(const FiniteExpFamily& fam) {
  ConvexPotential p;
  p.domain = BoxDomain::unbounded(fam.dim());
  p.name = fam.name();
  p.value_fn = [fam](const Vector& t) { return log_partition(fam, t); };
  p.grad_fn = [fam](const Vector& t) { return mean_parameters(fam, t); };
  p.hess_fn = [fam](const Vector& t) { return fisher_metric(fam, t); };
  return p;
}

double negative_entropy(const FiniteExpFamily& fam, const Vector& eta) {
  return conjugate(as_potential(fam), eta);
}

double kl_divergence(const FiniteExpFamily& fam, const Vector& theta_a, const Vector& theta_b) {
  Weights wa = outcome_probabilities(fam, theta_a);
  Weights wb = outcome_probabilities(fam, theta_b);
  double kl = 0.0;
  for (int i = 0; i < fam.outcome_count(); ++i)
    kl += wa.prob[i] * (std::log(wa.prob[i]) - std::log(wb.prob[i]));
  return kl;
}

FiniteExpFamily bernoulli_family() {
  return FiniteExpFamily("bernoulli", {"0", "1"}, (Vector(2) << 1.0, 1.0).finished(),
                         {Vector::Zero(1), Vector::Ones(1)});
}

FiniteExpFamily categorical_family(int n) {
  if (n < 1) throw DimensionError("categorical family needs dimension >= 1");
  std::vector<std::string> outcomes;
  std::vector<Vector> stat;
  for (int k = 0; k <= n; ++k) {
    outcomes.push_back(std::to_string(k));
    stat.push_back(k == 0 ? Vector(Vector::Zero(n)) : Vector(Vector::Unit(n, k - 1)));
  }
  return FiniteExpFamily("categorical" + std::to_string(n), std::move(outcomes),
                         Vector::Ones(n + 1), std::move(stat));
}

FiniteExpFamily truncated_poisson_family(int cutoff) {
  if (cutoff < 1) throw DimensionError("poisson truncation needs at least two outcomes");
  std::vector<std::string> outcomes;
  std::vector<Vector> stat;
  Vector weights(cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) {
    outcomes.push_back(std::to_string(k));
    weights[k] = 1.0 / std::tgamma(static_cast<double>(k) + 1.0);
    stat.push_back(Vector::Constant(1, static_cast<double>(k)));
  }
  return FiniteExpFamily("poisson" + std::to_string(cutoff), std::move(outcomes),
                         std::move(weights), std::move(stat));
}

}  // namespace lb
