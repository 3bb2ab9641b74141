#pragma once

#include <string>
#include <vector>

#include "lb/potential.hpp"
#include "lb/types.hpp"

namespace lb {

// Exponential family with finitely many outcomes: base weights mu and a
// vector-valued sufficient statistic T. Densities are taken with respect to
// the weighted counting measure, so sum_w mu_w * density(theta, w) = 1.
class FiniteExpFamily {
 public:
  FiniteExpFamily(std::string name, std::vector<std::string> outcomes, Vector weights,
                  std::vector<Vector> statistic);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int outcome_count() const { return static_cast<int>(outcomes_.size()); }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const Vector& weights() const { return weights_; }
  const std::vector<Vector>& statistic() const { return statistic_; }

 private:
  std::string name_;
  std::vector<std::string> outcomes_;
  Vector weights_;
  std::vector<Vector> statistic_;
  int dim_;
};

// log sum_w mu_w exp(<theta, T(w)>), max-shifted so large parameters cannot
// overflow.
double log_partition(const FiniteExpFamily& fam, const Vector& theta);

// Density of one outcome with respect to the weighted counting measure.
double density(const FiniteExpFamily& fam, const Vector& theta, int outcome_index);

// Expectation of the sufficient statistic.
Vector mean_parameters(const FiniteExpFamily& fam, const Vector& theta);

// Covariance of the sufficient statistic.
Matrix fisher_metric(const FiniteExpFamily& fam, const Vector& theta);

// Conjugate of the log-partition at the mean parameters eta. Equals the
// negative Shannon entropy of the corresponding distribution. Throws
// NonConvergenceError when eta leaves the open mean polytope.
double negative_entropy(const FiniteExpFamily& fam, const Vector& eta);

// The log-partition packaged as a potential, with mean parameters as the
// gradient and the Fisher metric as the Hessian.
ConvexPotential as_potential(const FiniteExpFamily& fam);

// Kullback-Leibler divergence KL(P_a || P_b) by direct summation.
double kl_divergence(const FiniteExpFamily& fam, const Vector& theta_a, const Vector& theta_b);

FiniteExpFamily bernoulli_family();
FiniteExpFamily categorical_family(int n);

// Poisson truncated to {0, ..., cutoff} with weights 1/k!.
FiniteExpFamily truncated_poisson_family(int cutoff = 60);

}  // namespace lb
