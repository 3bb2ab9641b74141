#include "lb/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <utility>

namespace lb {

namespace {

const double kEps = std::numeric_limits<double>::epsilon();
// Step scales balancing truncation against rounding for each derivative order.
const double kGradStep = std::cbrt(kEps);            // ~6.1e-6
const double kHessStep = std::pow(kEps, 0.25);       // ~1.2e-4
const double kThirdStep = std::pow(kEps, 0.2);       // ~7.4e-4

double scaled_step(double base, double x) { return base * std::max(1.0, std::abs(x)); }

void require_stencil(const BoxDomain& dom, const Vector& x) {
  if (!dom.is_interior(x))
    throw StencilError("finite-difference stencil leaves the domain");
}

std::string point_string(const Vector& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

BoxDomain BoxDomain::unbounded(int dim) {
  const double inf = std::numeric_limits<double>::infinity();
  BoxDomain d;
  d.lower = Vector::Constant(dim, -inf);
  d.upper = Vector::Constant(dim, inf);
  return d;
}

BoxDomain BoxDomain::bounded(Vector lo, Vector hi) {
  if (lo.size() != hi.size()) throw DimensionError("box bounds differ in length");
  for (int i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) throw DomainError("box has empty interior");
  BoxDomain d;
  d.lower = std::move(lo);
  d.upper = std::move(hi);
  return d;
}

bool BoxDomain::is_interior(const Vector& x) const {
  if (x.size() != lower.size()) throw DimensionError("point length does not match domain");
  for (int i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) return false;
    if (!(x[i] > lower[i] && x[i] < upper[i])) return false;
  }
  return true;
}

Vector BoxDomain::center() const {
  Vector c(dim());
  for (int i = 0; i < dim(); ++i) {
    double lo = lower[i], hi = upper[i];
    // Clip infinite bounds to a unit window near the origin, shifted outward
    // when the finite bound already excludes that window.
    if (std::isinf(lo) && std::isinf(hi)) {
      lo = -1.0;
      hi = 1.0;
    } else if (std::isinf(lo)) {
      lo = hi > -1.0 ? -1.0 : hi - 2.0;
    } else if (std::isinf(hi)) {
      hi = lo < 1.0 ? 1.0 : lo + 2.0;
    }
    c[i] = 0.5 * (lo + hi);
  }
  return c;
}

void BoxDomain::require_interior(const Vector& x, const char* what) const {
  if (x.size() != lower.size()) {
    std::ostringstream os;
    os << what << " has length " << x.size() << ", domain has dimension " << dim();
    throw DimensionError(os.str());
  }
  if (!is_interior(x)) {
    std::ostringstream os;
    os << what << " " << point_string(x) << " is not interior to the domain box";
    throw DomainError(os.str());
  }
}

double eval(const ConvexPotential& p, const Vector& theta) {
  p.domain.require_interior(theta);
  return p.value_fn(theta);
}

Vector gradient(const ConvexPotential& p, const Vector& theta) {
  p.domain.require_interior(theta);
  if (p.grad_fn) return p.grad_fn(theta);

  const int n = p.dim();
  Vector g(n);
  Vector xp = theta, xm = theta;
  for (int i = 0; i < n; ++i) {
    const double h = scaled_step(kGradStep, theta[i]);
    xp[i] = theta[i] + h;
    xm[i] = theta[i] - h;
    require_stencil(p.domain, xp);
    require_stencil(p.domain, xm);
    g[i] = (p.value_fn(xp) - p.value_fn(xm)) / (2.0 * h);
    xp[i] = theta[i];
    xm[i] = theta[i];
  }
  return g;
}

Matrix hessian_unchecked(const ConvexPotential& p, const Vector& theta) {
  p.domain.require_interior(theta);
  const int n = p.dim();

  if (p.hess_fn) return p.hess_fn(theta);

  if (p.grad_fn) {
    // Jacobian of the analytic gradient, then symmetrized.
    Matrix H(n, n);
    Vector xp = theta, xm = theta;
    for (int j = 0; j < n; ++j) {
      const double h = scaled_step(kHessStep, theta[j]);
      xp[j] = theta[j] + h;
      xm[j] = theta[j] - h;
      require_stencil(p.domain, xp);
      require_stencil(p.domain, xm);
      H.col(j) = (p.grad_fn(xp) - p.grad_fn(xm)) / (2.0 * h);
      xp[j] = theta[j];
      xm[j] = theta[j];
    }
    return 0.5 * (H + H.transpose());
  }

  // Second differences of values. Symmetric by construction.
  Matrix H(n, n);
  const double f0 = p.value_fn(theta);
  Vector x = theta;
  for (int i = 0; i < n; ++i) {
    const double hi = scaled_step(kHessStep, theta[i]);
    x[i] = theta[i] + hi;
    require_stencil(p.domain, x);
    const double fp = p.value_fn(x);
    x[i] = theta[i] - hi;
    require_stencil(p.domain, x);
    const double fm = p.value_fn(x);
    x[i] = theta[i];
    H(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
    for (int j = i + 1; j < n; ++j) {
      const double hj = scaled_step(kHessStep, theta[j]);
      double quad = 0.0;
      for (int si = -1; si <= 1; si += 2) {
        for (int sj = -1; sj <= 1; sj += 2) {
          x[i] = theta[i] + si * hi;
          x[j] = theta[j] + sj * hj;
          require_stencil(p.domain, x);
          quad += si * sj * p.value_fn(x);
        }
      }
      x[i] = theta[i];
      x[j] = theta[j];
      H(i, j) = H(j, i) = quad / (4.0 * hi * hj);
    }
  }
  return H;
}

double min_hessian_eigenvalue(const ConvexPotential& p, const Vector& theta) {
  Matrix H = hessian_unchecked(p, theta);
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  if (es.info() != Eigen::Success) throw Error("eigenvalue solve failed");
  return es.eigenvalues().minCoeff();
}

Matrix hessian(const ConvexPotential& p, const Vector& theta) {
  Matrix H = hessian_unchecked(p, theta);
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  if (es.info() != Eigen::Success) throw Error("eigenvalue solve failed");
  if (!(es.eigenvalues().minCoeff() > kPdEpsilon)) {
    std::ostringstream os;
    os << "Hessian of " << p.name << " at " << point_string(theta)
       << " is not strictly positive definite (min eigenvalue "
       << es.eigenvalues().minCoeff() << ")";
    throw ConvexityError(os.str());
  }
  return H;
}

Tensor3 third_derivative(const ConvexPotential& p, const Vector& theta) {
  p.domain.require_interior(theta);
  const int n = p.dim();

  // Difference the Hessian along each axis. An analytic Hessian has a
  // machine-level noise floor, so the cube-root step is optimal; the wider
  // step only pays off when the Hessian is itself a difference quotient.
  const double base = p.hess_fn ? kGradStep : kThirdStep;
  std::vector<Matrix> d(n);
  Vector xp = theta, xm = theta;
  for (int k = 0; k < n; ++k) {
    const double h = scaled_step(base, theta[k]);
    xp[k] = theta[k] + h;
    xm[k] = theta[k] - h;
    require_stencil(p.domain, xp);
    require_stencil(p.domain, xm);
    d[k] = (hessian_unchecked(p, xp) - hessian_unchecked(p, xm)) / (2.0 * h);
    xp[k] = theta[k];
    xm[k] = theta[k];
  }

  // Average the three independent estimates for each index multiset in a
  // fixed order, then copy to all permutations. This makes the symmetry
  // exact in floating point, not just up to truncation error.
  Tensor3 T(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        const double v = (d[k](i, j) + d[j](i, k) + d[i](j, k)) / 3.0;
        T(i, j, k) = T(i, k, j) = T(j, i, k) = v;
        T(j, k, i) = T(k, i, j) = T(k, j, i) = v;
      }
    }
  }
  return T;
}

Report check_strict_convexity(const ConvexPotential& p, const std::vector<Vector>& points) {
  Report r;
  r.subject = p.name;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const double lam = min_hessian_eigenvalue(p, points[idx]);
    CheckStatus st = lam > kPdEpsilon ? CheckStatus::pass : CheckStatus::fail;
    r.add("min_eigenvalue_point_" + std::to_string(idx), st, lam, kPdEpsilon);
  }
  return r;
}

namespace potentials {

namespace {

double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// sigma'(t), written symmetrically in t so the odd symmetry around 0 is exact.
double sigmoid_deriv(double t) {
  const double e = std::exp(-std::abs(t));
  const double s = 1.0 + e;
  return e / (s * s);
}

// Integer power by repeated multiplication; exact for the small exponents
// polynomial terms use.
double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

}  // namespace

ConvexPotential bernoulli() {
  ConvexPotential p;
  p.domain = BoxDomain::unbounded(1);
  p.name = "bernoulli";
  p.value_fn = [](const Vector& t) { return softplus(t[0]); };
  p.grad_fn = [](const Vector& t) {
    Vector g(1);
    g[0] = sigmoid(t[0]);
    return g;
  };
  p.hess_fn = [](const Vector& t) {
    Matrix H(1, 1);
    H(0, 0) = sigmoid_deriv(t[0]);
    return H;
  };
  return p;
}

ConvexPotential categorical(int n) {
  if (n < 1) throw DimensionError("categorical potential needs dimension >= 1");
  ConvexPotential p;
  p.domain = BoxDomain::unbounded(n);
  p.name = "categorical" + std::to_string(n);
  // Probabilities of the n non-baseline outcomes; the baseline picks up the
  // remaining mass. Shifted by the running max for overflow safety.
  auto probs = [n](const Vector& t) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, t[i]);
    double z = std::exp(-m);
    Vector e(n);
    for (int i = 0; i < n; ++i) {
      e[i] = std::exp(t[i] - m);
      z += e[i];
    }
    return std::pair<Vector, double>(e / z, m + std::log(z));
  };
  p.value_fn = [probs](const Vector& t) { return probs(t).second; };
  p.grad_fn = [probs](const Vector& t) { return probs(t).first; };
  p.hess_fn = [probs](const Vector& t) {
    Vector q = probs(t).first;
    Matrix H = q.asDiagonal();
    H -= q * q.transpose();
    return H;
  };
  return p;
}

ConvexPotential poisson() {
  ConvexPotential p;
  p.domain = BoxDomain::unbounded(1);
  p.name = "poisson";
  p.value_fn = [](const Vector& t) { return std::exp(t[0]); };
  p.grad_fn = [](const Vector& t) {
    Vector g(1);
    g[0] = std::exp(t[0]);
    return g;
  };
  p.hess_fn = [](const Vector& t) {
    Matrix H(1, 1);
    H(0, 0) = std::exp(t[0]);
    return H;
  };
  return p;
}

ConvexPotential gaussian_natural() {
  ConvexPotential p;
  const double inf = std::numeric_limits<double>::infinity();
  p.domain = BoxDomain::bounded((Vector(2) << -inf, -inf).finished(),
                                (Vector(2) << inf, 0.0).finished());
  p.name = "gaussian_natural";
  p.value_fn = [](const Vector& t) {
    return -t[0] * t[0] / (4.0 * t[1]) + 0.5 * std::log(M_PI) - 0.5 * std::log(-t[1]);
  };
  p.grad_fn = [](const Vector& t) {
    Vector g(2);
    g[0] = -t[0] / (2.0 * t[1]);
    g[1] = t[0] * t[0] / (4.0 * t[1] * t[1]) - 1.0 / (2.0 * t[1]);
    return g;
  };
  p.hess_fn = [](const Vector& t) {
    const double a = t[0], b = t[1];
    Matrix H(2, 2);
    H(0, 0) = -1.0 / (2.0 * b);
    H(0, 1) = H(1, 0) = a / (2.0 * b * b);
    H(1, 1) = -a * a / (2.0 * b * b * b) + 1.0 / (2.0 * b * b);
    return H;
  };
  return p;
}

ConvexPotential quadratic(int n) {
  ConvexPotential p;
  p.domain = BoxDomain::unbounded(n);
  p.name = "quadratic" + std::to_string(n);
  p.value_fn = [](const Vector& t) { return 0.5 * t.squaredNorm(); };
  p.grad_fn = [](const Vector& t) { return t; };
  p.hess_fn = [n](const Vector&) { return Matrix::Identity(n, n); };
  return p;
}

ConvexPotential polynomial(BoxDomain domain, std::vector<PolyTerm> terms, std::string name) {
  const int n = domain.dim();
  for (const auto& term : terms) {
    if (static_cast<int>(term.exponents.size()) != n)
      throw DimensionError("polynomial term exponent list does not match domain dimension");
    for (int e : term.exponents)
      if (e < 0) throw DomainError("polynomial exponents must be non-negative");
  }

  ConvexPotential p;
  p.domain = std::move(domain);
  p.name = std::move(name);
  auto ts = std::make_shared<std::vector<PolyTerm>>(std::move(terms));

  p.value_fn = [ts, n](const Vector& t) {
    double v = 0.0;
    for (const auto& term : *ts) {
      double m = term.coeff;
      for (int i = 0; i < n; ++i) m *= ipow(t[i], term.exponents[i]);
      v += m;
    }
    return v;
  };
  p.grad_fn = [ts, n](const Vector& t) {
    Vector g = Vector::Zero(n);
    for (const auto& term : *ts) {
      for (int j = 0; j < n; ++j) {
        const int ej = term.exponents[j];
        if (ej == 0) continue;
        double m = term.coeff * ej;
        for (int i = 0; i < n; ++i) m *= ipow(t[i], i == j ? ej - 1 : term.exponents[i]);
        g[j] += m;
      }
    }
    return g;
  };
  p.hess_fn = [ts, n](const Vector& t) {
    Matrix H = Matrix::Zero(n, n);
    for (const auto& term : *ts) {
      for (int j = 0; j < n; ++j) {
        const int ej = term.exponents[j];
        if (ej == 0) continue;
        // Diagonal entry.
        if (ej >= 2) {
          double m = term.coeff * ej * (ej - 1);
          for (int i = 0; i < n; ++i) m *= ipow(t[i], i == j ? ej - 2 : term.exponents[i]);
          H(j, j) += m;
        }
        // Mixed entries, counted once per ordered pair below the diagonal.
        for (int k = 0; k < j; ++k) {
          const int ek = term.exponents[k];
          if (ek == 0) continue;
          double m = term.coeff * ej * ek;
          for (int i = 0; i < n; ++i) {
            int e = term.exponents[i];
            if (i == j) e -= 1;
            if (i == k) e -= 1;
            m *= ipow(t[i], e);
          }
          H(j, k) += m;
          H(k, j) += m;
        }
      }
    }
    return H;
  };
  return p;
}

ConvexPotential zero(BoxDomain domain) {
  const int n = domain.dim();
  ConvexPotential p;
  p.domain = std::move(domain);
  p.name = "zero";
  p.value_fn = [](const Vector&) { return 0.0; };
  p.grad_fn = [n](const Vector&) { return Vector::Zero(n); };
  p.hess_fn = [n](const Vector&) { return Matrix::Zero(n, n); };
  return p;
}

}  // namespace potentials

}  // namespace lb
