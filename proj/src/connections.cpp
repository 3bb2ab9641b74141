#include "lb/connections.hpp"

#include <cmath>
#include <limits>
#include <mutex>

namespace lb {

namespace {

const double kEps = std::numeric_limits<double>::epsilon();
const double kGradStep = std::cbrt(kEps);

double scaled(double base, double x) { return base * std::max(1.0, std::abs(x)); }

}  // namespace

struct DuallyFlatManifold::Cache {
  std::once_flag built;
  ConvexPotential dual;
};

DuallyFlatManifold::DuallyFlatManifold(ConvexPotential potential)
    : potential_(std::move(potential)), cache_(std::make_shared<Cache>()) {}

const ConvexPotential& DuallyFlatManifold::dual_potential() const {
  std::call_once(cache_->built, [this]() {
    const ConvexPotential p = potential_;  // captured by value: independent lifetime
    ConvexPotential d;
    d.domain = BoxDomain::unbounded(p.dim());
    d.name = p.name + "*";
    d.value_fn = [p](const Vector& eta) { return conjugate(p, eta); };
    d.grad_fn = [p](const Vector& eta) { return from_dual(p, eta); };
    // No analytic Hessian: the metric in the dual chart is recovered by
    // differencing the inverse map, independently of the primal Hessian.
    cache_->dual = std::move(d);
  });
  return cache_->dual;
}

Tensor3 christoffel_primal(const DuallyFlatManifold& m, const Vector& theta) {
  m.potential().domain.require_interior(theta);
  return Tensor3(m.dim());
}

Tensor3 christoffel_dual_in_primal_coords(const DuallyFlatManifold& m, const Vector& theta) {
  const int n = m.dim();
  Tensor3 T = third_derivative(m.potential(), theta);
  Matrix g = hessian(m.potential(), theta);
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success)
    throw ConvexityError("metric is not positive definite at the requested point");

  Tensor3 gamma(n);
  Vector rhs(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < n; ++k) rhs[k] = T(i, j, k);
      Vector sol = llt.solve(rhs);
      for (int k = 0; k < n; ++k) {
        gamma(i, j, k) = sol[k];
        gamma(j, i, k) = sol[k];
      }
    }
  }
  return gamma;
}

double duality_defect(const DuallyFlatManifold& m, const Vector& theta, const Vector& X,
                      const Vector& Y, const Vector& Z) {
  const ConvexPotential& p = m.potential();
  p.domain.require_interior(theta);
  const int n = m.dim();
  if (X.size() != n || Y.size() != n || Z.size() != n)
    throw DimensionError("vector field length does not match manifold dimension");

  // Directional derivative of g(X, Y) along Z by central differences.
  const double h = scaled(kGradStep, theta.cwiseAbs().maxCoeff()) /
                   std::max(1.0, Z.cwiseAbs().maxCoeff());
  const Vector tp = theta + h * Z;
  const Vector tm = theta - h * Z;
  if (!p.domain.is_interior(tp) || !p.domain.is_interior(tm))
    throw StencilError("directional stencil for the metric derivative leaves the domain");
  const double lhs =
      (X.dot(hessian(p, tp) * Y) - X.dot(hessian(p, tm) * Y)) / (2.0 * h);

  Matrix g = hessian(p, theta);

  // Primal connection is flat in this chart, so its term vanishes; compute it
  // anyway from the returned coefficients rather than assuming.
  Tensor3 gp = christoffel_primal(m, theta);
  Tensor3 gd = christoffel_dual_in_primal_coords(m, theta);
  Vector dzx = Vector::Zero(n), dzy = Vector::Zero(n);
  for (int k = 0; k < n; ++k) {
    double sp = 0.0, sd = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        sp += Z[i] * X[j] * gp(i, j, k);
        sd += Z[i] * Y[j] * gd(i, j, k);
      }
    }
    dzx[k] = sp;
    dzy[k] = sd;
  }

  const double rhs = dzx.dot(g * Y) + X.dot(g * dzy);
  return std::abs(lhs - rhs);
}

namespace {

// Connection coefficients of the conjugate connection in the dual chart,
// computed through the inverse gradient map: pull the primal-chart mixed
// coefficients back with the Jacobian of theta(eta) and add the second
// derivative of that map, then lower with the chart's metric factor.
Tensor3 dual_chart_symbols(const DuallyFlatManifold& m, const Vector& eta) {
  const ConvexPotential& p = m.potential();
  const int n = m.dim();

  const Vector theta = from_dual(p, eta);

  // Jacobian A = d theta / d eta: by the inverse function theorem this is
  // the inverse Hessian at the solved preimage, which avoids the subtractive
  // noise of differencing the solver output directly.
  auto inverse_hessian_at = [&p, n](const Vector& t) {
    Matrix g = hessian(p, t);
    Eigen::LLT<Matrix> llt(g);
    if (llt.info() != Eigen::Success)
      throw ConvexityError("metric is not positive definite along the dual stencil");
    return Matrix(llt.solve(Matrix::Identity(n, n)));
  };
  const Matrix A = inverse_hessian_at(theta);

  // Second derivatives S(i,j,.) = d^2 theta / d eta_i d eta_j, measured by
  // differencing the Jacobian field along eta. Each sample is solver plus
  // analytic inversion, so its noise floor sits near machine precision, and
  // one Richardson fold removes the leading truncation term. Without both,
  // the curvature quotient downstream amplifies the error past its budget.
  const double kSecondStep = 1e-3;
  Tensor3 S(n);
  {
    Vector e = eta;
    for (int i = 0; i < n; ++i) {
      const double h = scaled(kSecondStep, eta[i]);
      auto jacobian_delta = [&](double step) {
        e[i] = eta[i] + step;
        Matrix ap = inverse_hessian_at(from_dual(p, e, theta));
        e[i] = eta[i] - step;
        Matrix am = inverse_hessian_at(from_dual(p, e, theta));
        e[i] = eta[i];
        return Matrix((ap - am) / (2.0 * step));
      };
      const Matrix coarse = jacobian_delta(h);
      const Matrix fine = jacobian_delta(0.5 * h);
      const Matrix d = (4.0 * fine - coarse) / 3.0;
      for (int j = 0; j < n; ++j)
        for (int c = 0; c < n; ++c) S(i, j, c) = d(c, j);
    }
    // Partials of the gradient field commute; symmetrizing the measured
    // values keeps the transported symbols torsion free.
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int c = 0; c < n; ++c) {
          const double sym = 0.5 * (S(i, j, c) + S(j, i, c));
          S(i, j, c) = sym;
          S(j, i, c) = sym;
        }
      }
    }
  }

  Tensor3 G = christoffel_dual_in_primal_coords(m, theta);
  Matrix g = hessian(p, theta);

  Tensor3 out(n);
  Vector w(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int c = 0; c < n; ++c) {
        double s = S(i, j, c);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) s += A(a, i) * A(b, j) * G(a, b, c);
        w[c] = s;
      }
      // The dual-chart metric is the inverse of g pushed forward; lowering
      // with A^{-1} = g means multiplying the transported upper-index symbol
      // by g itself.
      Vector low = g * w;
      for (int k = 0; k < n; ++k) {
        out(i, j, k) = low[k];
        out(j, i, k) = low[k];
      }
    }
  }
  return out;
}

}  // namespace

double dual_flatness_defect(const DuallyFlatManifold& m, const Vector& eta) {
  const int n = m.dim();
  Tensor3 gamma = dual_chart_symbols(m, eta);
  double defect = gamma.max_abs();

  if (n >= 2) {
    // Curvature of the dual-chart symbols. Every term of
    //   R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
    //             + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
    // is a residual here, so a wide step keeps the quotient noise small.
    const double kCurvStep = 0.05;
    std::vector<Tensor3> plus(n, Tensor3(n)), minus(n, Tensor3(n));
    std::vector<double> hs(n);
    Vector e = eta;
    for (int i = 0; i < n; ++i) {
      hs[i] = scaled(kCurvStep, eta[i]);
      e[i] = eta[i] + hs[i];
      plus[i] = dual_chart_symbols(m, e);
      e[i] = eta[i] - hs[i];
      minus[i] = dual_chart_symbols(m, e);
      e[i] = eta[i];
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) {
            double r = (plus[i](j, k, l) - minus[i](j, k, l)) / (2.0 * hs[i]) -
                       (plus[j](i, k, l) - minus[j](i, k, l)) / (2.0 * hs[j]);
            for (int mm = 0; mm < n; ++mm)
              r += gamma(i, mm, l) * gamma(j, k, mm) - gamma(j, mm, l) * gamma(i, k, mm);
            defect = std::max(defect, std::abs(r));
          }
        }
      }
    }
  }
  return defect;
}

}  // namespace lb
