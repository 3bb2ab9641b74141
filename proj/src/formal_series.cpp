#include "lb/formal_series.hpp"

#include <cmath>
#include <utility>

namespace lb {

FormalSeries::FormalSeries(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) throw OrderMismatchError("series needs at least a constant term");
}

FormalSeries FormalSeries::constant(double a0, int order) {
  FormalSeries s(order);
  s[0] = a0;
  return s;
}

double FormalSeries::operator[](int k) const {
  if (k < 0 || k > order()) throw IndexError("series coefficient index out of range");
  return c_[static_cast<std::size_t>(k)];
}

double& FormalSeries::operator[](int k) {
  if (k < 0 || k > order()) throw IndexError("series coefficient index out of range");
  return c_[static_cast<std::size_t>(k)];
}

double FormalSeries::evaluate(double u) const {
  // Horner form of the truncated polynomial.
  double v = 0.0;
  for (int k = order(); k >= 0; --k) v = v * u + c_[static_cast<std::size_t>(k)];
  return v;
}

namespace {

void require_same_order(const FormalSeries& a, const FormalSeries& b) {
  if (a.order() != b.order())
    throw OrderMismatchError("series truncation orders differ (" + std::to_string(a.order()) +
                             " vs " + std::to_string(b.order()) + ")");
}

}  // namespace

FormalSeries series_add(const FormalSeries& a, const FormalSeries& b) {
  require_same_order(a, b);
  FormalSeries r(a.order());
  for (int k = 0; k <= a.order(); ++k) r[k] = a[k] + b[k];
  return r;
}

FormalSeries series_neg(const FormalSeries& a) {
  FormalSeries r(a.order());
  for (int k = 0; k <= a.order(); ++k) r[k] = -a[k];
  return r;
}

FormalSeries series_mul(const FormalSeries& a, const FormalSeries& b) {
  require_same_order(a, b);
  FormalSeries r(a.order());
  for (int k = 0; k <= a.order(); ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += a[i] * b[k - i];
    r[k] = s;
  }
  return r;
}

FormalSeries series_exp(const FormalSeries& a) {
  if (a[0] != 0.0)
    throw InvalidLeadingCoefficientError("series exp needs a vanishing constant term");
  // b' = a' b termwise: b_k = (1/k) sum_{j=1}^{k} j a_j b_{k-j}.
  FormalSeries b(a.order());
  b[0] = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * a[j] * b[k - j];
    b[k] = s / k;
  }
  return b;
}

FormalSeries series_log(const FormalSeries& a) {
  if (!(a[0] > 0.0))
    throw InvalidLeadingCoefficientError("series log needs a strictly positive constant term");
  // b' = a'/a termwise: k a_0 b_k = k a_k - sum_{j=1}^{k-1} j b_j a_{k-j}.
  FormalSeries b(a.order());
  b[0] = std::log(a[0]);
  for (int k = 1; k <= a.order(); ++k) {
    double s = k * a[k];
    for (int j = 1; j < k; ++j) s -= j * b[j] * a[k - j];
    b[k] = s / (k * a[0]);
  }
  return b;
}

FormalSeries series_recip(const FormalSeries& a) {
  if (a[0] == 0.0)
    throw InvalidLeadingCoefficientError("series reciprocal needs a nonzero constant term");
  FormalSeries b(a.order());
  b[0] = 1.0 / a[0];
  for (int k = 1; k <= a.order(); ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += a[j] * b[k - j];
    b[k] = -s / a[0];
  }
  return b;
}

FormalSeries series_truncate(const FormalSeries& a, int order) {
  if (order < 0) throw OrderMismatchError("truncation order must be non-negative");
  FormalSeries r(order);
  for (int k = 0; k <= std::min(order, a.order()); ++k) r[k] = a[k];
  return r;
}

bool operator==(const FormalSeries& a, const FormalSeries& b) {
  return a.coeffs() == b.coeffs();
}

SeriesMatrix::SeriesMatrix(int rows, int cols, int order)
    : rows_(rows), cols_(cols), order_(order),
      entries_(static_cast<std::size_t>(rows) * cols, FormalSeries(order)) {}

const FormalSeries& SeriesMatrix::at(int i, int j) const {
  if (i < 0 || j < 0 || i >= rows_ || j >= cols_) throw IndexError("series matrix index out of range");
  return entries_[static_cast<std::size_t>(i) * cols_ + j];
}

FormalSeries& SeriesMatrix::at(int i, int j) {
  if (i < 0 || j < 0 || i >= rows_ || j >= cols_) throw IndexError("series matrix index out of range");
  return entries_[static_cast<std::size_t>(i) * cols_ + j];
}

Matrix SeriesMatrix::coefficient(int k) const {
  Matrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = at(i, j)[k];
  return m;
}

Matrix SeriesMatrix::substitute(double u, int up_to) const {
  if (up_to < 0 || up_to > order_) throw IndexError("substitution order out of range");
  Matrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      double v = 0.0;
      for (int k = up_to; k >= 0; --k) v = v * u + at(i, j)[k];
      m(i, j) = v;
    }
  }
  return m;
}

FamilyPotential make_family(BoxDomain domain, std::vector<ConvexPotential> coefficients,
                            std::string name) {
  if (coefficients.empty())
    throw OrderMismatchError("family potential needs at least the zeroth coefficient");
  for (const auto& c : coefficients)
    if (c.dim() != domain.dim())
      throw DimensionError("family coefficient dimension does not match the family domain");
  FamilyPotential f;
  f.domain = std::move(domain);
  f.coefficients = std::move(coefficients);
  f.name = std::move(name);
  return f;
}

FormalSeries family_eval(const FamilyPotential& f, const Vector& t) {
  f.domain.require_interior(t);
  FormalSeries s(f.order());
  for (int k = 0; k <= f.order(); ++k) s[k] = f.coefficients[k].value_fn(t);
  return s;
}

std::vector<FormalSeries> family_gradient(const FamilyPotential& f, const Vector& t) {
  const int n = f.dim();
  std::vector<FormalSeries> g(n, FormalSeries(f.order()));
  for (int k = 0; k <= f.order(); ++k) {
    Vector gk = gradient(f.coefficients[k], t);
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)][k] = gk[i];
  }
  return g;
}

SeriesMatrix family_hessian(const FamilyPotential& f, const Vector& t) {
  const int n = f.dim();
  SeriesMatrix H(n, n, f.order());
  for (int k = 0; k <= f.order(); ++k) {
    Matrix hk = hessian_unchecked(f.coefficients[k], t);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) H.at(i, j)[k] = hk(i, j);
  }
  return H;
}

Report formal_convexity_check(const FamilyPotential& f, const std::vector<Vector>& points) {
  Report r;
  r.subject = f.name;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    SeriesMatrix H = family_hessian(f, points[idx]);
    const std::string prefix = "point_" + std::to_string(idx) + "_order_";
    for (int k = 0; k <= f.order(); ++k) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(H.coefficient(k));
      const double lam = es.eigenvalues().minCoeff();
      if (k == 0) {
        r.add(prefix + "0_min_eigenvalue",
              lam > kPdEpsilon ? CheckStatus::pass : CheckStatus::fail, lam, kPdEpsilon);
      } else {
        // Informational only: higher coefficients carry no sign constraint.
        r.add(prefix + std::to_string(k) + "_min_eigenvalue", CheckStatus::pass, lam, kPdEpsilon);
      }
    }
  }
  return r;
}

}  // namespace lb
