// Signature-aware dense linear algebra and differential operators (order-2
// jets, Lie brackets, Christoffel symbols, path integration). Everything else
// in the library is built on top of this header.
//
// Index conventions, stated once: lower indices are chart coordinates,
// vectors are columns, covectors are rows (stored as Eigen column vectors and
// applied via dot products). A chart jet holds value (m), Jacobian (m x n) and
// one n x n Hessian per target component.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace affq {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Tolerances (see DESIGN DECISIONS of the numeric kernel).
// ---------------------------------------------------------------------------
struct Tol {
  static constexpr double singular = 1e-10;  // relative to largest eigenvalue
  static constexpr double fd_step = 1e-3;    // default 4th-order stencil step
  static constexpr double quad = 1e-8;       // path-integration refinement
};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};
struct DimMismatch : Error {
  explicit DimMismatch(const std::string& w) : Error("dim mismatch: " + w) {}
};
struct SingularMatrix : Error {
  double det;
  explicit SingularMatrix(double d)
      : Error("singular matrix, det=" + std::to_string(d)), det(d) {}
};
struct NotSymmetric : Error {
  explicit NotSymmetric(double r)
      : Error("matrix not symmetric, residual=" + std::to_string(r)) {}
};
struct OutOfDomain : Error {
  explicit OutOfDomain(const std::string& w) : Error("out of domain: " + w) {}
};
struct NonFiniteValue : Error {
  explicit NonFiniteValue(const std::string& w) : Error("non-finite: " + w) {}
};
struct DegenerateMetric : Error {
  explicit DegenerateMetric(double d)
      : Error("degenerate metric, det=" + std::to_string(d)) {}
};

inline void require_finite(const Vec& v, const char* who) {
  if (!v.allFinite()) throw NonFiniteValue(who);
}

// ---------------------------------------------------------------------------
// Order-2 forward jets. Jet2 carries (value, gradient, Hessian) through
// arithmetic so analytic charts never hand-derive second derivatives.
// ---------------------------------------------------------------------------
class Jet2 {
 public:
  Jet2() = default;
  Jet2(double v, int n) : v_(v), g_(Vec::Zero(n)), H_(Mat::Zero(n, n)) {}
  static Jet2 constant(double c, int n) { return Jet2(c, n); }
  static Jet2 variable(double x, int i, int n) {
    Jet2 j(x, n);
    j.g_(i) = 1.0;
    return j;
  }

  double value() const { return v_; }
  const Vec& grad() const { return g_; }
  const Mat& hess() const { return H_; }
  int dim() const { return static_cast<int>(g_.size()); }

  Jet2 operator-() const { return Jet2(-v_, -g_, -H_); }

  friend Jet2 operator+(const Jet2& a, const Jet2& b) {
    return Jet2(a.v_ + b.v_, a.g_ + b.g_, a.H_ + b.H_);
  }
  friend Jet2 operator-(const Jet2& a, const Jet2& b) {
    return Jet2(a.v_ - b.v_, a.g_ - b.g_, a.H_ - b.H_);
  }
  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    return Jet2(a.v_ * b.v_, a.v_ * b.g_ + b.v_ * a.g_,
                a.v_ * b.H_ + b.v_ * a.H_ + a.g_ * b.g_.transpose() +
                    b.g_ * a.g_.transpose());
  }
  friend Jet2 operator/(const Jet2& a, const Jet2& b) {
    return a * b.recip();
  }
  friend Jet2 operator+(const Jet2& a, double c) { return Jet2(a.v_ + c, a.g_, a.H_); }
  friend Jet2 operator+(double c, const Jet2& a) { return a + c; }
  friend Jet2 operator-(const Jet2& a, double c) { return Jet2(a.v_ - c, a.g_, a.H_); }
  friend Jet2 operator-(double c, const Jet2& a) { return (-a) + c; }
  friend Jet2 operator*(const Jet2& a, double c) { return Jet2(a.v_ * c, a.g_ * c, a.H_ * c); }
  friend Jet2 operator*(double c, const Jet2& a) { return a * c; }
  friend Jet2 operator/(const Jet2& a, double c) { return a * (1.0 / c); }
  friend Jet2 operator/(double c, const Jet2& a) { return a.recip() * c; }

  // chain rule for f(a) with f', f''
  Jet2 lift(double f, double df, double ddf) const {
    return Jet2(f, df * g_, df * H_ + ddf * g_ * g_.transpose());
  }
  Jet2 recip() const {
    const double iv = 1.0 / v_;
    return lift(iv, -iv * iv, 2.0 * iv * iv * iv);
  }

 private:
  Jet2(double v, Vec g, Mat H) : v_(v), g_(std::move(g)), H_(std::move(H)) {}
  double v_ = 0.0;
  Vec g_;
  Mat H_;
};

inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  return a.lift(e, e, e);
}
inline Jet2 log(const Jet2& a) {
  const double iv = 1.0 / a.value();
  return a.lift(std::log(a.value()), iv, -iv * iv);
}
inline Jet2 sin(const Jet2& a) {
  return a.lift(std::sin(a.value()), std::cos(a.value()), -std::sin(a.value()));
}
inline Jet2 cos(const Jet2& a) {
  return a.lift(std::cos(a.value()), -std::sin(a.value()), -std::cos(a.value()));
}
inline Jet2 sinh(const Jet2& a) {
  return a.lift(std::sinh(a.value()), std::cosh(a.value()), std::sinh(a.value()));
}
inline Jet2 cosh(const Jet2& a) {
  return a.lift(std::cosh(a.value()), std::sinh(a.value()), std::cosh(a.value()));
}
inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.value());
  return a.lift(s, 0.5 / s, -0.25 / (s * a.value()));
}
inline Jet2 pow(const Jet2& a, double p) {
  const double v = a.value();
  return a.lift(std::pow(v, p), p * std::pow(v, p - 1.0),
                p * (p - 1.0) * std::pow(v, p - 2.0));
}

// ---------------------------------------------------------------------------
// Chart maps and jets
// ---------------------------------------------------------------------------

// Jet of a map U ⊂ R^n -> R^m at a point: value, Jacobian, and (order 2)
// one symmetric n x n Hessian per component.
struct Jet {
  Vec value;              // m
  Mat jac;                // m x n
  std::vector<Mat> hess;  // m entries, each n x n
};

enum class JetMode { Analytic, FiniteDifference };

// A parametrized map with a jet oracle. Analytic charts are built from a
// Jet2-valued functor; finite-difference charts wrap a plain evaluator and
// use 4th-order central stencils.
class ChartMap {
 public:
  using EvalFn = std::function<Vec(const Vec&)>;
  using JetFn = std::function<std::vector<Jet2>(const std::vector<Jet2>&)>;

  ChartMap() = default;

  static ChartMap analytic(int n, int m, JetFn f);
  static ChartMap finite_difference(int n, int m, EvalFn f,
                                    double step = Tol::fd_step);
  // Concatenate the outputs of two charts over the same domain. The result
  // reports Analytic mode (and analytic-grade jets) only if both parts do.
  static ChartMap stacked(const ChartMap& top, const ChartMap& bottom);

  int domain_dim() const { return n_; }
  int target_dim() const { return m_; }
  JetMode mode() const { return mode_; }
  double fd_step() const { return step_; }

  Vec operator()(const Vec& p) const;
  Jet jet(const Vec& p, int order = 2) const;

  // Postcompose with a constant factor or a constant linear map; analytic
  // charts stay analytic.
  ChartMap scaled(double factor) const;
  ChartMap linearly_transformed(const Mat& L) const;

  bool valid() const { return n_ > 0; }

 private:
  int n_ = 0, m_ = 0;
  JetMode mode_ = JetMode::Analytic;
  double step_ = Tol::fd_step;
  EvalFn eval_;
  JetFn jet_;
  std::function<Jet(const Vec&, int)> jet_oracle_;  // used by stacked charts
};

// Free-function spelling used throughout the modules.
inline Jet jet(const ChartMap& chart, const Vec& p, int order = 2) {
  return chart.jet(p, order);
}

// ---------------------------------------------------------------------------
// Linear algebra
// ---------------------------------------------------------------------------

// Solve A x = b with a singularity guard: |det A| below singular_tol
// (relative to the scale of A) throws SingularMatrix.
Vec solve(const Mat& A, const Vec& b);
Mat solve(const Mat& A, const Mat& B);

double det(const Mat& A);

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

// A symmetric bilinear form together with its eigen-signature.
class BilinearForm {
 public:
  explicit BilinearForm(Mat m);
  const Mat& matrix() const { return m_; }
  Signature signature() const;
  double operator()(const Vec& a, const Vec& b) const {
    return a.dot(m_ * b);
  }

 private:
  Mat m_;
};

Signature signature_of(const Mat& symmetric);

// Signature-aware Gram-Schmidt with pivoting: given a spanning set (columns
// of V) and a symmetric pairing g on the ambient coordinates, produce a
// pseudo-orthonormal basis e_i with g(e_i, e_j) = ±δ_ij and the sign list.
// Throws DegenerateMetric if the pairing degenerates on span(V).
struct OrthoFrame {
  Mat basis;                // columns e_i
  std::vector<int> signs;   // ε_i = g(e_i, e_i) = ±1
  std::vector<int> pivots;  // processing order actually used
};
// When pivot_order is supplied (e.g. from a nearby point) it is followed
// verbatim, which keeps the frame a smooth function of the input.
OrthoFrame gram_schmidt(const Mat& V, const Mat& g,
                        const std::vector<int>* pivot_order = nullptr);

// ---------------------------------------------------------------------------
// Differential operators
// ---------------------------------------------------------------------------

// [X, Y](p) = JY(p)·X(p) − JX(p)·Y(p) for vector fields given as charts
// R^n -> R^n in ambient coordinates.
Vec lie_bracket(const ChartMap& X, const ChartMap& Y, const Vec& p);

// A chart-point -> symmetric matrix field with finite-difference derivatives.
class MetricField {
 public:
  using Fn = std::function<Mat(const Vec&)>;
  MetricField() = default;
  MetricField(int n, Fn g, double step = Tol::fd_step)
      : n_(n), g_(std::move(g)), step_(step) {}

  int dim() const { return n_; }
  Mat operator()(const Vec& p) const { return g_(p); }
  double fd_step() const { return step_; }

  // ∂_k g at p, 4th-order central differences entrywise.
  Mat partial(const Vec& p, int k) const;

 private:
  int n_ = 0;
  Fn g_;
  double step_ = Tol::fd_step;
};

// Levi-Civita coefficients Γ^k_{ij}(p); result[k](i,j).
std::vector<Mat> christoffel(const MetricField& g, const Vec& p);

// Riemann curvature R^l_{kij} ∂_l = R(∂_i,∂_j)∂_k, via finite differences of
// the Christoffel field. riemann[l](k, i*n+j) flattened; callers mostly need
// the sup-norm, exposed below.
double riemann_sup_norm(const MetricField& g, const Vec& p);

// Composite Gauss-Legendre integration of a 1-form along a polyline.
// alpha(p) returns the covector at p. Refinement by 2x is checked against
// quad_tol and reported through *refinement_gap when requested.
double integrate_1form(const std::function<Vec(const Vec&)>& alpha,
                       const std::vector<Vec>& polyline,
                       double* refinement_gap = nullptr);

// ---------------------------------------------------------------------------
// Deterministic random draws used by the test/verification harness.
// ---------------------------------------------------------------------------
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(eng_);
  }
  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  Vec vector(int n, double a = -1.0, double b = 1.0) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(a, b);
    return v;
  }
  Vec gaussian_vector(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }
  Mat matrix(int r, int c, double a = -1.0, double b = 1.0) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = uniform(a, b);
    return m;
  }
  // Well-conditioned SPD with unit determinant.
  Mat spd_unit_det(int n);
  // Random element of SL(n, R), kept away from ill-conditioning.
  Mat sl_matrix(int n);
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace affq
