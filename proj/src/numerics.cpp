#include "affq/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace affq {

// ---------------------------------------------------------------------------
// ChartMap
// ---------------------------------------------------------------------------

ChartMap ChartMap::analytic(int n, int m, JetFn f) {
  ChartMap c;
  c.n_ = n;
  c.m_ = m;
  c.mode_ = JetMode::Analytic;
  c.jet_ = std::move(f);
  c.eval_ = [n, jf = c.jet_](const Vec& p) {
    std::vector<Jet2> args;
    args.reserve(n);
    for (int i = 0; i < n; ++i) args.push_back(Jet2::constant(p(i), n));
    const auto out = jf(args);
    Vec v(static_cast<int>(out.size()));
    for (size_t k = 0; k < out.size(); ++k) v(static_cast<int>(k)) = out[k].value();
    return v;
  };
  return c;
}

ChartMap ChartMap::finite_difference(int n, int m, EvalFn f, double step) {
  ChartMap c;
  c.n_ = n;
  c.m_ = m;
  c.mode_ = JetMode::FiniteDifference;
  c.step_ = step;
  c.eval_ = std::move(f);
  return c;
}

Vec ChartMap::operator()(const Vec& p) const {
  if (p.size() != n_) throw DimMismatch("chart evaluation point");
  Vec v = eval_(p);
  require_finite(v, "chart value");
  return v;
}

namespace {

// 4th-order central stencils. Offsets ±1, ±2 with weights for f' and f''.
constexpr double kD1w[4] = {1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
constexpr double kD1o[4] = {-2.0, -1.0, 1.0, 2.0};

Jet fd_jet(const ChartMap::EvalFn& f, const Vec& p, int n, int m, double h,
           int order) {
  Jet out;
  out.value = f(p);
  require_finite(out.value, "fd chart value");
  out.jac = Mat::Zero(m, n);

  auto at = [&](int i, double s) {
    Vec q = p;
    q(i) += s;
    return f(q);
  };
  auto at2 = [&](int i, double si, int j, double sj) {
    Vec q = p;
    q(i) += si;
    q(j) += sj;
    return f(q);
  };

  for (int i = 0; i < n; ++i) {
    Vec d = Vec::Zero(m);
    for (int k = 0; k < 4; ++k) d += kD1w[k] * at(i, kD1o[k] * h);
    out.jac.col(i) = d / h;
  }
  if (order < 2) return out;

  out.hess.assign(m, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    // diagonal: (−f_{+2} + 16 f_{+1} − 30 f_0 + 16 f_{−1} − f_{−2}) / 12h²
    Vec dii = (-at(i, 2 * h) + 16.0 * at(i, h) - 30.0 * out.value +
               16.0 * at(i, -h) - at(i, -2 * h)) /
              (12.0 * h * h);
    for (int c = 0; c < m; ++c) out.hess[c](i, i) = dii(c);
    for (int j = i + 1; j < n; ++j) {
      // mixed: 4th-order cross stencil (outer product of the f' stencil)
      Vec dij = Vec::Zero(m);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          dij += kD1w[a] * kD1w[b] * at2(i, kD1o[a] * h, j, kD1o[b] * h);
      dij /= h * h;
      for (int c = 0; c < m; ++c) {
        out.hess[c](i, j) = dij(c);
        out.hess[c](j, i) = dij(c);
      }
    }
  }
  return out;
}

}  // namespace

ChartMap ChartMap::scaled(double factor) const {
  return linearly_transformed(
      Mat(factor * Mat::Identity(m_, m_)));
}

ChartMap ChartMap::linearly_transformed(const Mat& L) const {
  if (L.cols() != m_) throw DimMismatch("chart linear transform");
  ChartMap c = *this;
  c.m_ = static_cast<int>(L.rows());
  c.eval_ = [inner = eval_, L](const Vec& p) { return Vec(L * inner(p)); };
  if (jet_oracle_) {
    c.jet_oracle_ = [inner = jet_oracle_, L](const Vec& p, int order) {
      const Jet in = inner(p, order);
      Jet out;
      out.value = L * in.value;
      out.jac = L * in.jac;
      if (order >= 2 && !in.hess.empty()) {
        const int n = static_cast<int>(in.jac.cols());
        out.hess.assign(L.rows(), Mat::Zero(n, n));
        for (int r = 0; r < L.rows(); ++r)
          for (int k = 0; k < L.cols(); ++k)
            if (L(r, k) != 0.0) out.hess[r] += L(r, k) * in.hess[k];
      }
      return out;
    };
  } else if (mode_ == JetMode::Analytic && jet_) {
    c.jet_ = [inner = jet_, L](const std::vector<Jet2>& u) {
      auto in = inner(u);
      const int n = u.empty() ? 0 : u[0].dim();
      std::vector<Jet2> out(L.rows(), Jet2::constant(0.0, n));
      for (int r = 0; r < L.rows(); ++r)
        for (int k = 0; k < L.cols(); ++k)
          if (L(r, k) != 0.0) out[r] = out[r] + L(r, k) * in[k];
      return out;
    };
  }
  return c;
}

ChartMap ChartMap::stacked(const ChartMap& top, const ChartMap& bottom) {
  if (top.domain_dim() != bottom.domain_dim())
    throw DimMismatch("stacked charts domain");
  ChartMap c;
  c.n_ = top.domain_dim();
  c.m_ = top.target_dim() + bottom.target_dim();
  const bool analytic = top.mode() == JetMode::Analytic &&
                        bottom.mode() == JetMode::Analytic;
  c.mode_ = analytic ? JetMode::Analytic : JetMode::FiniteDifference;
  c.step_ = std::max(top.fd_step(), bottom.fd_step());
  c.eval_ = [top, bottom](const Vec& p) {
    Vec out(top.target_dim() + bottom.target_dim());
    out << top(p), bottom(p);
    return out;
  };
  c.jet_oracle_ = [top, bottom](const Vec& p, int order) {
    const Jet jt = top.jet(p, order);
    const Jet jb = bottom.jet(p, order);
    Jet out;
    const int mt = top.target_dim(), mb = bottom.target_dim();
    out.value = Vec(mt + mb);
    out.value << jt.value, jb.value;
    out.jac = Mat(mt + mb, top.domain_dim());
    out.jac << jt.jac, jb.jac;
    if (order >= 2) {
      out.hess = jt.hess;
      out.hess.insert(out.hess.end(), jb.hess.begin(), jb.hess.end());
    }
    return out;
  };
  return c;
}

Jet ChartMap::jet(const Vec& p, int order) const {
  if (p.size() != n_) throw DimMismatch("chart jet point");
  if (jet_oracle_) return jet_oracle_(p, order);
  if (mode_ == JetMode::FiniteDifference || !jet_)
    return fd_jet(eval_, p, n_, m_, step_, order);

  std::vector<Jet2> args;
  args.reserve(n_);
  for (int i = 0; i < n_; ++i) args.push_back(Jet2::variable(p(i), i, n_));
  const auto out = jet_(args);
  if (static_cast<int>(out.size()) != m_) throw DimMismatch("chart jet output");

  Jet j;
  j.value = Vec(m_);
  j.jac = Mat(m_, n_);
  if (order >= 2) j.hess.assign(m_, Mat(n_, n_));
  for (int c = 0; c < m_; ++c) {
    j.value(c) = out[c].value();
    j.jac.row(c) = out[c].grad().transpose();
    if (order >= 2) j.hess[c] = 0.5 * (out[c].hess() + out[c].hess().transpose());
  }
  require_finite(j.value, "chart jet value");
  return j;
}

// ---------------------------------------------------------------------------
// Linear algebra
// ---------------------------------------------------------------------------

double det(const Mat& A) { return A.determinant(); }

namespace {
void check_solvable(const Mat& A, double d) {
  // relative guard: compare |det| against the scale of the matrix
  const double scale = std::pow(std::max(A.norm(), 1e-300), A.rows());
  if (!(std::abs(d) > Tol::singular * scale)) throw SingularMatrix(d);
}
}  // namespace

Vec solve(const Mat& A, const Vec& b) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw DimMismatch("solve dimensions");
  Eigen::PartialPivLU<Mat> lu(A);
  check_solvable(A, lu.determinant());
  return lu.solve(b);
}

Mat solve(const Mat& A, const Mat& B) {
  if (A.rows() != A.cols() || A.rows() != B.rows())
    throw DimMismatch("solve dimensions");
  Eigen::PartialPivLU<Mat> lu(A);
  check_solvable(A, lu.determinant());
  return lu.solve(B);
}

BilinearForm::BilinearForm(Mat m) : m_(std::move(m)) {
  const double asym = (m_ - m_.transpose()).norm();
  if (asym > 1e-12 * std::max(1.0, m_.norm())) throw NotSymmetric(asym);
  m_ = 0.5 * (m_ + m_.transpose());
}

Signature BilinearForm::signature() const { return signature_of(m_); }

Signature signature_of(const Mat& symmetric) {
  const double asym = (symmetric - symmetric.transpose()).norm();
  if (asym > 1e-10 * std::max(1.0, symmetric.norm())) throw NotSymmetric(asym);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (symmetric + symmetric.transpose()),
                                        Eigen::EigenvaluesOnly);
  const Vec ev = es.eigenvalues();
  const double band = Tol::singular * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Signature s;
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > band)
      ++s.positive;
    else if (ev(i) < -band)
      ++s.negative;
    else
      ++s.zero;
  }
  return s;
}

OrthoFrame gram_schmidt(const Mat& V, const Mat& g,
                        const std::vector<int>* pivot_order) {
  const int dim = static_cast<int>(V.rows());
  const int k = static_cast<int>(V.cols());
  if (g.rows() != dim || g.cols() != dim) throw DimMismatch("gram_schmidt pairing");

  std::vector<Vec> basis;
  std::vector<int> signs;
  std::vector<int> pivots;
  std::vector<bool> used(k, false);
  auto pair = [&](const Vec& a, const Vec& b) { return a.dot(g * b); };
  auto reduce = [&](int c) {
    Vec w = V.col(c);
    for (size_t b = 0; b < basis.size(); ++b)
      w -= signs[b] * pair(basis[b], w) * basis[b];
    return w;
  };

  for (int step = 0; step < k; ++step) {
    int best = -1;
    double best_norm = 0.0;
    Vec best_vec;
    if (pivot_order) {
      best = (*pivot_order)[step];
      best_vec = reduce(best);
      best_norm = std::abs(pair(best_vec, best_vec));
    } else {
      // pivot: among remaining candidates, after projecting out the current
      // basis, take the one with the largest |self-pairing|
      for (int c = 0; c < k; ++c) {
        if (used[c]) continue;
        Vec w = reduce(c);
        const double nw = std::abs(pair(w, w));
        if (nw > best_norm) {
          best_norm = nw;
          best = c;
          best_vec = w;
        }
      }
    }
    if (best < 0 || best_norm < Tol::singular * std::max(1.0, V.norm() * V.norm()))
      throw DegenerateMetric(best_norm);
    used[best] = true;
    pivots.push_back(best);
    const double self = pair(best_vec, best_vec);
    basis.push_back(best_vec / std::sqrt(std::abs(self)));
    signs.push_back(self > 0 ? 1 : -1);
  }

  OrthoFrame out;
  out.basis = Mat(dim, k);
  for (int i = 0; i < k; ++i) out.basis.col(i) = basis[i];
  out.signs = std::move(signs);
  out.pivots = std::move(pivots);
  return out;
}

// ---------------------------------------------------------------------------
// Differential operators
// ---------------------------------------------------------------------------

Vec lie_bracket(const ChartMap& X, const ChartMap& Y, const Vec& p) {
  if (X.domain_dim() != Y.domain_dim() || X.target_dim() != Y.target_dim())
    throw DimMismatch("lie_bracket fields");
  const Jet jx = X.jet(p, 1);
  const Jet jy = Y.jet(p, 1);
  return jy.jac * jx.value - jx.jac * jy.value;
}

Mat MetricField::partial(const Vec& p, int k) const {
  Mat d = Mat::Zero(n_, n_);
  for (int s = 0; s < 4; ++s) {
    Vec q = p;
    q(k) += kD1o[s] * step_;
    d += kD1w[s] * g_(q);
  }
  return d / step_;
}

std::vector<Mat> christoffel(const MetricField& g, const Vec& p) {
  const int n = g.dim();
  const Mat gp = g(p);
  Eigen::PartialPivLU<Mat> lu(gp);
  const double d = lu.determinant();
  if (!(std::abs(d) > Tol::singular * std::pow(std::max(gp.norm(), 1e-300), n)))
    throw DegenerateMetric(d);
  const Mat ginv = lu.inverse();

  std::vector<Mat> dg(n);
  for (int k = 0; k < n; ++k) dg[k] = g.partial(p, k);

  // Γ^k_{ij} = ½ g^{kl} (∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})
  std::vector<Mat> gamma(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Vec first(n);
      for (int l = 0; l < n; ++l)
        first(l) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      const Vec up = ginv * first;
      for (int k = 0; k < n; ++k) {
        gamma[k](i, j) = up(k);
        gamma[k](j, i) = up(k);
      }
    }
  return gamma;
}

double riemann_sup_norm(const MetricField& g, const Vec& p) {
  const int n = g.dim();
  const double h = g.fd_step() * 10.0;  // Γ is itself FD; use a wider stencil
  auto gamma_at = [&](const Vec& q) { return christoffel(g, q); };
  const auto G0 = gamma_at(p);

  // ∂_i Γ^l_{jk} by 2nd-order central differences of the Γ field
  std::vector<std::vector<Mat>> dG(n);
  for (int i = 0; i < n; ++i) {
    Vec qp = p, qm = p;
    qp(i) += h;
    qm(i) -= h;
    const auto Gp = gamma_at(qp);
    const auto Gm = gamma_at(qm);
    dG[i].resize(n);
    for (int l = 0; l < n; ++l) dG[i][l] = (Gp[l] - Gm[l]) / (2.0 * h);
  }

  double sup = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double r = dG[i][l](j, k) - dG[j][l](i, k);
          for (int m = 0; m < n; ++m)
            r += G0[l](i, m) * G0[m](j, k) - G0[l](j, m) * G0[m](i, k);
          sup = std::max(sup, std::abs(r));
        }
  return sup;
}

namespace {
// 5-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr double kGLx[5] = {-0.906179845938663993, -0.538469310105683091, 0.0,
                            0.538469310105683091, 0.906179845938663993};
constexpr double kGLw[5] = {0.236926885056189088, 0.478628670499366468,
                            0.568888888888888889, 0.478628670499366468,
                            0.236926885056189088};

double segment_integral(const std::function<Vec(const Vec&)>& alpha,
                        const Vec& a, const Vec& b, int pieces) {
  const Vec d = b - a;
  double total = 0.0;
  for (int s = 0; s < pieces; ++s) {
    const double t0 = static_cast<double>(s) / pieces;
    const double t1 = static_cast<double>(s + 1) / pieces;
    for (int q = 0; q < 5; ++q) {
      const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * kGLx[q];
      const Vec p = a + t * d;
      total += kGLw[q] * 0.5 * (t1 - t0) * alpha(p).dot(d);
    }
  }
  return total;
}
}  // namespace

double integrate_1form(const std::function<Vec(const Vec&)>& alpha,
                       const std::vector<Vec>& polyline,
                       double* refinement_gap) {
  if (polyline.size() < 2) throw OutOfDomain("path needs at least 2 points");
  double coarse = 0.0, fine = 0.0;
  for (size_t s = 0; s + 1 < polyline.size(); ++s) {
    coarse += segment_integral(alpha, polyline[s], polyline[s + 1], 1);
    fine += segment_integral(alpha, polyline[s], polyline[s + 1], 2);
  }
  if (refinement_gap) *refinement_gap = std::abs(fine - coarse);
  return fine;
}

// ---------------------------------------------------------------------------
// Rng extras
// ---------------------------------------------------------------------------

Mat Rng::spd_unit_det(int n) {
  Mat A = matrix(n, n, -1.0, 1.0);
  Mat S = A * A.transpose() + 0.5 * static_cast<double>(n) * Mat::Identity(n, n);
  const double d = S.determinant();
  return S / std::pow(d, 1.0 / n);
}

Mat Rng::sl_matrix(int n) {
  Mat A = matrix(n, n, -1.0, 1.0) + 2.0 * Mat::Identity(n, n);
  double d = A.determinant();
  if (std::abs(d) < 1e-3) {
    A += Mat::Identity(n, n);
    d = A.determinant();
  }
  if (d < 0) {
    A.col(0) *= -1.0;
    d = -d;
  }
  return A / std::pow(d, 1.0 / n);
}

}  // namespace affq
