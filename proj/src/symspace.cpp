#include "affq/symspace.hpp"

#include "affq/split.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace affq {

namespace {

void require_spd(const Mat& Q, const char* who) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (Q + Q.transpose()),
                                        Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) throw NotPositive(who);
}

}  // namespace

Mat unvec(const Vec& v, int rows) {
  Mat m(rows, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rows; ++j) m(i, j) = v(i * rows + j);
  return Mat(0.5 * (m + m.transpose()));
}

Vec vec_of(const Mat& m) {
  const int r = static_cast<int>(m.rows());
  Vec v(r * r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) v(i * r + j) = m(i, j);
  return v;
}

SymPoint SymPoint::checked(Mat Q, double det_tol) {
  Q = 0.5 * (Q + Q.transpose());
  require_spd(Q, "SymPoint");
  const double d = Q.determinant();
  if (std::abs(d - 1.0) > det_tol)
    throw Error("SymPoint determinant " + std::to_string(d));
  return SymPoint{std::move(Q)};
}

SymPoint pi_n1(const XPoint& x) {
  const int n = static_cast<int>(x.basis.cols());
  if (std::abs(x.covector.dot(x.v)) < 1e-12)
    throw Error("XPoint: v lies in P");
  require_spd(x.q, "XPoint.q");
  Mat T(n + 1, n + 1);
  T.leftCols(n) = x.basis;
  T.col(n) = x.v;
  const double detT = T.determinant();
  if (std::abs(detT) < 1e-12) throw SingularM(detT);
  // λ solved directly from det Q = 1
  const double lambda = detT * detT / x.q.determinant();
  Mat blocks = Mat::Zero(n + 1, n + 1);
  blocks.topLeftCorner(n, n) = x.q;
  blocks(n, n) = lambda;
  Mat Tinv = T.inverse();
  Mat Q = Tinv.transpose() * blocks * Tinv;
  return SymPoint::checked(std::move(Q));
}

// --- Blaschke lift -----------------------------------------------------------

SphereNormalization normalize_hyperbolic_sphere(const EquiaffineImmersion& imm,
                                                const GridSpec& samples,
                                                double constancy_tol) {
  const int n = imm.n();
  double rmin = 0.0, rmax = 0.0;
  bool first = true;
  for (const Vec& p : grid_points(samples)) {
    if (centroaffine_residual(imm, p) > 1e-8)
      throw NotHyperbolicSphere("transversal not the position vector");
    const AffineData ad = decompose_structure(imm, p);
    const Signature sig = signature_of(ad.h);
    if (sig.positive != n)
      throw NotHyperbolicSphere("Blaschke metric not positive definite");
    const double r = std::sqrt(std::abs(ad.h.determinant())) / std::abs(ad.theta);
    rmin = first ? r : std::min(rmin, r);
    rmax = first ? r : std::max(rmax, r);
    first = false;
  }
  if ((rmax - rmin) / rmax > constancy_tol)
    throw NotHyperbolicSphere("ω_h/|θ| varies; input is not an affine sphere");

  SphereNormalization out;
  // θ(γf) = γ^{n+1} θ(f); require θ = ω_h (h is invariant under the rescale)
  out.gamma = std::pow(0.5 * (rmin + rmax), 1.0 / (n + 1));
  out.immersion = imm;
  out.immersion.f = imm.f.scaled(out.gamma);
  out.immersion.xi = out.immersion.f;
  if (imm.nu) out.immersion.nu = imm.nu->scaled(1.0 / out.gamma);
  return out;
}

XPoint tilde_lift(const EquiaffineImmersion& normalized, const Vec& p) {
  const Jet jf = normalized.f.jet(p, 1);
  const AffineData ad = decompose_structure(normalized, p);
  XPoint x;
  x.v = jf.value;
  x.covector = conormal(normalized, p);
  x.basis = jf.jac;
  x.q = ad.h;
  return x;
}

SymPoint blaschke_lift(const EquiaffineImmersion& normalized, const Vec& p) {
  return pi_n1(tilde_lift(normalized, p));
}

ChartMap blaschke_lift_chart(const EquiaffineImmersion& normalized) {
  const int n = normalized.n();
  const int d = n + 1;
  const double step =
      normalized.f.mode() == JetMode::Analytic
          ? Tol::fd_step
          : std::max(4.0 * Tol::fd_step, normalized.f.fd_step());
  return ChartMap::finite_difference(
      n, d * d,
      [normalized](const Vec& p) {
        return vec_of(blaschke_lift(normalized, p).Q);
      },
      step);
}

// --- Maurer-Cartan blocks ------------------------------------------------------

namespace {

// unimodular adapted frame [f_* ẽ_i | f] with h-orthonormal ẽ_i;
// the pivot order is supplied so the frame field stays smooth
Mat adapted_frame(const EquiaffineImmersion& imm, const Vec& p,
                  const std::vector<int>* pivots) {
  const int n = imm.n();
  const Jet jf = imm.f.jet(p, 1);
  const AffineData ad = decompose_structure(imm, p);
  const OrthoFrame fr = gram_schmidt(Mat::Identity(n, n), ad.h, pivots);
  Mat g(n + 1, n + 1);
  g.leftCols(n) = jf.jac * fr.basis;
  g.col(n) = jf.value;
  return g;
}

}  // namespace

MCBlocks maurer_cartan_blocks(const EquiaffineImmersion& normalized,
                              const Vec& p, const Vec& X) {
  const int n = normalized.n();
  const AffineData ad0 = decompose_structure(normalized, p);
  const OrthoFrame fr0 = gram_schmidt(Mat::Identity(n, n), ad0.h);
  const auto pivots = fr0.pivots;

  const Mat g0 = adapted_frame(normalized, p, &pivots);
  const double detg = g0.determinant();
  if (std::abs(std::abs(detg) - 1.0) > 1e-6) throw FrameNotUnimodular(detg);

  const double h = 10.0 * Tol::fd_step;
  const Vec Xn = X / X.norm();
  const Mat dg =
      (-adapted_frame(normalized, Vec(p + 2 * h * Xn), &pivots) +
       8.0 * adapted_frame(normalized, Vec(p + h * Xn), &pivots) -
       8.0 * adapted_frame(normalized, Vec(p - h * Xn), &pivots) +
       adapted_frame(normalized, Vec(p - 2 * h * Xn), &pivots)) /
      (12.0 * h);
  const Mat omega = solve(g0, dg);

  MCBlocks out;
  const Mat D = omega.topLeftCorner(n, n);
  out.gauge = 0.5 * (D - D.transpose());
  out.sym_diag = 0.5 * (D + D.transpose());
  out.upper = omega.topRightCorner(n, 1);
  out.lower = omega.bottomLeftCorner(1, n).transpose();
  out.frame_det = detg;
  return out;
}

// --- tension fields ------------------------------------------------------------

Mat spd_tension(const ChartMap& psi, const MetricField& domain_metric,
                const Vec& p) {
  const int n = psi.domain_dim();
  const int d = static_cast<int>(std::lround(std::sqrt(psi.target_dim())));
  const Jet j = psi.jet(p, 2);
  const Mat Q = unvec(j.value, d);
  require_spd(Q, "spd_tension base point");
  Eigen::LLT<Mat> llt(Q);

  const Mat gp = domain_metric(p);
  const Mat ginv = gp.inverse();
  const auto gamma = christoffel(domain_metric, p);

  std::vector<Mat> dQ(n);
  for (int i = 0; i < n; ++i) dQ[i] = unvec(j.jac.col(i), d);

  Mat tau = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Vec hic(d * d);
      for (int c = 0; c < d * d; ++c) hic(c) = j.hess[c](i, k);
      Mat cov = unvec(hic, d);
      for (int m = 0; m < n; ++m) cov -= gamma[m](i, k) * dQ[m];
      const Mat corr = dQ[i] * llt.solve(dQ[k]);
      cov -= 0.5 * (corr + corr.transpose());
      tau += ginv(i, k) * cov;
    }
  return tau;
}

double spd_norm(const Mat& Q, const Mat& A) {
  Eigen::LLT<Mat> llt(Q);
  const Mat QA = llt.solve(A);
  return std::sqrt(std::abs((QA * QA).trace()));
}

Mat sym_exp(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()));
  return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

// --- incidence-space pipeline ----------------------------------------------------

namespace {

// (∇^h_a C)(b, ·, ·) via finite differences of the Pick tensor field
std::vector<std::vector<Mat>> nabla_h_C(const EquiaffineImmersion& imm,
                                        const Vec& p) {
  const int n = imm.n();
  const auto lc = levi_civita_of_h(imm, p);
  const PickData pd = pick_tensor(imm, p);
  const double h = 10.0 * Tol::fd_step;

  std::vector<std::vector<Mat>> dC(n);
  for (int a = 0; a < n; ++a) {
    Vec qp = p, qm = p;
    qp(a) += h;
    qm(a) -= h;
    const PickData pp = pick_tensor(imm, qp);
    const PickData pm = pick_tensor(imm, qm);
    dC[a].resize(n);
    for (int b = 0; b < n; ++b) dC[a][b] = (pp.C[b] - pm.C[b]) / (2.0 * h);
  }

  // (∇_a C)(b, c, e) = ∂_a C_{bce} − Γ^m_{ab} C_{mce} − Γ^m_{ac} C_{bme}
  //                    − Γ^m_{ae} C_{bcm}
  std::vector<std::vector<Mat>> out(n, std::vector<Mat>(n, Mat::Zero(n, n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          double v = dC[a][b](c, e);
          for (int m = 0; m < n; ++m)
            v -= lc[m](a, b) * pd.C[m](c, e) + lc[m](a, c) * pd.C[b](m, e) +
                 lc[m](a, e) * pd.C[b](c, m);
          out[a][b](c, e) = v;
        }
  return out;
}

}  // namespace

Mat x_level_tension(const EquiaffineImmersion& normalized, const Vec& p) {
  const int n = normalized.n();
  const AffineData ad = decompose_structure(normalized, p);
  const Mat hinv = ad.h.inverse();
  const auto dC = nabla_h_C(normalized, p);

  // s(Z, W) = Σ_{ab} h^{ab} (∇^h_a C)(b, Z, W)
  Mat s = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s += hinv(a, b) * dC[a][b];
  s = 0.5 * (s + s.transpose());

  // push through the fiber projection: Q̇ = T^{-T} diag(s, λ̇) T^{-1} with
  // tr(Q⁻¹ Q̇) = 0 fixing λ̇
  const Jet jf = normalized.f.jet(p, 1);
  Mat T(n + 1, n + 1);
  T.leftCols(n) = jf.jac;
  T.col(n) = jf.value;
  const Mat Tinv = T.inverse();
  const SymPoint Q = blaschke_lift(normalized, p);
  const Mat Qinv = Q.Q.inverse();

  Mat diag_s = Mat::Zero(n + 1, n + 1);
  diag_s.topLeftCorner(n, n) = s;
  const Mat A = Tinv.transpose() * diag_s * Tinv;
  Mat Enn = Mat::Zero(n + 1, n + 1);
  Enn(n, n) = 1.0;
  const Mat B = Tinv.transpose() * Enn * Tinv;
  const double lam_dot = -(Qinv * A).trace() / (Qinv * B).trace();
  return A + lam_dot * B;
}

double submersion_isometry_residual(const EquiaffineImmersion& normalized,
                                    const Vec& p) {
  const int n = normalized.n();
  const ChartMap chart = blaschke_lift_chart(normalized);
  const Jet j = chart.jet(p, 1);
  const Mat Q = unvec(j.value, n + 1);
  Eigen::LLT<Mat> llt(Q);

  double r = 0.0;
  std::vector<MCBlocks> blocks;
  for (int i = 0; i < n; ++i) {
    Vec ei = Vec::Zero(n);
    ei(i) = 1.0;
    blocks.push_back(maurer_cartan_blocks(normalized, p, ei));
  }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Mat Qi = unvec(j.jac.col(i), n + 1);
      const Mat Qk = unvec(j.jac.col(k), n + 1);
      const double pulled = (llt.solve(Qi) * llt.solve(Qk)).trace();
      // sym part of ω_X, including the off-diagonal pair and the H₀ direction
      auto sym_of = [n](const MCBlocks& b) {
        Mat S = Mat::Zero(n + 1, n + 1);
        S.topLeftCorner(n, n) = b.sym_diag;
        S.topRightCorner(n, 1) = 0.5 * (b.upper + b.lower);
        S.bottomLeftCorner(1, n) = (0.5 * (b.upper + b.lower)).transpose();
        S(n, n) = -b.sym_diag.trace();
        return S;
      };
      const double block_metric =
          4.0 * (sym_of(blocks[i]) * sym_of(blocks[k])).trace();
      r = std::max(r, std::abs(pulled - block_metric));
    }
  return r;
}

HarmonicityReport harmonicity_report(const EquiaffineImmersion& imm,
                                     const GridSpec& grid, double harm_tol,
                                     bool expect_sphere) {
  EquiaffineImmersion normalized = imm;
  if (expect_sphere)
    normalized = normalize_hyperbolic_sphere(imm, grid).immersion;

  HarmonicityReport rep;
  rep.tol = harm_tol;
  const ChartMap chart = blaschke_lift_chart(normalized);
  const MetricField hf = affine_metric_field(normalized);
  const int n = normalized.n();

  for (const Vec& p : grid_points(grid)) {
    const Mat tau = spd_tension(chart, hf, p);
    const Mat Q = blaschke_lift(normalized, p).Q;
    rep.sup_tension = std::max(rep.sup_tension, spd_norm(Q, tau));

    if (expect_sphere) {
      const Mat tau2 = x_level_tension(normalized, p);
      rep.sup_pipeline_gap =
          std::max(rep.sup_pipeline_gap, (tau - tau2).cwiseAbs().maxCoeff());
      for (int i = 0; i < n; ++i) {
        Vec ei = Vec::Zero(n);
        ei(i) = 1.0;
        const MCBlocks mc = maurer_cartan_blocks(normalized, p, ei);
        rep.sup_horizontality =
            std::max(rep.sup_horizontality, mc.horizontality());
        rep.sup_diag_trace =
            std::max(rep.sup_diag_trace, std::abs(mc.diag_trace()));
      }
    }
  }
  rep.harmonic = rep.sup_tension <= harm_tol;
  return rep;
}

// --- ι and Φ -------------------------------------------------------------------

Mat iota_embed(const Mat& M) {
  const int d = static_cast<int>(M.rows());
  const double det = M.determinant();
  if (std::abs(det) < 1e-12) throw SingularM(det);
  Mat X = Mat::Zero(2 * d, 2 * d);
  X.topLeftCorner(d, d) = M;
  X.bottomRightCorner(d, d) = M.inverse().transpose();
  return X;
}

YPoint phi_embed(const Mat& Q) {
  require_spd(Q, "phi_embed");
  const int d = static_cast<int>(Q.rows());
  Mat W(2 * d, d);
  W.topRows(d) = Mat::Identity(d, d);
  W.bottomRows(d) = Q;
  return YPoint{std::move(W)};
}

Mat y_projector(const YPoint& y) {
  const int D = static_cast<int>(y.W.rows());
  const Mat B = b_matrix(D / 2);
  const Mat gram = y.W.transpose() * B * y.W;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gram + gram.transpose()),
                                        Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw NotPositive("YPoint gram matrix");
  return y.W * gram.inverse() * y.W.transpose() * B;
}

double equivariance_residual(const Mat& M, const Mat& Q) {
  const Mat X = iota_embed(M);
  const Mat Minv = M.inverse();
  const Mat star = Minv.transpose() * Q * Minv;  // M ∗ Q
  const Mat lhs = y_projector(phi_embed(star));
  const Mat rhs = X * y_projector(phi_embed(Q)) * X.inverse();
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

ComposedReport composed_harmonicity(const EquiaffineImmersion& imm,
                                    const GridSpec& grid, double tol,
                                    bool expect_sphere) {
  EquiaffineImmersion normalized = imm;
  if (expect_sphere)
    normalized = normalize_hyperbolic_sphere(imm, grid).immersion;

  const int n = normalized.n();
  const int D = 2 * (n + 1);
  const double step =
      normalized.f.mode() == JetMode::Analytic
          ? Tol::fd_step
          : std::max(4.0 * Tol::fd_step, normalized.f.fd_step());
  ChartMap proj_chart = ChartMap::finite_difference(
      n, D * D,
      [normalized](const Vec& p) {
        return vec_of(y_projector(phi_embed(blaschke_lift(normalized, p).Q)));
      },
      step);
  const MetricField hf = affine_metric_field(normalized);

  ComposedReport rep;
  rep.tol = tol;
  for (const Vec& p : grid_points(grid)) {
    const Jet j = proj_chart.jet(p, 2);
    Mat Pi(D, D);
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) Pi(a, b) = j.value(a * D + b);

    const Mat gp = hf(p);
    const Mat ginv = gp.inverse();
    const auto gamma = christoffel(hf, p);

    Mat tau = Mat::Zero(D, D);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        Mat cov(D, D);
        for (int a = 0; a < D; ++a)
          for (int b = 0; b < D; ++b) cov(a, b) = j.hess[a * D + b](i, k);
        for (int m = 0; m < n; ++m) {
          Mat dm(D, D);
          for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b) dm(a, b) = j.jac(a * D + b, m);
          cov -= gamma[m](i, k) * dm;
        }
        tau += ginv(i, k) * cov;
      }
    // tangential projection in the projector model
    const Mat I = Mat::Identity(D, D);
    const Mat tangential = Pi * tau * (I - Pi) + (I - Pi) * tau * Pi;
    rep.sup_tension =
        std::max(rep.sup_tension, std::sqrt(std::abs((tangential * tangential)
                                                         .trace())));
  }
  rep.harmonic = rep.sup_tension <= tol;
  return rep;
}

}  // namespace affq
