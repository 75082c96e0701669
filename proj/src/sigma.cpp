#include "affq/sigma.hpp"

#include <Eigen/Dense>

namespace affq {

namespace {

Mat lambda_matrix(int d, double t) {
  Mat L = Mat::Zero(2 * d, 2 * d);
  L.topLeftCorner(d, d) = std::exp(t) * Mat::Identity(d, d);
  L.bottomRightCorner(d, d) = std::exp(-t) * Mat::Identity(d, d);
  return L;
}

Mat f_matrix(int d) {
  Mat F = Mat::Identity(2 * d, 2 * d);
  F.topLeftCorner(d, d) = -Mat::Identity(d, d);
  return F;
}

Mat dual_metric_sign(const SigmaData& sd, const AffineData& ad) {
  const double sign = sd.kind == SigmaKind::Plus ? 1.0 : -1.0;
  const Mat hs = ad.h * ad.S;
  return sign * 0.5 * (hs + hs.transpose());
}

}  // namespace

ChartMap flowed_chart(const ChartMap& sigma, double t) {
  return sigma.linearly_transformed(lambda_matrix(sigma.target_dim() / 2, t));
}

SigmaData build_sigma(const EquiaffineImmersion& imm, SigmaKind kind,
                      const GridSpec& samples, double rank_floor) {
  SigmaData sd;
  sd.imm = imm;
  sd.kind = kind;
  sd.n = imm.n();

  const Vec center = 0.5 * (samples.lo + samples.hi);
  const AffineData ad = decompose_structure(imm, center);
  const double detS = ad.S.determinant();
  if (std::abs(detS) < 1e-10) throw DegenerateShapeOperator(detS);

  const ChartMap first =
      kind == SigmaKind::Plus ? imm.xi : imm.xi.scaled(-1.0);
  sd.sigma = ChartMap::stacked(first, conormal_chart(imm));

  for (const Vec& p : grid_points(samples)) {
    const Vec v = sd.sigma(p);
    const SplitVector s = SplitVector::from_concat(v);
    const double member = std::abs(ghat(s, s) - static_cast<int>(kind));
    if (member > 1e-10) throw NotOnQuadric(member);

    const Jet j = sd.sigma.jet(p, 1);
    Eigen::JacobiSVD<Mat> svd(j.jac);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin < rank_floor * smax) throw RankDeficient(smin);
  }
  return sd;
}

InducedMetric induced_metric(const SigmaData& sd, const Vec& p) {
  const Jet j = sd.sigma.jet(p, 1);
  const Mat G = ghat_matrix(sd.n + 1);
  InducedMetric out;
  out.g = j.jac.transpose() * G * j.jac;
  out.g = 0.5 * (out.g + out.g.transpose());
  out.signature = signature_of(out.g);
  const AffineData ad = decompose_structure(sd.imm, p);
  out.match_dual_metric =
      (out.g - dual_metric_sign(sd, ad)).cwiseAbs().maxCoeff();
  return out;
}

double horizontality_residual_chart(const ChartMap& sigma, QuadricKind,
                                    const Vec& p) {
  // |ĝ(σ_* e_i, P̂σ)| is quadric-sign free; the kind parameter is kept for
  // call-site symmetry with the Reeb-normalized quantities
  const Jet j = sigma.jet(p, 1);
  const SplitVector s = SplitVector::from_concat(j.value);
  const SplitVector ps = phat(s);
  double r = 0.0;
  for (int i = 0; i < sigma.domain_dim(); ++i)
    r = std::max(
        r, std::abs(ghat(SplitVector::from_concat(j.jac.col(i)), ps)));
  return r;
}

double anti_invariance_residual_chart(const ChartMap& sigma, const Vec& p) {
  const Jet j = sigma.jet(p, 1);
  double r = 0.0;
  for (int i = 0; i < sigma.domain_dim(); ++i)
    for (int k = i + 1; k < sigma.domain_dim(); ++k)
      r = std::max(r, std::abs(omegahat(SplitVector::from_concat(j.jac.col(i)),
                                        SplitVector::from_concat(j.jac.col(k)))));
  return r;
}

double radial_residual_chart(const ChartMap& sigma, const Vec& p) {
  const Jet j = sigma.jet(p, 1);
  const SplitVector s = SplitVector::from_concat(j.value);
  double r = 0.0;
  for (int i = 0; i < sigma.domain_dim(); ++i)
    r = std::max(r,
                 std::abs(ghat(SplitVector::from_concat(j.jac.col(i)), s)));
  return r;
}

Mat base_induced_metric(const ChartMap& sigma, const Vec& p) {
  const int n = sigma.domain_dim();
  const int d = sigma.target_dim() / 2;
  const Jet j = sigma.jet(p, 1);
  const SplitVector spos = SplitVector::from_concat(j.value);
  const double s = ghat(spos, spos);
  const Vec zeta = (s > 0 ? 1.0 : -1.0) * phat(spos).concat();
  const Mat G = ghat_matrix(d);
  std::vector<Vec> hor(n);
  for (int i = 0; i < n; ++i) {
    const Vec X = j.jac.col(i);
    hor[i] = X - omegahat(spos, SplitVector::from_concat(X)) * zeta;
  }
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) g(i, k) = hor[i].dot(G * hor[k]);
  return Mat(0.5 * (g + g.transpose()));
}

double horizontality_residual(const SigmaData& sd, const Vec& p) {
  return horizontality_residual_chart(sd.sigma, sd.quadric(), p);
}
double anti_invariance_residual(const SigmaData& sd, const Vec& p) {
  return anti_invariance_residual_chart(sd.sigma, p);
}
double radial_residual(const SigmaData& sd, const Vec& p) {
  return radial_residual_chart(sd.sigma, p);
}
double membership_residual(const SigmaData& sd, const Vec& p) {
  const SplitVector s = SplitVector::from_concat(sd.sigma(p));
  return std::abs(ghat(s, s) - static_cast<int>(sd.kind));
}

namespace {

struct QuadricImmersion {
  Mat tangent;       // (2D) x k
  Mat normal;        // (2D) x codim
  Mat g_T;           // k x k
  Eigen::PartialPivLU<Mat> full_lu;
  Mat full;          // [tangent | normal | position]
  Vec position;
};

QuadricImmersion quadric_frames(const Jet& j, int dim_v) {
  QuadricImmersion q;
  const int D = 2 * dim_v;
  const int k = static_cast<int>(j.jac.cols());
  q.tangent = j.jac;
  q.position = j.value;
  const Mat G = ghat_matrix(dim_v);

  q.g_T = j.jac.transpose() * G * j.jac;
  q.g_T = 0.5 * (q.g_T + q.g_T.transpose());
  if (std::abs(q.g_T.determinant()) <
      Tol::singular * std::pow(std::max(q.g_T.norm(), 1e-300), k))
    throw DegenerateInducedMetric(q.g_T.determinant());

  Mat rows(k + 1, D);
  rows.topRows(k) = (G * j.jac).transpose();
  rows.row(k) = (G * j.value).transpose();
  Eigen::FullPivLU<Mat> lu(rows);
  Mat ker = lu.kernel();
  if (ker.cols() != D - k - 1) throw DegenerateFrame("normal space rank");
  Eigen::HouseholderQR<Mat> qr(ker);
  q.normal = qr.householderQ() * Mat::Identity(D, D - k - 1);

  q.full = Mat(D, D);
  q.full.leftCols(k) = q.tangent;
  q.full.middleCols(k, D - k - 1) = q.normal;
  q.full.col(D - 1) = q.position;
  q.full_lu = Eigen::PartialPivLU<Mat>(q.full);
  return q;
}

}  // namespace

SecondFundamental second_fundamental_form(const SigmaData& sd, const Vec& p) {
  const int n = sd.n;
  const int D = 2 * (n + 1);
  const Jet j = sd.sigma.jet(p, 2);
  QuadricImmersion q = quadric_frames(j, n + 1);

  SecondFundamental out;
  out.n = n;
  out.normal_basis = q.normal;
  out.II.assign(n * n, Vec::Zero(D));

  const Mat ginv = q.g_T.inverse();
  const SplitVector spos = SplitVector::from_concat(j.value);
  const SplitVector pps = phat(spos);

  Vec H = Vec::Zero(D);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Vec hess(D);
      for (int c = 0; c < D; ++c) hess(c) = j.hess[c](a, b);
      const Vec coeff = q.full_lu.solve(hess);
      out.decomposition_residual =
          std::max(out.decomposition_residual,
                   (q.full * coeff - hess).norm() / std::max(1.0, hess.norm()));
      const Vec II_ab = q.normal * coeff.segment(n, D - n - 1);
      out.II[a * n + b] = II_ab;
      out.phat_sigma_component =
          std::max(out.phat_sigma_component,
                   std::abs(ghat(SplitVector::from_concat(II_ab), pps)));
      H += ginv(a, b) * II_ab;
    }
  out.mean_curvature = H / n;
  return out;
}

Vec mean_curvature_direct(const SigmaData& sd, const Vec& p) {
  return second_fundamental_form(sd, p).mean_curvature;
}

Vec mean_curvature_quadric_chart(const ChartMap& chart, QuadricKind,
                                 const Vec& p) {
  const int k = chart.domain_dim();
  const int D = chart.target_dim();
  const Jet j = chart.jet(p, 2);
  QuadricImmersion q = quadric_frames(j, D / 2);
  const Mat ginv = q.g_T.inverse();
  Vec H = Vec::Zero(D);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      Vec hess(D);
      for (int c = 0; c < D; ++c) hess(c) = j.hess[c](a, b);
      const Vec coeff = q.full_lu.solve(hess);
      H += ginv(a, b) * (q.normal * coeff.segment(k, D - k - 1));
    }
  return H / k;
}

Vec mean_curvature_pick(const SigmaData& sd, const Vec& p) {
  const int n = sd.n;
  const int d = n + 1;

  // σ⁺-side data; the σ⁻ value is F-conjugated at the end
  const ChartMap sigma_plus =
      sd.kind == SigmaKind::Plus ? sd.sigma
                                 : sd.sigma.linearly_transformed(f_matrix(d));
  const DualCore dc = dual_core(sd.imm, p);
  const std::vector<Mat> Cbar = dual_pick_tensor(sd.imm, p);

  // g_T = h̄ orthonormal frame in chart coordinates
  const OrthoFrame fr = gram_schmidt(Mat::Identity(n, n), dc.h_bar);
  Eigen::PartialPivLU<Mat> hbar_lu(dc.h_bar);
  const Mat hbar_inv = hbar_lu.inverse();

  const Jet jp = sigma_plus.jet(p, 1);
  Vec H = Vec::Zero(2 * d);
  for (int k = 0; k < n; ++k) {
    const Vec E = fr.basis.col(k);
    // tr_{−h̄}(C̄)(E) = −tr(h̄^{-1} C̄(E,·,·))
    Mat CE = Mat::Zero(n, n);
    for (int a = 0; a < n; ++a) CE += E(a) * Cbar[a];
    const double tr = -(hbar_inv * CE).trace();
    const Vec push = jp.jac * E;  // σ⁺_*(e_k), ambient
    const Vec ppush = phat(SplitVector::from_concat(push)).concat();
    H += -1.0 / (2.0 * n) * fr.signs[k] * tr * ppush;
  }
  if (sd.kind == SigmaKind::Minus) {
    // H_{F∘σ} = −F(H_σ) since traces are taken w.r.t. the flipped metric
    H = -(f_matrix(d) * H).eval();
  }
  return H;
}

double pick_identity_residual(const SigmaData& sd, const Vec& p) {
  const int n = sd.n;
  const EquiaffineImmersion& imm = sd.imm;
  const DualCore dc0 = dual_core(imm, p);
  const AffineData ad0 = decompose_structure(imm, p);
  const std::vector<Mat> Cbar = dual_pick_tensor(imm, p);

  // smooth h̄-orthonormal frame field: fix the pivot order at p
  const OrthoFrame fr0 = gram_schmidt(Mat::Identity(n, n), dc0.h_bar);
  const auto pivots = fr0.pivots;
  auto frame_at = [&](const Vec& q) {
    return gram_schmidt(Mat::Identity(n, n), dual_core(imm, q).h_bar, &pivots)
        .basis;
  };

  const double h = 10.0 * Tol::fd_step;
  // ∂_a of the frame and of the field q -> S(q) E_i(q)
  std::vector<Mat> dE(n);
  std::vector<Mat> dSE(n);
  for (int a = 0; a < n; ++a) {
    Vec qp = p, qm = p;
    qp(a) += h;
    qm(a) -= h;
    const Mat Ep = frame_at(qp), Em = frame_at(qm);
    dE[a] = (Ep - Em) / (2.0 * h);
    const Mat SEp = decompose_structure(imm, qp).S * Ep;
    const Mat SEm = decompose_structure(imm, qm).S * Em;
    dSE[a] = (SEp - SEm) / (2.0 * h);
  }

  const Mat E = fr0.basis;
  const Mat SE = ad0.S * E;
  double r = 0.0;
  for (int i = 0; i < n; ++i) {
    // ∇̄_{e_i} e_i and ∇_{e_i}(S e_i) in chart coordinates
    Vec nabla_bar = Vec::Zero(n);
    Vec nabla_SE = Vec::Zero(n);
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a) {
        double t1 = dE[a](k, i);
        double t2 = dSE[a](k, i);
        for (int b = 0; b < n; ++b) {
          t1 += dc0.gamma_bar[k](a, b) * E(b, i);
          t2 += ad0.gamma[k](a, b) * SE(b, i);
        }
        nabla_bar(k) += E(a, i) * t1;
        nabla_SE(k) += E(a, i) * t2;
      }
    for (int k = 0; k < n; ++k) {
      const Vec Ek = E.col(k);
      const double lhs = nabla_bar.dot(ad0.h * (ad0.S * Ek)) -
                         nabla_SE.dot(ad0.h * Ek);
      double cbar = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            cbar += E(a, i) * Ek(b) * E(c, i) * Cbar[a](b, c);
      r = std::max(r, std::abs(lhs + cbar));
    }
  }
  return r;
}

MaximalityReport maximality_verdict(const SigmaData& sd, const GridSpec& grid,
                                    double tol) {
  MaximalityReport rep;
  for (const Vec& p : grid_points(grid)) {
    const Vec hd = mean_curvature_direct(sd, p);
    const Vec hp = mean_curvature_pick(sd, p);
    rep.sup_mean_curvature = std::max(rep.sup_mean_curvature, hd.norm());
    rep.sup_cross_check =
        std::max(rep.sup_cross_check, (hd - hp).cwiseAbs().maxCoeff());

    const DualCore dc = dual_core(sd.imm, p);
    const std::vector<Mat> Cbar = dual_pick_tensor(sd.imm, p);
    const Mat hbar_inv = dc.h_bar.inverse();
    for (int k = 0; k < sd.n; ++k)
      rep.dual_sup_trC =
          std::max(rep.dual_sup_trC, std::abs((hbar_inv * Cbar[k]).trace()));
  }
  rep.maximal = rep.sup_mean_curvature <= tol;
  rep.dual_is_proper_sphere = rep.dual_sup_trC <= tol;
  return rep;
}

TauPoint tau_point_of(const SigmaData& sd, const Vec& p) {
  const SplitVector s = SplitVector::from_concat(sd.sigma(p));
  return tau_project(QuadricPoint{s, sd.quadric()});
}

TauProjectionReport project_to_tau(const SigmaData& sd, const GridSpec& grid,
                                   const std::vector<double>& flow_times) {
  TauProjectionReport rep;
  const int n = sd.n;
  const int d = n + 1;
  const Mat G = ghat_matrix(d);
  const ChartMap nu = conormal_chart(sd.imm);

  for (const Vec& p : grid_points(grid)) {
    rep.omega_pullback =
        std::max(rep.omega_pullback, anti_invariance_residual(sd, p));

    // horizontal part of the induced metric vs plain induced metric
    const Jet j = sd.sigma.jet(p, 1);
    const SplitVector spos = SplitVector::from_concat(j.value);
    const double s = ghat(spos, spos);
    const Vec zeta = (s > 0 ? 1.0 : -1.0) * phat(spos).concat();
    Mat gbase(n, n), gt(n, n);
    std::vector<Vec> hor(n);
    for (int i = 0; i < n; ++i) {
      const Vec X = j.jac.col(i);
      const double eta = omegahat(spos, SplitVector::from_concat(X));
      hor[i] = X - eta * zeta;
    }
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        gbase(i, k) = hor[i].dot(G * hor[k]);
        gt(i, k) = j.jac.col(i).dot(G * j.jac.col(k));
      }
    rep.base_metric_match =
        std::max(rep.base_metric_match, (gbase - gt).cwiseAbs().maxCoeff());

    const TauPoint base_tau = tau_point_of(sd, p);
    const Vec H0 = mean_curvature_direct(sd, p);
    const Mat hbar = dual_core(sd.imm, p).h_bar;
    const Jet jnu = nu.jet(p, 1);
    const Jet jxi = sd.imm.xi.jet(p, 1);

    for (double t : flow_times) {
      const ChartMap ft = flowed_chart(sd.sigma, t);
      const SplitVector st = SplitVector::from_concat(ft(p));
      rep.tau_collapse = std::max(
          rep.tau_collapse,
          tau_distance(base_tau, tau_project(QuadricPoint{st, sd.quadric()})));

      // slot-pinned pairing metric: ½[ν_*(e_i)(e^t D_{e_j} ξ) + (i<->j)]
      Mat mt(n, n);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          mt(i, k) = 0.5 * std::exp(t) *
                     (jnu.jac.col(i).dot(jxi.jac.col(k)) +
                      jnu.jac.col(k).dot(jxi.jac.col(i)));
      rep.metric_scale_err = std::max(
          rep.metric_scale_err,
          (mt - std::exp(t) * hbar).cwiseAbs().maxCoeff());

      // mean curvature transfers through the ambient isometry
      const Vec Ht = mean_curvature_quadric_chart(ft, sd.quadric(), p);
      rep.mean_curv_transfer = std::max(
          rep.mean_curv_transfer,
          (Ht - lambda_matrix(d, t) * H0).norm());
    }
  }
  return rep;
}

}  // namespace affq
