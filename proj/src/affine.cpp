#include "affq/affine.hpp"

#include <Eigen/Dense>

namespace affq {

namespace {

// Frame [f_* e_1 … f_* e_n | ξ] as an (n+1)×(n+1) matrix.
Mat frame_matrix(const Jet& jf, const Vec& xi_value) {
  const int n = static_cast<int>(jf.jac.cols());
  Mat A(n + 1, n + 1);
  A.leftCols(n) = jf.jac;
  A.col(n) = xi_value;
  return A;
}

double relative_det_floor(const Mat& A) {
  return Tol::singular * std::pow(std::max(A.norm(), 1e-300), A.rows());
}

}  // namespace

ChartMap scaled_chart(const ChartMap& chart, double factor) {
  return chart.scaled(factor);
}

AffineData decompose_structure(const EquiaffineImmersion& imm, const Vec& p) {
  const Jet jf = imm.f.jet(p, 2);
  const Jet jxi = imm.xi.jet(p, 1);
  const int n = imm.n();

  const Mat A = frame_matrix(jf, jxi.value);
  Eigen::PartialPivLU<Mat> lu(A);
  const double d = lu.determinant();
  if (!(std::abs(d) > relative_det_floor(A))) throw TransversalityLost(d);

  AffineData out;
  out.gamma.assign(n, Mat::Zero(n, n));
  out.h = Mat::Zero(n, n);
  out.S = Mat::Zero(n, n);
  out.tau = Vec::Zero(n);
  out.theta = imm.orientation * d;

  double resid = 0.0;
  const double scale = std::max(1.0, A.norm());

  // D_{e_i} f_* e_j = Σ_k Γ^k_{ij} f_* e_k + h_{ ij} ξ
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Vec rhs(n + 1);
      for (int c = 0; c <= n; ++c) rhs(c) = jf.hess[c](i, j);
      const Vec x = lu.solve(rhs);
      resid = std::max(resid, (A * x - rhs).norm() / scale);
      for (int k = 0; k < n; ++k) {
        out.gamma[k](i, j) = x(k);
        out.gamma[k](j, i) = x(k);
      }
      out.h(i, j) = x(n);
      out.h(j, i) = x(n);
    }

  // D_{e_i} ξ = −f_*(S e_i) + τ(e_i) ξ
  for (int i = 0; i < n; ++i) {
    const Vec rhs = jxi.jac.col(i);
    const Vec x = lu.solve(rhs);
    resid = std::max(resid, (A * x - rhs).norm() / scale);
    out.S.col(i) = -x.head(n);
    out.tau(i) = x(n);
  }
  out.residual = resid;
  return out;
}

MetricField affine_metric_field(const EquiaffineImmersion& imm) {
  const double step = imm.f.mode() == JetMode::Analytic
                          ? Tol::fd_step
                          : std::max(4.0 * Tol::fd_step, imm.f.fd_step());
  return MetricField(
      imm.n(), [imm](const Vec& p) { return decompose_structure(imm, p).h; },
      step);
}

BlaschkeResult blaschke_normalize(const EquiaffineImmersion& imm,
                                  const GridSpec& samples,
                                  double constancy_tol) {
  const int n = imm.n();
  double ratio_min = 0.0, ratio_max = 0.0;
  bool first = true;
  for (const Vec& p : grid_points(samples)) {
    const AffineData ad = decompose_structure(imm, p);
    const Signature sig = signature_of(ad.h);
    if (sig.zero > 0 || (sig.positive > 0 && sig.negative > 0))
      throw IndefiniteMetric("h not definite at a Blaschke sample");
    const double omega_h = std::sqrt(std::abs(ad.h.determinant()));
    const double r = omega_h / std::abs(ad.theta);
    ratio_min = first ? r : std::min(ratio_min, r);
    ratio_max = first ? r : std::max(ratio_max, r);
    first = false;
  }
  const double spread = (ratio_max - ratio_min) / ratio_max;
  if (spread > constancy_tol) throw NonConstantRescale(spread);

  const double ratio = 0.5 * (ratio_min + ratio_max);
  // θ' = cθ, ω_{h'} = c^{-n/2} ω_h  =>  c^{1+n/2} = ω_h / |θ|
  const double c = std::pow(ratio, 2.0 / (n + 2));

  BlaschkeResult out;
  out.c = c;
  out.immersion = imm;
  out.immersion.xi = scaled_chart(imm.xi, c);
  // pick the orientation that makes θ positive at the box center
  Vec center = 0.5 * (samples.lo + samples.hi);
  const AffineData ad = decompose_structure(out.immersion, center);
  if (ad.theta < 0) out.immersion.orientation = -imm.orientation;
  return out;
}

Vec conormal(const EquiaffineImmersion& imm, const Vec& p) {
  const Jet jf = imm.f.jet(p, 1);
  const Vec xi = imm.xi(p);
  const int n = imm.n();
  const Mat A = frame_matrix(jf, xi);
  Vec rhs = Vec::Zero(n + 1);
  rhs(n) = 1.0;
  // ν(f_* e_i) = 0, ν(ξ) = 1  <=>  A^T ν = e_{n+1}
  return solve(Mat(A.transpose()), rhs);
}

ChartMap conormal_chart(const EquiaffineImmersion& imm) {
  if (imm.nu) return *imm.nu;
  const double step = imm.f.mode() == JetMode::Analytic
                          ? Tol::fd_step
                          : std::max(4.0 * Tol::fd_step, imm.f.fd_step());
  return ChartMap::finite_difference(
      imm.n(), imm.n() + 1, [imm](const Vec& p) { return conormal(imm, p); },
      step);
}

PickData pick_tensor(const EquiaffineImmersion& imm, const Vec& p) {
  const int n = imm.n();
  const AffineData ad = decompose_structure(imm, p);
  const MetricField hf = affine_metric_field(imm);

  Eigen::PartialPivLU<Mat> lu(ad.h);
  if (!(std::abs(lu.determinant()) > relative_det_floor(ad.h)))
    throw DegenerateMetric(lu.determinant());
  const Mat hinv = lu.inverse();

  PickData out;
  out.C.assign(n, Mat::Zero(n, n));
  out.A.assign(n, Mat::Zero(n, n));
  out.trC = Vec::Zero(n);

  for (int i = 0; i < n; ++i) {
    const Mat dh = hf.partial(p, i);
    // C_{ijk} = ∂_i h_{jk} − Γ^m_{ij} h_{mk} − Γ^m_{ik} h_{jm}
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double c = dh(j, k);
        for (int m = 0; m < n; ++m)
          c -= ad.gamma[m](i, j) * ad.h(m, k) + ad.gamma[m](i, k) * ad.h(j, m);
        out.C[i](j, k) = c;
      }
    out.A[i] = -0.5 * (out.C[i] * hinv).transpose();
    out.trC(i) = (hinv * out.C[i]).trace();
  }
  return out;
}

double centroaffine_residual(const EquiaffineImmersion& imm, const Vec& p) {
  const Vec f = imm.f(p);
  const Vec xi = imm.xi(p);
  const double f2 = f.squaredNorm();
  if (f2 == 0.0) return xi.norm();
  const Vec rej = xi - (xi.dot(f) / f2) * f;
  return rej.norm() / std::max(1.0, xi.norm());
}

SphereReport is_proper_affine_sphere(const EquiaffineImmersion& imm,
                                     const GridSpec& samples,
                                     double sphere_tol) {
  SphereReport rep;
  rep.tol = sphere_tol;
  for (const Vec& p : grid_points(samples)) {
    const double ca = centroaffine_residual(imm, p);
    if (ca > 1e-8) throw NotCentroaffine(ca);
    const PickData pd = pick_tensor(imm, p);
    rep.sup_trC = std::max(rep.sup_trC, pd.trC.cwiseAbs().maxCoeff());
  }
  rep.proper = rep.sup_trC <= sphere_tol;
  return rep;
}

std::vector<Mat> levi_civita_of_h(const EquiaffineImmersion& imm, const Vec& p) {
  return christoffel(affine_metric_field(imm), p);
}

namespace {
struct DualSolve {
  std::vector<Mat> gamma_bar;
  Mat h_bar;
  double residual = 0.0;
};
DualSolve dual_solve(const EquiaffineImmersion& imm, const Vec& p) {
  const int n = imm.n();
  const ChartMap nu = conormal_chart(imm);
  const Jet jn = nu.jet(p, 2);

  const Mat B = frame_matrix(jn, jn.value);  // [ν_* e_1 … ν_* e_n | ν]
  Eigen::PartialPivLU<Mat> lu(B);
  if (!(std::abs(lu.determinant()) > relative_det_floor(B)))
    throw SingularMatrix(lu.determinant());

  DualSolve out;
  out.gamma_bar.assign(n, Mat::Zero(n, n));
  out.h_bar = Mat::Zero(n, n);
  const double scale = std::max(1.0, B.norm());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Vec rhs(n + 1);
      for (int c = 0; c <= n; ++c) rhs(c) = jn.hess[c](i, j);
      const Vec x = lu.solve(rhs);
      out.residual = std::max(out.residual, (B * x - rhs).norm() / scale);
      for (int k = 0; k < n; ++k) {
        out.gamma_bar[k](i, j) = x(k);
        out.gamma_bar[k](j, i) = x(k);
      }
      // D*_X ν_* Y = ν_*(∇̄_X Y) − h̄(X, Y) ν
      out.h_bar(i, j) = -x(n);
      out.h_bar(j, i) = -x(n);
    }
  return out;
}
}  // namespace

DualCore dual_core(const EquiaffineImmersion& imm, const Vec& p) {
  DualSolve ds = dual_solve(imm, p);
  return DualCore{std::move(ds.gamma_bar), std::move(ds.h_bar)};
}

MetricField dual_metric_field(const EquiaffineImmersion& imm) {
  const double step = imm.f.mode() == JetMode::Analytic
                          ? Tol::fd_step
                          : std::max(4.0 * Tol::fd_step, imm.f.fd_step());
  return MetricField(
      imm.n(), [imm](const Vec& p) { return dual_core(imm, p).h_bar; }, step);
}

std::vector<Mat> dual_pick_tensor(const EquiaffineImmersion& imm, const Vec& p) {
  const int n = imm.n();
  const DualCore dc = dual_core(imm, p);
  const MetricField hbf = dual_metric_field(imm);
  std::vector<Mat> C(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    const Mat dh = hbf.partial(p, i);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double c = dh(j, k);
        for (int m = 0; m < n; ++m)
          c -= dc.gamma_bar[m](i, j) * dc.h_bar(m, k) +
               dc.gamma_bar[m](i, k) * dc.h_bar(j, m);
        C[i](j, k) = c;
      }
  }
  return C;
}

DualData dual_structure(const EquiaffineImmersion& imm, const Vec& p) {
  const int n = imm.n();
  DualSolve ds = dual_solve(imm, p);
  DualData out;
  out.gamma_bar = std::move(ds.gamma_bar);
  out.h_bar = std::move(ds.h_bar);
  out.residual = ds.residual;

  const AffineData ad = decompose_structure(imm, p);
  out.hbar_vs_hS = (out.h_bar - ad.h * ad.S).cwiseAbs().maxCoeff();

  const MetricField hf = affine_metric_field(imm);
  for (int i = 0; i < n; ++i) {
    const Mat dh = hf.partial(p, i);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double lhs = dh(j, k);
        double rhs = 0.0;
        for (int m = 0; m < n; ++m)
          rhs += ad.gamma[m](i, j) * ad.h(m, k) +
                 out.gamma_bar[m](i, k) * ad.h(j, m);
        out.metric_pairing = std::max(out.metric_pairing, std::abs(lhs - rhs));
      }
  }

  const auto lc = levi_civita_of_h(imm, p);
  for (int k = 0; k < n; ++k) {
    const Mat avg = 0.5 * (ad.gamma[k] + out.gamma_bar[k]);
    out.levi_civita_avg =
        std::max(out.levi_civita_avg, (avg - lc[k]).cwiseAbs().maxCoeff());
  }
  return out;
}

double pick_trace_derivative(const EquiaffineImmersion& imm, const Vec& p,
                             const Vec& X, const Vec& Y) {
  const int n = imm.n();
  // tr(A(Y)) as a function of the chart point, Y held constant-coefficient
  auto trAY = [&](const Vec& q, const Vec& W) {
    const PickData pd = pick_tensor(imm, q);
    double t = 0.0;
    for (int j = 0; j < n; ++j) t += W(j) * pd.A[j].trace();
    return t;
  };
  const double hstep = 10.0 * Tol::fd_step;  // A is itself an FD quantity
  double dX = 0.0;
  for (int s = 0; s < 2; ++s) {
    Vec q = p + (s == 0 ? hstep : -hstep) * X;
    dX += (s == 0 ? 1.0 : -1.0) * trAY(q, Y);
  }
  dX /= 2.0 * hstep;

  const auto lc = levi_civita_of_h(imm, p);
  Vec covY = Vec::Zero(n);  // ∇^h_X Y for constant-coefficient X, Y
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) covY(k) += X(i) * Y(j) * lc[k](i, j);
  return dX - trAY(p, covY);
}

// --- residuals -------------------------------------------------------------

double codazzi_h_residual(const EquiaffineImmersion& imm, const Vec& p) {
  const PickData pd = pick_tensor(imm, p);
  const int n = imm.n();
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r = std::max(r, (pd.C[i].row(j) - pd.C[j].row(i)).cwiseAbs().maxCoeff());
  return r;
}

double codazzi_S_residual(const EquiaffineImmersion& imm, const Vec& p) {
  const int n = imm.n();
  const AffineData ad = decompose_structure(imm, p);
  const double h = imm.f.mode() == JetMode::Analytic
                       ? Tol::fd_step
                       : std::max(4.0 * Tol::fd_step, imm.f.fd_step());
  // ∂_i S by central differences of the shape-operator field
  std::vector<Mat> dS(n);
  for (int i = 0; i < n; ++i) {
    Vec qp = p, qm = p;
    qp(i) += h;
    qm(i) -= h;
    dS[i] = (decompose_structure(imm, qp).S - decompose_structure(imm, qm).S) /
            (2.0 * h);
  }
  // (∇_i S)^k_j = ∂_i S^k_j + Γ^k_{im} S^m_j − Γ^m_{ij} S^k_m
  auto covS = [&](int i) {
    Mat c = dS[i];
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        for (int m = 0; m < n; ++m)
          c(k, j) += ad.gamma[k](i, m) * ad.S(m, j) -
                     ad.gamma[m](i, j) * ad.S(k, m);
      }
    return c;
  };
  double r = 0.0;
  std::vector<Mat> cs(n);
  for (int i = 0; i < n; ++i) cs[i] = covS(i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r = std::max(r, (cs[i].col(j) - cs[j].col(i)).cwiseAbs().maxCoeff());
  return r;
}

double shape_symmetry_residual(const EquiaffineImmersion& imm, const Vec& p) {
  const AffineData ad = decompose_structure(imm, p);
  const Mat hs = ad.h * ad.S;
  return (hs - hs.transpose()).cwiseAbs().maxCoeff();
}

double pick_symmetry_residual(const EquiaffineImmersion& imm, const Vec& p) {
  const PickData pd = pick_tensor(imm, p);
  const int n = imm.n();
  double r = 0.0;
  auto C = [&](int i, int j, int k) { return pd.C[i](j, k); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double c = C(i, j, k);
        r = std::max({r, std::abs(c - C(i, k, j)), std::abs(c - C(j, i, k)),
                      std::abs(c - C(j, k, i)), std::abs(c - C(k, i, j)),
                      std::abs(c - C(k, j, i))});
      }
  return r;
}

double nabla_pick_symmetry_residual(const EquiaffineImmersion& imm,
                                    const Vec& p) {
  const int n = imm.n();
  const AffineData ad = decompose_structure(imm, p);
  const auto lc = levi_civita_of_h(imm, p);
  const PickData pd = pick_tensor(imm, p);
  const double h = 10.0 * Tol::fd_step;

  // ∂_a A[i] by central differences of the Pick endomorphism field
  std::vector<std::vector<Mat>> dA(n);
  for (int a = 0; a < n; ++a) {
    Vec qp = p, qm = p;
    qp(a) += h;
    qm(a) -= h;
    const PickData pp = pick_tensor(imm, qp);
    const PickData pm = pick_tensor(imm, qm);
    dA[a].resize(n);
    for (int i = 0; i < n; ++i) dA[a][i] = (pp.A[i] - pm.A[i]) / (2.0 * h);
  }

  // (∇^h_a A)(e_i) = ∂_a A_i + [Γ^h_a, A_i] − Γ^h{}^m_{a i} A_m
  auto covA = [&](int a, int i) {
    Mat GammaA = Mat::Zero(n, n);
    Mat AGamma = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        double ga = 0.0, ag = 0.0;
        for (int m = 0; m < n; ++m) {
          ga += lc[k](a, m) * pd.A[i](m, j);
          ag += pd.A[i](k, m) * lc[m](a, j);
        }
        GammaA(k, j) = ga;
        AGamma(k, j) = ag;
      }
    Mat c = dA[a][i] + GammaA - AGamma;
    for (int m = 0; m < n; ++m) c -= lc[m](a, i) * pd.A[m];
    return c;
  };

  // T(a, i, j, l) = h((∇^h_a A)(e_i) e_j, e_l)
  std::vector<std::vector<Mat>> T(n, std::vector<Mat>(n));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) T[a][i] = ad.h * covA(a, i);

  auto t = [&](int a, int i, int j, int l) { return T[a][i](l, j); };
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          const double v = t(a, i, j, l);
          r = std::max({r, std::abs(v - t(i, a, j, l)),
                        std::abs(v - t(a, j, i, l)),
                        std::abs(v - t(a, i, l, j))});
        }
  return r;
}

ConormalResiduals conormal_residuals(const EquiaffineImmersion& imm,
                                     const Vec& p) {
  const int n = imm.n();
  const ChartMap nu = conormal_chart(imm);
  const Jet jn = nu.jet(p, 1);
  const Jet jf = imm.f.jet(p, 1);
  const Vec xi = imm.xi(p);
  const AffineData ad = decompose_structure(imm, p);

  ConormalResiduals out;
  out.pairing = std::abs(jn.value.dot(xi) - 1.0);
  for (int i = 0; i < n; ++i)
    out.tangency = std::max(out.tangency, std::abs(jn.value.dot(jf.jac.col(i))));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.derivative = std::max(
          out.derivative,
          std::abs(jn.jac.col(j).dot(jf.jac.col(i)) + ad.h(j, i)));
  return out;
}

}  // namespace affq
