#include "affq/split.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>

namespace affq {

double ghat(const SplitVector& a, const SplitVector& b) {
  if (a.dim() != b.dim()) throw DimMismatch("ghat");
  return 0.5 * (a.phi.dot(b.v) + b.phi.dot(a.v));
}

SplitVector phat(const SplitVector& a) { return SplitVector{a.v, -a.phi}; }

double omegahat(const SplitVector& a, const SplitVector& b) {
  if (a.dim() != b.dim()) throw DimMismatch("omegahat");
  return 0.5 * (a.phi.dot(b.v) - b.phi.dot(a.v));
}

Mat ghat_matrix(int d) {
  Mat m = Mat::Zero(2 * d, 2 * d);
  m.topRightCorner(d, d) = 0.5 * Mat::Identity(d, d);
  m.bottomLeftCorner(d, d) = 0.5 * Mat::Identity(d, d);
  return m;
}

Mat phat_matrix(int d) {
  Mat m = Mat::Identity(2 * d, 2 * d);
  m.bottomRightCorner(d, d) = -Mat::Identity(d, d);
  return m;
}

Mat omegahat_matrix(int d) { return Mat(ghat_matrix(d) * phat_matrix(d)); }

Mat b_matrix(int d) { return ghat_matrix(d); }

Vec model_isometry(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw DimMismatch("model_isometry");
  Vec c(2 * x.size());
  c << x + y, x - y;
  return c;
}

SplitVector anti_isometry_F(const SplitVector& a) {
  return SplitVector{-a.v, a.phi};
}

SplitVector r_action(double t, const SplitVector& a) {
  return SplitVector{std::exp(t) * a.v, std::exp(-t) * a.phi};
}

QuadricPoint QuadricPoint::checked(SplitVector b, QuadricKind k, double tol) {
  QuadricPoint q{std::move(b), k};
  const double r = q.membership_residual();
  if (r > tol) throw NotOnQuadric(r);
  return q;
}

Mat tangent_basis(const QuadricPoint& q) {
  const int D = 2 * q.base.dim();
  // kernel of the row ĝ(q, ·)
  Mat row(1, D);
  row = (ghat_matrix(q.base.dim()) * q.base.concat()).transpose();
  Eigen::FullPivLU<Mat> lu(row);
  Mat ker = lu.kernel();
  if (ker.cols() != D - 1) throw DegenerateFrame("tangent space rank");
  // orthonormalize (Euclidean) for conditioning
  Eigen::HouseholderQR<Mat> qr(ker);
  Mat Q = qr.householderQ() * Mat::Identity(D, D - 1);
  return Q;
}

Vec project_tangent(const QuadricPoint& q, const Vec& w_concat) {
  const SplitVector w = SplitVector::from_concat(w_concat);
  const double s = ghat(q.base, q.base);
  return w_concat - (ghat(w, q.base) / s) * q.base.concat();
}

TauPoint tau_project(const QuadricPoint& q) {
  const double nx = q.base.v.norm();
  const double ny = q.base.phi.norm();
  if (nx == 0.0 || ny == 0.0) throw DegenerateFrame("tau gauge: zero slot");
  const double t = 0.5 * std::log(ny / nx);
  return TauPoint{r_action(t, q.base), q.kind};
}

double tau_distance(const TauPoint& a, const TauPoint& b) {
  const Vec ca = a.rep.concat();
  const Vec cb = b.rep.concat();
  return std::min((ca - cb).norm(), (ca + cb).norm());
}

double contact_eta(const QuadricPoint& q, const Vec& w_concat,
                   double tangent_tol) {
  const SplitVector w = SplitVector::from_concat(w_concat);
  const double tang = std::abs(ghat(w, q.base));
  if (tang > tangent_tol * std::max(1.0, w_concat.norm() * q.base.concat().norm()))
    throw NotTangent(tang);
  return omegahat(q.base, w);
}

Vec reeb(const QuadricPoint& q) {
  return sign_of(q.kind) * phat(q.base).concat();
}

namespace {

// sum over permutations of sgn(π) η(v_{π0}) Π dη(v_{π(2k-1)}, v_{π(2k)}),
// normalized by 2^n n! (determinant convention for the wedge).
double wedge_eta_deta_n(const std::function<double(int)>& eta_of,
                        const std::function<double(int, int)>& deta_of,
                        int count) {
  std::vector<int> perm(count);
  std::iota(perm.begin(), perm.end(), 0);
  const int n = (count - 1) / 2;
  double total = 0.0;
  // enumerate permutations with parity tracking
  std::vector<int> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  // Heap's algorithm would be faster; plain next_permutation with explicit
  // parity is fine at n <= 3.
  auto parity = [](std::vector<int> p) {
    int swaps = 0;
    for (size_t i = 0; i < p.size(); ++i)
      while (p[i] != static_cast<int>(i)) {
        std::swap(p[i], p[p[i]]);
        ++swaps;
      }
    return swaps % 2 == 0 ? 1.0 : -1.0;
  };
  std::sort(idx.begin(), idx.end());
  do {
    double term = parity(idx) * eta_of(idx[0]);
    for (int k = 0; k < n; ++k) term *= deta_of(idx[2 * k + 1], idx[2 * k + 2]);
    total += term;
  } while (std::next_permutation(idx.begin(), idx.end()));
  double norm = 1.0;
  for (int k = 1; k <= n; ++k) norm *= 2.0 * k;  // 2^n n!
  return total / norm;
}

}  // namespace

double contact_condition(const QuadricPoint& q, const Mat& frame) {
  const int D = 2 * q.base.dim();
  const int count = D - 1;
  if (frame.rows() != D || frame.cols() != count)
    throw DegenerateFrame("contact frame shape");
  // frame must span the tangent space: [frame | q] has full rank
  Mat full(D, D);
  full.leftCols(count) = frame;
  full.col(count) = q.base.concat();
  if (std::abs(full.determinant()) <
      1e-12 * std::pow(std::max(1.0, full.norm()), D))
    throw DegenerateFrame("contact frame does not span");

  std::vector<SplitVector> vs;
  vs.reserve(count);
  for (int i = 0; i < count; ++i)
    vs.push_back(SplitVector::from_concat(frame.col(i)));
  auto eta_of = [&](int i) { return omegahat(q.base, vs[i]); };
  auto deta_of = [&](int i, int j) { return 2.0 * omegahat(vs[i], vs[j]); };
  return wedge_eta_deta_n(eta_of, deta_of, count);
}

// --- para-Sasaki -------------------------------------------------------------

ParaSasakiFrame::ParaSasakiFrame(QuadricPoint q) : q_(std::move(q)) {
  const double r = q_.membership_residual();
  if (r > 1e-8) throw NotOnQuadric(r);
  zeta_ = reeb(q_);
  basis_ = tangent_basis(q_);
}

double ParaSasakiFrame::eta(const Vec& w) const {
  return omegahat(q_.base, SplitVector::from_concat(w));
}

Vec ParaSasakiFrame::phi_endo(const Vec& w) const {
  const Vec horizontal = w - eta(w) * zeta_;
  return phat(SplitVector::from_concat(horizontal)).concat();
}

double ParaSasakiFrame::g(const Vec& w1, const Vec& w2) const {
  const Vec h1 = w1 - eta(w1) * zeta_;
  const Vec h2 = w2 - eta(w2) * zeta_;
  return 2.0 * ghat(SplitVector::from_concat(h1), SplitVector::from_concat(h2)) +
         eta(w1) * eta(w2);
}

double ParaSasakiFrame::deta(const Vec& w1, const Vec& w2) const {
  return 2.0 * omegahat(SplitVector::from_concat(w1),
                        SplitVector::from_concat(w2));
}

Mat ParaSasakiFrame::g_matrix() const {
  const int k = static_cast<int>(basis_.cols());
  Mat m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      m(i, j) = g(basis_.col(i), basis_.col(j));
      m(j, i) = m(i, j);
    }
  return m;
}

ParaSasakiFrame para_sasaki_frame(const QuadricPoint& q) {
  return ParaSasakiFrame(q);
}

namespace {

// constant-coefficient ambient extension, projected to the quadric pointwise:
// E_w(x) = w − (ĝ(w,x)/ĝ(x,x)) x, smooth near the quadric
ChartMap extension_field(const Vec& w, int dim_v) {
  const int D = 2 * dim_v;
  return ChartMap::finite_difference(
      D, D,
      [w, dim_v](const Vec& x) {
        const SplitVector sx = SplitVector::from_concat(x);
        const SplitVector sw = SplitVector::from_concat(w);
        const double s = ghat(sx, sx);
        return Vec(w - (ghat(sw, sx) / s) * x);
      },
      1e-4);
}

// φ applied to a field, with the off-quadric-smooth normalization
// η_x(u) = s·ω̂(x,u)/ĝ(x,x), ζ_x = s·P̂x.
ChartMap phi_of_field(const ChartMap& field, QuadricKind kind, int dim_v) {
  const int D = 2 * dim_v;
  const double s = sign_of(kind);
  return ChartMap::finite_difference(
      D, D,
      [field, s](const Vec& x) {
        const SplitVector sx = SplitVector::from_concat(x);
        const Vec u = field(x);
        const SplitVector su = SplitVector::from_concat(u);
        const double q2 = ghat(sx, sx);
        const double eta_u = s * omegahat(sx, su) / q2;
        const Vec zeta = s * phat(sx).concat();
        return phat(SplitVector::from_concat(Vec(u - eta_u * zeta))).concat();
      },
      1e-4);
}

}  // namespace

double nijenhuis_residual(const QuadricPoint& q, const Vec& X, const Vec& Y) {
  const int dv = q.base.dim();
  const Vec x0 = q.base.concat();

  const ChartMap EX = extension_field(X, dv);
  const ChartMap EY = extension_field(Y, dv);
  const ChartMap pX = phi_of_field(EX, q.kind, dv);
  const ChartMap pY = phi_of_field(EY, q.kind, dv);

  const ParaSasakiFrame fr(q);
  const Vec b1 = lie_bracket(EX, EY, x0);
  const Vec b2 = lie_bracket(pX, pY, x0);
  const Vec b3 = lie_bracket(pX, EY, x0);
  const Vec b4 = lie_bracket(EX, pY, x0);

  const Vec Xt = project_tangent(q, X);
  const Vec Yt = project_tangent(q, Y);
  const double deta_xy = fr.deta(Xt, Yt);

  const Vec N = b1 + b2 - fr.phi_endo(project_tangent(q, b3)) -
                fr.phi_endo(project_tangent(q, b4)) -
                fr.eta(project_tangent(q, b1)) * fr.zeta() - deta_xy * fr.zeta();
  return N.norm();
}

SasakiResiduals axioms_report(const QuadricPoint& q, Rng& rng, int pairs) {
  const ParaSasakiFrame fr(q);
  SasakiResiduals out;

  out.phi_zeta = fr.phi_endo(fr.zeta()).norm();

  for (int rep = 0; rep < pairs; ++rep) {
    const Vec X = random_tangent(rng, q);
    const Vec Y = random_tangent(rng, q);

    out.eta_phi = std::max(out.eta_phi, std::abs(fr.eta(fr.phi_endo(X))));
    const Vec want = X - fr.eta(X) * fr.zeta();
    out.phi_square = std::max(
        out.phi_square, (fr.phi_endo(fr.phi_endo(X)) - want).norm());
    out.metric_compat = std::max(
        out.metric_compat,
        std::abs(fr.g(fr.phi_endo(X), fr.phi_endo(Y)) + fr.g(X, Y) -
                 fr.eta(X) * fr.eta(Y)));
    out.deta_compat = std::max(
        out.deta_compat, std::abs(fr.deta(X, Y) - fr.g(X, fr.phi_endo(Y))));
    out.nijenhuis = std::max(out.nijenhuis, nijenhuis_residual(q, X, Y));
  }
  return out;
}

// --- para-Kähler base --------------------------------------------------------

ParaKahlerBase para_kahler_base(const TauPoint& tp) {
  const QuadricPoint q{tp.rep, tp.kind};
  const int D = 2 * tp.rep.dim();
  // horizontal space: kernel of the two rows ĝ(q,·), ω̂(q,·)
  Mat rows(2, D);
  rows.row(0) = (ghat_matrix(tp.rep.dim()) * tp.rep.concat()).transpose();
  rows.row(1) = (omegahat_matrix(tp.rep.dim()).transpose() * tp.rep.concat())
                    .transpose();
  // ω̂(q, w) = q^T Ω w with Ω = ĝP̂ ; row = (Ω^T q)^T
  Eigen::FullPivLU<Mat> lu(rows);
  Mat ker = lu.kernel();
  Eigen::HouseholderQR<Mat> qr(ker);
  Mat basis = qr.householderQ() * Mat::Identity(D, D - 2);

  ParaKahlerBase out;
  out.basis = basis;
  const int k = D - 2;
  out.g = Mat(k, k);
  out.omega = Mat(k, k);
  Mat pairings(k, k);  // ĝ(b_i, P̂ b_j)
  const Mat G = ghat_matrix(tp.rep.dim());
  const Mat P = phat_matrix(tp.rep.dim());
  out.g = basis.transpose() * G * basis;
  pairings = basis.transpose() * G * P * basis;
  out.omega = pairings;
  // coordinates of P̂ b_j in the basis: solve Gram * c = ĝ(b_i, P̂ b_j)
  out.P = solve(out.g, pairings);
  return out;
}

double pullback_closedness_residual(const ChartMap& sigma, const Vec& p,
                                    double step) {
  const int n = sigma.domain_dim();
  if (n < 3) return 0.0;
  auto omega_ab = [&](const Vec& q, int a, int b) {
    const Jet j = sigma.jet(q, 1);
    return omegahat(SplitVector::from_concat(j.jac.col(a)),
                    SplitVector::from_concat(j.jac.col(b)));
  };
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        // dω(e_a, e_b, e_c) = ∂_a ω_bc − ∂_b ω_ac + ∂_c ω_ab
        double total = 0.0;
        const int tri[3][3] = {{a, b, c}, {b, a, c}, {c, a, b}};
        const double sgn[3] = {1.0, -1.0, 1.0};
        for (int t = 0; t < 3; ++t) {
          Vec qp = p, qm = p;
          qp(tri[t][0]) += step;
          qm(tri[t][0]) -= step;
          total += sgn[t] *
                   (omega_ab(qp, tri[t][1], tri[t][2]) -
                    omega_ab(qm, tri[t][1], tri[t][2])) /
                   (2.0 * step);
        }
        r = std::max(r, std::abs(total));
      }
  return r;
}

// --- random draws ------------------------------------------------------------

QuadricPoint random_quadric_point(Rng& rng, int n, QuadricKind kind) {
  const int d = n + 1;
  for (int attempt = 0; attempt < 256; ++attempt) {
    SplitVector a{rng.gaussian_vector(d), rng.gaussian_vector(d)};
    const double c = ghat(a, a);
    if (sign_of(kind) * c > 0.25) {
      const double s = std::sqrt(sign_of(kind) * c);
      return QuadricPoint{SplitVector{a.v / s, a.phi / s}, kind};
    }
  }
  throw Error("random_quadric_point: sampling failed");
}

Vec random_tangent(Rng& rng, const QuadricPoint& q) {
  const Vec w = rng.gaussian_vector(2 * q.base.dim());
  return project_tangent(q, w);
}

}  // namespace affq
