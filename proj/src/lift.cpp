#include "affq/lift.hpp"

namespace affq {

namespace {

// 5-point Gauss-Legendre on [0, 1]
constexpr double kGLx[5] = {0.046910077030668004, 0.230765344947158454, 0.5,
                            0.769234655052841546, 0.953089922969331996};
constexpr double kGLw[5] = {0.118463442528094544, 0.239314335249683234,
                            0.284444444444444444, 0.239314335249683234,
                            0.118463442528094544};

}  // namespace

LiftedImmersion make_lift(ChartMap chart, QuadricKind kind, Vec basepoint,
                          double membership_tol) {
  LiftedImmersion li{std::move(chart), kind, std::move(basepoint)};
  const SplitVector s = SplitVector::from_concat(li.lift(li.basepoint));
  if (s.phi.norm() == 0.0) throw DegenerateLift("vanishing second slot");
  const double r = std::abs(ghat(s, s) - sign_of(kind));
  if (r > membership_tol) throw NotOnQuadric(r);
  return li;
}

Vec alpha_form(const LiftedImmersion& li, const Vec& p) {
  const Jet j = li.lift.jet(p, 1);
  const int d = li.lift.target_dim() / 2;
  const Vec F = j.value.head(d);
  if (F.norm() == 0.0 || j.value.tail(d).norm() == 0.0)
    throw DegenerateLift("vanishing slot at evaluation point");
  Vec a(li.n());
  for (int i = 0; i < li.n(); ++i) a(i) = j.jac.col(i).tail(d).dot(F);
  return a;
}

double alpha_radial_residual(const LiftedImmersion& li, const Vec& p) {
  return radial_residual_chart(li.lift, p);
}

double closedness_residual(const LiftedImmersion& li, const GridSpec& grid) {
  const int n = li.n();
  const double h = 1e-4;
  double r = 0.0;
  for (const Vec& p : grid_points(grid)) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Vec pip = p, pim = p, pjp = p, pjm = p;
        pip(i) += h;
        pim(i) -= h;
        pjp(j) += h;
        pjm(j) -= h;
        const double d_i_aj =
            (alpha_form(li, pip)(j) - alpha_form(li, pim)(j)) / (2 * h);
        const double d_j_ai =
            (alpha_form(li, pjp)(i) - alpha_form(li, pjm)(i)) / (2 * h);
        r = std::max(r, std::abs(d_i_aj - d_j_ai));
      }
  }
  return r;
}

namespace {

// ∫ α along the straight segment [a, b], adaptive piece count
double segment_alpha(const LiftedImmersion& li, const Vec& a, const Vec& b) {
  const Vec d = b - a;
  const double len = d.norm();
  if (len == 0.0) return 0.0;
  const int pieces = std::max(1, static_cast<int>(std::ceil(len / 0.25)));
  double total = 0.0;
  for (int s = 0; s < pieces; ++s) {
    const double t0 = static_cast<double>(s) / pieces;
    const double t1 = static_cast<double>(s + 1) / pieces;
    for (int q = 0; q < 5; ++q) {
      const double t = t0 + (t1 - t0) * kGLx[q];
      total += kGLw[q] * (t1 - t0) * alpha_form(li, Vec(a + t * d)).dot(d);
    }
  }
  return total;
}

// staircase from the basepoint to p; axes visited in the given order
double staircase_alpha(const LiftedImmersion& li, const Vec& p,
                       bool reverse_axes) {
  const int n = li.n();
  Vec cur = li.basepoint;
  double total = 0.0;
  for (int step = 0; step < n; ++step) {
    const int axis = reverse_axes ? n - 1 - step : step;
    Vec next = cur;
    next(axis) = p(axis);
    total += segment_alpha(li, cur, next);
    cur = next;
  }
  return total;
}

}  // namespace

double gauge_at(const LiftedImmersion& li, const Vec& p) {
  return -staircase_alpha(li, p, /*reverse_axes=*/false);
}

GaugeFunction integrate_gauge(const LiftedImmersion& li, const GridSpec& grid,
                              double path_tol) {
  const double closed = closedness_residual(li, grid);
  if (closed > path_tol * 1e3) throw NotClosed(closed);

  GaugeFunction out;
  out.grid = grid;
  out.basepoint = li.basepoint;
  const auto pts = grid_points(grid);
  out.values.reserve(pts.size());
  for (const Vec& p : pts) {
    const double forward = -staircase_alpha(li, p, false);
    const double backward = -staircase_alpha(li, p, true);
    out.path_disagreement =
        std::max(out.path_disagreement, std::abs(forward - backward));
    out.values.push_back(0.5 * (forward + backward));
  }
  if (out.path_disagreement > path_tol) throw NotClosed(out.path_disagreement);
  return out;
}

LiftedImmersion horizontal_lift(const LiftedImmersion& li,
                                const GridSpec& certification_grid,
                                double path_tol) {
  // certify closedness/path independence first
  (void)integrate_gauge(li, certification_grid, path_tol);

  const int d = li.lift.target_dim() / 2;
  ChartMap relift = ChartMap::finite_difference(
      li.n(), 2 * d,
      [li, d](const Vec& p) {
        const double mu = gauge_at(li, p);
        const Vec v = li.lift(p);
        Vec out(2 * d);
        out << std::exp(-mu) * v.head(d), std::exp(mu) * v.tail(d);
        return out;
      },
      li.lift.fd_step());
  return LiftedImmersion{std::move(relift), li.kind, li.basepoint};
}

CentroaffinePair extract_centroaffine_pair(const LiftedImmersion& horizontal,
                                           const GridSpec& grid,
                                           double horizontality_tol) {
  const int n = horizontal.n();
  const int d = horizontal.lift.target_dim() / 2;

  CentroaffinePair out;
  Mat top = Mat::Zero(d, 2 * d);
  top.leftCols(d) = Mat::Identity(d, d);
  Mat bottom = Mat::Zero(d, 2 * d);
  bottom.rightCols(d) = Mat::Identity(d, d);
  out.f = horizontal.lift.linearly_transformed(top);
  out.nu = horizontal.lift.linearly_transformed(bottom);

  for (const Vec& p : grid_points(grid)) {
    const double hres =
        horizontality_residual_chart(horizontal.lift, horizontal.kind, p);
    if (hres > horizontality_tol) throw NotHorizontal(hres);
    const Vec fv = out.f(p);
    const Jet jf = out.f.jet(p, 1);
    const Vec nv = out.nu(p);
    out.duality_pairing = std::max(
        out.duality_pairing, std::abs(nv.dot(fv) - sign_of(horizontal.kind)));
    for (int i = 0; i < n; ++i)
      out.duality_tangency =
          std::max(out.duality_tangency, std::abs(nv.dot(jf.jac.col(i))));
  }
  return out;
}

}  // namespace affq
