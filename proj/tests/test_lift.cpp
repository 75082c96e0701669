#include "doctest.h"

#include "affq/examples.hpp"
#include "affq/lift.hpp"

#include <cmath>

using namespace affq;

namespace {

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

LiftedImmersion scrambled_lift() {
  const auto ex = example("scrambled-titeica", 2);
  return make_lift(ex.quadric_chart, QuadricKind::Sphere, v2(0, 0));
}

LiftedImmersion horizontal_titeica_lift() {
  const auto ex = example("titeica", 2);
  ChartMap sigma = ChartMap::stacked(ex.immersion.xi, *ex.immersion.nu);
  return make_lift(sigma, QuadricKind::Sphere, v2(0, 0));
}

// titeica-like chart with a genuinely non-Lagrangian deformation: push the
// first slot off the surface and restore quadric membership by rescaling the
// second slot (pullback of ω̂ becomes O(amp))
LiftedImmersion non_lagrangian_lift(double amp) {
  ChartMap chart = ChartMap::analytic(2, 6, [amp](const std::vector<Jet2>& u) {
    const Jet2 third = Jet2::constant(1.0 / 3.0, 2);
    const Jet2 d = amp * sin(2.0 * u[0] + 3.0 * u[1]);
    const Jet2 x0 = exp(u[0]) + d, x1 = exp(u[1]), x2 = exp(-u[0] - u[1]);
    const Jet2 y0 = third * exp(-u[0]), y1 = third * exp(-u[1]),
               y2 = third * exp(u[0] + u[1]);
    const Jet2 s = x0 * y0 + x1 * y1 + x2 * y2;
    return std::vector<Jet2>{x0, x1, x2, y0 / s, y1 / s, y2 / s};
  });
  return make_lift(chart, QuadricKind::Sphere, v2(0, 0));
}

}  // namespace

TEST_CASE("alpha vanishes on a horizontal lift; the radial part always does") {
  const LiftedImmersion li = horizontal_titeica_lift();
  for (const Vec& p : grid_points(GridSpec::box(2, 1.0, 5))) {
    CHECK(alpha_form(li, p).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(alpha_radial_residual(li, p) < 1e-12);
  }
}

TEST_CASE("alpha recovers the applied gauge differential (alpha = -d mu)") {
  const LiftedImmersion li = scrambled_lift();
  for (const Vec& p : grid_points(GridSpec::box(2, 1.0, 5))) {
    const Vec a = alpha_form(li, p);
    const Vec dmu = v2(std::cos(p(0)) * std::cos(p(1)),
                       -std::sin(p(0)) * std::sin(p(1)));
    CHECK((a + dmu).cwiseAbs().maxCoeff() < 1e-7);
    CHECK(alpha_radial_residual(li, p) < 1e-12);
  }
}

TEST_CASE("closedness: Lagrangian input passes, perturbation fails loudly") {
  const GridSpec g = GridSpec::box(2, 1.0, 3, 0.1);
  CHECK(closedness_residual(scrambled_lift(), g) < 1e-6);
  CHECK(closedness_residual(horizontal_titeica_lift(), g) < 1e-6);

  const LiftedImmersion bad = non_lagrangian_lift(0.4);
  CHECK(closedness_residual(bad, g) > 1e-2);
  CHECK_THROWS_AS(integrate_gauge(bad, g), NotClosed);
}

TEST_CASE("gauge recovery: variance after mean removal is at machine scale") {
  const LiftedImmersion li = scrambled_lift();
  const GridSpec g = GridSpec::box(2, 1.0, 7);
  const GaugeFunction gf = integrate_gauge(li, g, 1e-9);
  CHECK(gf.path_disagreement < 1e-9);

  const auto pts = grid_points(g);
  std::vector<double> diff;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double mu_true = std::sin(pts[i](0)) * std::cos(pts[i](1));
    diff.push_back(gf.values[i] - mu_true);
  }
  double mean = 0.0;
  for (double d : diff) mean += d;
  mean /= diff.size();
  double var = 0.0;
  for (double d : diff) var += (d - mean) * (d - mean);
  var /= diff.size();
  CHECK(var < 1e-12);
}

TEST_CASE("gauge of an already-horizontal lift is constant zero") {
  const LiftedImmersion li = horizontal_titeica_lift();
  const GaugeFunction gf = integrate_gauge(li, GridSpec::box(2, 1.0, 5), 1e-9);
  for (double v : gf.values) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("rebasing the basepoint shifts the gauge by a constant") {
  LiftedImmersion li = scrambled_lift();
  LiftedImmersion li2 = li;
  li2.basepoint = v2(0.5, -0.5);
  const GridSpec g = GridSpec::box(2, 1.0, 5);
  const GaugeFunction a = integrate_gauge(li, g, 1e-9);
  const GaugeFunction b = integrate_gauge(li2, g, 1e-9);
  double lo = 1e300, hi = -1e300;
  for (size_t i = 0; i < a.values.size(); ++i) {
    lo = std::min(lo, a.values[i] - b.values[i]);
    hi = std::max(hi, a.values[i] - b.values[i]);
  }
  CHECK(hi - lo < 1e-9);
  CHECK(std::abs(hi) > 1e-3);  // the shift is genuinely nonzero
}

TEST_CASE("horizontal_lift restores horizontality and is idempotent") {
  const LiftedImmersion li = scrambled_lift();
  const GridSpec g = GridSpec::box(2, 1.0, 3, 0.1);
  const LiftedImmersion hl = horizontal_lift(li, g, 1e-9);
  for (const Vec& p : grid_points(g)) {
    CHECK(horizontality_residual_chart(hl.lift, hl.kind, p) < 1e-6);
    CHECK(anti_invariance_residual_chart(hl.lift, p) < 1e-6);
  }
  // idempotence: the gauge of the re-gauged lift is constant zero
  const GaugeFunction gf = integrate_gauge(hl, g, 1e-6);
  for (double v : gf.values) CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("all lifts share the base-induced metric and anti-invariance") {
  const LiftedImmersion base = horizontal_titeica_lift();
  const Vec p = v2(0.2, -0.4);
  const Mat g0 = base_induced_metric(base.lift, p);

  struct Gauge {
    double a, b, c;
  };
  for (const Gauge gg : {Gauge{0.3, 2.0, 1.0}, Gauge{-0.5, 1.0, -2.0},
                         Gauge{0.8, 0.5, 0.7}}) {
    ChartMap lifted = ChartMap::finite_difference(
        2, 6,
        [base, gg](const Vec& q) {
          const double mu = gg.a * std::sin(gg.b * q(0) + gg.c * q(1));
          return r_action(mu, SplitVector::from_concat(base.lift(q))).concat();
        },
        1e-4);
    const Mat gm = base_induced_metric(lifted, p);
    CHECK((gm - g0).cwiseAbs().maxCoeff() < 1e-7);
    CHECK(anti_invariance_residual_chart(lifted, p) < 1e-7);
  }
}

TEST_CASE("round trip: recovered pair is homothetic to the original, dual") {
  const LiftedImmersion li = scrambled_lift();
  const GridSpec g = GridSpec::box(2, 1.0, 3, 0.1);
  const LiftedImmersion hl = horizontal_lift(li, g, 1e-9);
  const CentroaffinePair pair = extract_centroaffine_pair(hl, g, 1e-6);
  CHECK(pair.duality_pairing < 1e-8);
  CHECK(pair.duality_tangency < 1e-8);

  const auto tit = example("titeica", 2);
  double clo = 1e300, chi = -1e300;
  for (const Vec& p : grid_points(g)) {
    const Vec got = pair.f(p);
    const Vec want = tit.immersion.f(p);
    for (int c = 0; c < 3; ++c) {
      const double ratio = got(c) / want(c);
      clo = std::min(clo, ratio);
      chi = std::max(chi, ratio);
    }
  }
  CHECK(chi - clo < 1e-7);             // location-independent homothety
  CHECK(std::abs(chi - 1.0) < 1e-6);   // basepoint normalization pins c = 1
}

TEST_CASE("round trip on the hyperbola (n = 1)") {
  // scramble mu(s) = 0.3 sin(s) applied to the hyperbola sigma^+
  ChartMap chart = ChartMap::analytic(1, 4, [](const std::vector<Jet2>& u) {
    const Jet2 mu = 0.3 * sin(u[0]);
    return std::vector<Jet2>{exp(mu) * cosh(u[0]), exp(mu) * sinh(u[0]),
                             exp(-mu) * cosh(u[0]), exp(-mu) * (-sinh(u[0]))};
  });
  const LiftedImmersion li = make_lift(chart, QuadricKind::Sphere, v1(0.0));
  const GridSpec g = GridSpec::box(1, 1.0, 9, 0.05);
  const LiftedImmersion hl = horizontal_lift(li, g, 1e-9);
  const CentroaffinePair pair = extract_centroaffine_pair(hl, g, 1e-7);
  CHECK(pair.duality_pairing < 1e-9);
  CHECK(pair.duality_tangency < 1e-9);
  for (const Vec& p : grid_points(g)) {
    const Vec got = pair.f(p);
    CHECK(got(0) == doctest::Approx(std::cosh(p(0))).epsilon(1e-7));
    CHECK(got(1) == doctest::Approx(std::sinh(p(0))).epsilon(1e-7));
  }
}

TEST_CASE("maximality transfers through the inverse construction") {
  const LiftedImmersion li = scrambled_lift();
  const GridSpec g = GridSpec::box(2, 0.8, 3, 0.1);
  const LiftedImmersion hl = horizontal_lift(li, g, 1e-9);
  const CentroaffinePair pair = extract_centroaffine_pair(hl, g, 1e-6);

  EquiaffineImmersion rec;
  rec.f = pair.f;
  rec.xi = pair.f;  // centroaffine
  const auto rep = is_proper_affine_sphere(rec, g, 1e-5);
  CHECK(rep.proper);
}

TEST_CASE("degenerate lift input is rejected") {
  ChartMap zero_second = ChartMap::finite_difference(1, 4, [](const Vec& p) {
    Vec v(4);
    v << std::cosh(p(0)), std::sinh(p(0)), 0.0, 0.0;
    return v;
  });
  CHECK_THROWS_AS(make_lift(zero_second, QuadricKind::Sphere, v1(0.0)),
                  DegenerateLift);
}
