#include "doctest.h"

#include "affq/affine.hpp"
#include "affq/examples.hpp"

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

const double kC13 = 1.0 / 3.0;
const double kC23 = 2.0 / 3.0;

}  // namespace

TEST_CASE("decompose_structure: hyperbola (f''=f forces the coefficients)") {
  const auto ex = example("hyperbola", 1);
  for (double s : {0.0, 0.7, -1.0}) {
    const AffineData ad = decompose_structure(ex.immersion, v1(s));
    CHECK(std::abs(ad.gamma[0](0, 0)) < 1e-12);
    CHECK(ad.h(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ad.S(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(ad.tau(0)) < 1e-12);
    CHECK(ad.residual < 1e-12);
  }
}

TEST_CASE("decompose_structure: unit circle with xi = -f (elliptic)") {
  const auto ex = example("ellipse", 1);
  const AffineData ad = decompose_structure(ex.immersion, v1(0.4));
  CHECK(std::abs(ad.gamma[0](0, 0)) < 1e-12);
  CHECK(ad.h(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ad.S(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(ad.tau(0)) < 1e-12);
}

TEST_CASE("decompose_structure: Titeica n=2 frozen values (hand elimination)") {
  const auto ex = example("titeica", 2);
  const AffineData ad = decompose_structure(ex.immersion, v2(0, 0));
  CHECK(ad.h(0, 0) == doctest::Approx(kC23).epsilon(1e-12));
  CHECK(ad.h(0, 1) == doctest::Approx(kC13).epsilon(1e-12));
  CHECK(ad.h(1, 1) == doctest::Approx(kC23).epsilon(1e-12));
  CHECK(ad.gamma[0](0, 0) == doctest::Approx(kC13).epsilon(1e-12));   // Γ^u_uu
  CHECK(ad.gamma[1](0, 0) == doctest::Approx(-kC23).epsilon(1e-12));  // Γ^v_uu
  CHECK((ad.S + Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(ad.tau.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(ad.theta == doctest::Approx(3.0).epsilon(1e-12));

  // the coefficients are constant over the chart for this homogeneous example
  const AffineData ad2 = decompose_structure(ex.immersion, v2(0.5, -0.3));
  CHECK((ad2.h - ad.h).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ad2.gamma[0] - ad.gamma[0]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("decompose_structure: transversality guard") {
  auto ex = example("hyperbola", 1);
  EquiaffineImmersion bad = ex.immersion;
  // tangent transversal: frame degenerates
  bad.xi = ChartMap::analytic(1, 2, [](const std::vector<Jet2>& u) {
    return std::vector<Jet2>{sinh(u[0]), cosh(u[0])};
  });
  CHECK_THROWS_AS(decompose_structure(bad, v1(0.2)), TransversalityLost);
}

TEST_CASE("blaschke_normalize: hyperbola is already Blaschke") {
  const auto ex = example("hyperbola", 1);
  const auto res = blaschke_normalize(ex.immersion, GridSpec::box(1, 1.0, 7));
  CHECK(res.c == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("blaschke_normalize: Titeica constant is 3^(-3/4)") {
  const auto ex = example("titeica", 2);
  const auto res = blaschke_normalize(ex.immersion, GridSpec::box(2, 1.0, 5));
  CHECK(res.c == doctest::Approx(std::pow(3.0, -0.75)).epsilon(1e-9));

  // idempotence: renormalizing the normalized immersion gives c = 1,
  // and h scales by 1/c exactly
  const AffineData before = decompose_structure(ex.immersion, v2(0, 0));
  const AffineData after = decompose_structure(res.immersion, v2(0, 0));
  CHECK((after.h * res.c - before.h).cwiseAbs().maxCoeff() < 1e-12);
  const auto res2 = blaschke_normalize(res.immersion, GridSpec::box(2, 1.0, 5));
  CHECK(res2.c == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("blaschke_normalize: non-sphere transversal is rejected") {
  const auto ex = example("quartic", 2);
  GridSpec g = ex.chart_box;
  g.points_per_axis = 5;
  g.margin = 0.05;
  CHECK_THROWS_AS(blaschke_normalize(ex.immersion, g), NonConstantRescale);
}

TEST_CASE("conormal: hyperbola, Titeica, circle") {
  const auto hyp = example("hyperbola", 1);
  for (double s : {0.0, 0.9}) {
    const Vec nu = conormal(hyp.immersion, v1(s));
    CHECK(nu(0) == doctest::Approx(std::cosh(s)).epsilon(1e-12));
    CHECK(nu(1) == doctest::Approx(-std::sinh(s)).epsilon(1e-12));
  }

  const auto tit = example("titeica", 2);
  const Vec nu = conormal(tit.immersion, v2(0, 0));
  CHECK((nu - Vec::Constant(3, kC13)).cwiseAbs().maxCoeff() < 1e-12);

  const auto cir = example("ellipse", 1);
  const Vec nuc = conormal(cir.immersion, v1(0.3));
  CHECK(nuc(0) == doctest::Approx(-std::cos(0.3)).epsilon(1e-12));
  CHECK(nuc(1) == doctest::Approx(-std::sin(0.3)).epsilon(1e-12));

  const ConormalResiduals cr = conormal_residuals(tit.immersion, v2(0.2, -0.4));
  CHECK(cr.pairing < 1e-12);
  CHECK(cr.tangency < 1e-12);
  CHECK(cr.derivative < 1e-12);
}

TEST_CASE("pick_tensor: Titeica frozen components and vanishing trace") {
  const auto ex = example("titeica", 2);
  const PickData pd = pick_tensor(ex.immersion, v2(0, 0));
  // hand computation with h^{-1} = [[2,-1],[-1,2]]
  CHECK(std::abs(pd.C[0](0, 0)) < 1e-9);                          // C_uuu
  CHECK(pd.C[0](0, 1) == doctest::Approx(kC23).epsilon(1e-9));    // C_uuv
  CHECK(pd.C[0](1, 1) == doctest::Approx(kC23).epsilon(1e-9));    // C_uvv
  CHECK(std::abs(pd.C[1](1, 1)) < 1e-9);                          // C_vvv
  CHECK(std::abs(pd.trC(0)) < 1e-9);
  CHECK(std::abs(pd.trC(1)) < 1e-9);
  // Tr_h(C) = -2 tr(A(e_i))
  for (int i = 0; i < 2; ++i)
    CHECK(pd.trC(i) == doctest::Approx(-2.0 * pd.A[i].trace()).epsilon(1e-9));
  // C = -2 h(A(e_i)·,·) reproduction
  const AffineData ad = decompose_structure(ex.immersion, v2(0, 0));
  for (int i = 0; i < 2; ++i) {
    const Mat rhs = -2.0 * (ad.h * pd.A[i]);
    // h(A(e_i) e_j, e_k) has matrix (h A_i) with rows k, cols j
    CHECK((pd.C[i] - rhs.transpose()).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("pick_tensor: quadrics have C = 0") {
  for (const char* name : {"hyperbola", "ellipse"}) {
    const auto ex = example(name, 1);
    const PickData pd = pick_tensor(ex.immersion, v1(0.37));
    CHECK(pd.C[0].cwiseAbs().maxCoeff() < 1e-9);
  }
  const auto sph = example("sphere", 2);
  const PickData pd = pick_tensor(sph.immersion, v2(0.3, -0.2));
  for (int i = 0; i < 2; ++i) CHECK(pd.C[i].cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("is_proper_affine_sphere: verdicts across the suite") {
  const GridSpec g1 = GridSpec::box(1, 1.0, 9, 0.05);
  const GridSpec g2 = GridSpec::box(2, 1.0, 7, 0.1);

  CHECK(is_proper_affine_sphere(example("hyperbola", 1).immersion, g1, 1e-9)
            .proper);
  CHECK(is_proper_affine_sphere(example("titeica", 2).immersion, g2, 1e-9)
            .proper);
  CHECK(is_proper_affine_sphere(example("sphere", 2).immersion, g2, 1e-6)
            .proper);

  const auto qua = example("quartic", 2);
  GridSpec gq = qua.chart_box;
  gq.points_per_axis = 5;
  gq.margin = 0.05;
  const auto rep = is_proper_affine_sphere(qua.immersion, gq, 1e-5);
  CHECK_FALSE(rep.proper);
  CHECK(rep.sup_trC > 1e-2);  // regression baseline, see quartic notes
}

TEST_CASE("is_proper_affine_sphere: rejects non-centroaffine input") {
  auto imm = example("hyperbola", 1).immersion;
  imm.xi = ChartMap::analytic(1, 2, [](const std::vector<Jet2>& u) {
    return std::vector<Jet2>{Jet2::constant(1.0, 1), Jet2::constant(0.0, 1)};
  });
  CHECK_THROWS_AS(
      is_proper_affine_sphere(imm, GridSpec::box(1, 0.5, 3), 1e-6),
      NotCentroaffine);
}

TEST_CASE("dual_structure: shape-operator signs and compatibility") {
  // hyperbola: h_bar = h(S·,·) = -h
  const auto hyp = example("hyperbola", 1);
  const DualData dh = dual_structure(hyp.immersion, v1(0.25));
  CHECK(dh.h_bar(0, 0) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(dh.hbar_vs_hS < 1e-9);
  CHECK(dh.metric_pairing < 1e-7);
  CHECK(dh.levi_civita_avg < 1e-7);

  // circle: h_bar = +h
  const auto cir = example("ellipse", 1);
  const DualData dc = dual_structure(cir.immersion, v1(-0.1));
  CHECK(dc.h_bar(0, 0) == doctest::Approx(1.0).epsilon(1e-9));

  // Titeica: dual connection constant, Levi-Civita of h is flat
  const auto tit = example("titeica", 2);
  const DualData dt = dual_structure(tit.immersion, v2(0.1, 0.3));
  const DualData dt2 = dual_structure(tit.immersion, v2(-0.2, 0.0));
  for (int k = 0; k < 2; ++k)
    CHECK((dt.gamma_bar[k] - dt2.gamma_bar[k]).cwiseAbs().maxCoeff() < 1e-7);
  const auto lc = levi_civita_of_h(tit.immersion, v2(0.1, 0.3));
  for (const Mat& g : lc) CHECK(g.cwiseAbs().maxCoeff() < 1e-8);
  CHECK(dt.hbar_vs_hS < 1e-8);
  CHECK(dt.metric_pairing < 1e-7);
  CHECK(dt.levi_civita_avg < 1e-7);
}

TEST_CASE("pick_trace_derivative: zero on spheres, nonzero on quartic") {
  const auto tit = example("titeica", 2);
  const Vec X = v2(1.0, -0.5), Y = v2(0.3, 1.0);
  CHECK(std::abs(pick_trace_derivative(tit.immersion, v2(0.1, -0.2), X, Y)) <
        1e-6);

  const auto hyp = example("hyperbola", 1);
  CHECK(std::abs(pick_trace_derivative(hyp.immersion, v1(0.4), v1(1.0),
                                       v1(1.0))) < 1e-6);

  const auto qua = example("quartic", 2);
  const double val =
      pick_trace_derivative(qua.immersion, v2(0.7, 0.6), v2(1, 0), v2(0, 1));
  CHECK(std::abs(val) > 1e-3);  // generic-point baseline
}

TEST_CASE("identity residuals on a grid: Codazzi and total symmetries") {
  struct Case {
    const char* name;
    int n;
  };
  for (const Case c : {Case{"hyperbola", 1}, Case{"titeica", 2}}) {
    const auto ex = example(c.name, c.n);
    const GridSpec g = GridSpec::box(c.n, 1.0, c.n == 1 ? 9 : 5, 0.1);
    for (const Vec& p : grid_points(g)) {
      CHECK(codazzi_h_residual(ex.immersion, p) < 1e-7);
      CHECK(codazzi_S_residual(ex.immersion, p) < 1e-7);
      CHECK(shape_symmetry_residual(ex.immersion, p) < 1e-9);
      CHECK(pick_symmetry_residual(ex.immersion, p) < 1e-7);
    }
    CHECK(nabla_pick_symmetry_residual(ex.immersion, Vec::Zero(c.n)) < 1e-5);
  }
}

TEST_CASE("transversal rescale: verdict invariant, h scales exactly") {
  const auto ex = example("titeica", 2);
  const double c = 1.7;
  EquiaffineImmersion scaled = ex.immersion;
  scaled.xi = ex.immersion.xi.scaled(c);

  const AffineData a0 = decompose_structure(ex.immersion, v2(0.2, 0.1));
  const AffineData a1 = decompose_structure(scaled, v2(0.2, 0.1));
  CHECK((a1.h * c - a0.h).cwiseAbs().maxCoeff() < 1e-12);

  // the proper-affine-sphere verdict is unchanged (still centroaffine: cξ ∥ f)
  const GridSpec g = GridSpec::box(2, 1.0, 5, 0.1);
  CHECK(is_proper_affine_sphere(scaled, g, 1e-8).proper ==
        is_proper_affine_sphere(ex.immersion, g, 1e-8).proper);
}

TEST_CASE("example registry: dimension guards") {
  CHECK_THROWS_AS(example("hyperbola", 2), BadDimension);
  CHECK_THROWS_AS(example("sphere", 3), BadDimension);
  CHECK_THROWS_AS(example("nope", 1), UnknownExample);
}
