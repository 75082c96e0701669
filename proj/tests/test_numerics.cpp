#include "doctest.h"

#include "affq/grid.hpp"
#include "affq/numerics.hpp"

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

ChartMap hyperbola_chart() {
  return ChartMap::analytic(1, 2, [](const std::vector<Jet2>& u) {
    return std::vector<Jet2>{cosh(u[0]), sinh(u[0])};
  });
}

}  // namespace

TEST_CASE("jet: analytic hyperbola at 0") {
  const Jet j = hyperbola_chart().jet(v1(0.0), 2);
  CHECK(j.value(0) == doctest::Approx(1.0));
  CHECK(j.value(1) == doctest::Approx(0.0));
  CHECK(j.jac(0, 0) == doctest::Approx(0.0));
  CHECK(j.jac(1, 0) == doctest::Approx(1.0));
  // cosh'' = cosh, sinh'' = sinh at 0
  CHECK(j.hess[0](0, 0) == doctest::Approx(1.0));
  CHECK(j.hess[1](0, 0) == doctest::Approx(0.0));
}

TEST_CASE("jet: exp surface at origin") {
  auto f = ChartMap::analytic(2, 3, [](const std::vector<Jet2>& u) {
    return std::vector<Jet2>{exp(u[0]), exp(u[1]), exp(-u[0] - u[1])};
  });
  const Jet j = f.jet(v2(0, 0), 1);
  CHECK(j.value.isApprox(Vec::Ones(3)));
  Vec c0(3), c1(3);
  c0 << 1, 0, -1;
  c1 << 0, 1, -1;
  CHECK((j.jac.col(0) - c0).norm() == doctest::Approx(0.0));
  CHECK((j.jac.col(1) - c1).norm() == doctest::Approx(0.0));
}

TEST_CASE("jet: FD second derivative of s^3 at s=1") {
  auto f = ChartMap::finite_difference(
      1, 1, [](const Vec& p) { return v1(p(0) * p(0) * p(0)); }, 1e-3);
  const Jet j = f.jet(v1(1.0), 2);
  CHECK(std::abs(j.hess[0](0, 0) - 6.0) < 1e-8);
}

TEST_CASE("jet: FD convergence order >= 2 (log-log slope)") {
  // oracle: analytic derivatives of exp at 0.3
  const double p = 0.3;
  auto make = [&](double h) {
    return ChartMap::finite_difference(
        1, 1, [](const Vec& q) { return v1(std::exp(q(0))); }, h);
  };
  std::vector<double> steps = {0.2, 0.1, 0.05};
  std::vector<double> errs;
  for (double h : steps) {
    const Jet j = make(h).jet(v1(p), 2);
    errs.push_back(std::abs(j.hess[0](0, 0) - std::exp(p)));
  }
  const double slope01 = std::log(errs[0] / errs[1]) / std::log(2.0);
  const double slope12 = std::log(errs[1] / errs[2]) / std::log(2.0);
  CHECK(slope01 >= 2.0);
  CHECK(slope12 >= 2.0);
}

TEST_CASE("jet: analytic and FD modes agree to O(step^2)") {
  auto analytic = ChartMap::analytic(2, 2, [](const std::vector<Jet2>& u) {
    return std::vector<Jet2>{sin(u[0]) * cos(u[1]), exp(u[0] * u[1])};
  });
  const double h = 1e-3;
  auto fd = ChartMap::finite_difference(
      2, 2,
      [&](const Vec& q) {
        Vec r(2);
        r << std::sin(q(0)) * std::cos(q(1)), std::exp(q(0) * q(1));
        return r;
      },
      h);
  const Vec p = v2(0.4, -0.7);
  const Jet ja = analytic.jet(p, 2);
  const Jet jf = fd.jet(p, 2);
  CHECK((ja.jac - jf.jac).cwiseAbs().maxCoeff() < h * h);
  for (int c = 0; c < 2; ++c)
    CHECK((ja.hess[c] - jf.hess[c]).cwiseAbs().maxCoeff() < h * h);
}

TEST_CASE("solve: identity, Titeica frame, singular") {
  Mat I = Mat::Identity(3, 3);
  Vec b(3);
  b << 0.3, -1.2, 9.0;
  CHECK((solve(I, b) - b).norm() == doctest::Approx(0.0));

  // hand Gauss elimination oracle: the Titeica f_uu decomposition
  Mat A(3, 3);
  A << 1, 0, 1, 0, 1, 1, -1, -1, 1;
  Vec rhs(3);
  rhs << 1, 0, 1;
  const Vec x = solve(A, rhs);
  CHECK(x(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(x(1) == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(x(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  Mat R1(2, 2);  // rank 1
  R1 << 1, 2, 2, 4;
  CHECK_THROWS_AS(solve(R1, v2(1, 0)), SingularMatrix);
}

TEST_CASE("solve . multiply = identity on random well-conditioned matrices") {
  Rng rng(1234);
  for (int n = 2; n <= 8; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      Mat A = rng.matrix(n, n) + 3.0 * Mat::Identity(n, n);
      Vec x = rng.vector(n);
      const Vec got = solve(A, Vec(A * x));
      CHECK((got - x).norm() < 1e-10 * (1.0 + x.norm()));
    }
  }
}

TEST_CASE("signature_of: split form, identity, degenerate diag") {
  for (int n = 0; n <= 3; ++n) {
    const int d = n + 1;
    Mat B = Mat::Zero(2 * d, 2 * d);
    B.topRightCorner(d, d) = 0.5 * Mat::Identity(d, d);
    B.bottomLeftCorner(d, d) = 0.5 * Mat::Identity(d, d);
    const Signature s = signature_of(B);
    CHECK(s.positive == d);
    CHECK(s.negative == d);
    CHECK(s.zero == 0);
  }
  const Signature id = signature_of(Mat::Identity(5, 5));
  CHECK(id.positive == 5);
  Mat D = Mat::Zero(3, 3);
  D.diagonal() << 1, -1, 0;
  const Signature sd = signature_of(D);
  CHECK(sd.positive == 1);
  CHECK(sd.negative == 1);
  CHECK(sd.zero == 1);
}

TEST_CASE("signature_of: invariant under congruence") {
  Rng rng(99);
  for (int n = 2; n <= 8; ++n) {
    Mat G = rng.matrix(n, n);
    G = Mat(0.5 * (G + G.transpose()));
    const Signature s0 = signature_of(G);
    for (int rep = 0; rep < 5; ++rep) {
      Mat P = rng.matrix(n, n) + 2.0 * Mat::Identity(n, n);
      const Signature s1 = signature_of(Mat(P.transpose() * G * P));
      CHECK(s0.positive == s1.positive);
      CHECK(s0.negative == s1.negative);
      CHECK(s0.zero == s1.zero);
    }
  }
}

TEST_CASE("signature_of rejects asymmetric input") {
  Mat A(2, 2);
  A << 0, 1, 0, 0;
  CHECK_THROWS_AS(signature_of(A), NotSymmetric);
}

namespace {
ChartMap linear_field(const Mat& A) {
  const int n = static_cast<int>(A.rows());
  return ChartMap::finite_difference(
      n, n, [A](const Vec& p) { return Vec(A * p); }, 1e-3);
}
}  // namespace

TEST_CASE("lie_bracket: coordinate fields, symbolic oracle, matrix commutator") {
  // coordinate fields commute
  auto X = ChartMap::finite_difference(2, 2, [](const Vec&) {
    Vec e(2);
    e << 1, 0;
    return e;
  });
  auto Y = ChartMap::finite_difference(2, 2, [](const Vec&) {
    Vec e(2);
    e << 0, 1;
    return e;
  });
  CHECK(lie_bracket(X, Y, v2(0.3, 0.4)).norm() < 1e-12);

  // [x2 d1, x1 d2] = x2 d2 - x1 d1, at (1,1): (-1, 1)
  auto Xa = ChartMap::analytic(2, 2, [](const std::vector<Jet2>& u) {
    return std::vector<Jet2>{u[1], Jet2::constant(0.0, 2)};
  });
  auto Ya = ChartMap::analytic(2, 2, [](const std::vector<Jet2>& u) {
    return std::vector<Jet2>{Jet2::constant(0.0, 2), u[0]};
  });
  const Vec br = lie_bracket(Xa, Ya, v2(1, 1));
  CHECK(br(0) == doctest::Approx(-1.0));
  CHECK(br(1) == doctest::Approx(1.0));

  // linear fields: [Av, Bv] = (BA - AB) v
  Rng rng(7);
  Mat A = rng.matrix(3, 3), B = rng.matrix(3, 3);
  const Vec p = rng.vector(3);
  const Vec want = (B * A - A * B) * p;
  CHECK((lie_bracket(linear_field(A), linear_field(B), p) - want).norm() < 1e-8);
}

TEST_CASE("lie_bracket: antisymmetry and Jacobi on random polynomial fields") {
  Rng rng(2024);
  auto poly_field = [&]() {
    Mat L = rng.matrix(2, 2);
    Mat Q0 = rng.matrix(2, 2);
    Mat Q1 = rng.matrix(2, 2);
    return ChartMap::analytic(2, 2, [L, Q0, Q1](const std::vector<Jet2>& u) {
      std::vector<Jet2> out;
      for (int c = 0; c < 2; ++c) {
        const Mat& Q = c == 0 ? Q0 : Q1;
        Jet2 s = L(c, 0) * u[0] + L(c, 1) * u[1];
        s = s + Q(0, 0) * u[0] * u[0] + Q(1, 1) * u[1] * u[1] +
            Q(0, 1) * u[0] * u[1];
        out.push_back(s);
      }
      return out;
    });
  };
  auto X = poly_field();
  auto Y = poly_field();
  auto Z = poly_field();
  const Vec p = v2(0.2, -0.3);

  CHECK((lie_bracket(X, Y, p) + lie_bracket(Y, X, p)).norm() < 1e-12);

  // Jacobi with FD wrapping of the inner brackets
  auto wrap = [&](const ChartMap& U, const ChartMap& V) {
    return ChartMap::finite_difference(
        2, 2, [U, V](const Vec& q) { return lie_bracket(U, V, q); }, 1e-3);
  };
  const Vec jac = lie_bracket(X, wrap(Y, Z), p) + lie_bracket(Y, wrap(Z, X), p) +
                  lie_bracket(Z, wrap(X, Y), p);
  CHECK(jac.norm() < 1e-6);
}

TEST_CASE("christoffel: constant metric, round sphere polar chart") {
  MetricField flat(2, [](const Vec&) {
    Mat g(2, 2);
    g << 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0;
    return g;
  });
  const auto gamma = christoffel(flat, v2(0.1, 0.2));
  for (const Mat& gk : gamma) CHECK(gk.cwiseAbs().maxCoeff() < 1e-10);

  // round sphere, chart (theta, phi), g = diag(1, sin^2 theta)
  MetricField sphere(2, [](const Vec& p) {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = std::sin(p(0)) * std::sin(p(0));
    return g;
  });
  const Vec p = v2(1.1, 0.4);
  const auto gs = christoffel(sphere, p);
  // Gamma^theta_{phi phi} = -sin(theta) cos(theta)
  CHECK(std::abs(gs[0](1, 1) + std::sin(1.1) * std::cos(1.1)) < 1e-6);
  // Gamma^phi_{theta phi} = cot(theta)
  CHECK(std::abs(gs[1](0, 1) - std::cos(1.1) / std::sin(1.1)) < 1e-6);
  CHECK_THROWS_AS(christoffel(sphere, v2(0.0, 0.0)), DegenerateMetric);
}

TEST_CASE("riemann_sup_norm: flat vs round") {
  MetricField flat(2, [](const Vec&) {
    Mat g(2, 2);
    g << 2, 1, 1, 2;
    return g;
  });
  CHECK(riemann_sup_norm(flat, v2(0.3, 0.1)) < 1e-8);

  MetricField sphere(2, [](const Vec& p) {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = std::sin(p(0)) * std::sin(p(0));
    return g;
  });
  CHECK(riemann_sup_norm(sphere, v2(1.1, 0.4)) > 0.1);
}

TEST_CASE("integrate_1form: exact forms and loops") {
  // alpha = d(x^2) along 0 -> 1 gives 1
  auto alpha = [](const Vec& p) { return v1(2.0 * p(0)); };
  double gap = 0.0;
  const double val = integrate_1form(alpha, {v1(0.0), v1(1.0)}, &gap);
  CHECK(val == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gap < Tol::quad);

  // exact form around a closed square loop -> 0 (Stokes)
  auto df = [](const Vec& p) {
    Vec a(2);
    a << std::cos(p(0)) * std::exp(p(1)), std::sin(p(0)) * std::exp(p(1));
    return a;
  };
  const std::vector<Vec> loop = {v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1),
                                 v2(0, 0)};
  CHECK(std::abs(integrate_1form(df, loop)) < Tol::quad);
}

TEST_CASE("gram_schmidt: indefinite pairing with pivoting") {
  Rng rng(5);
  Mat g = Mat::Zero(4, 4);
  g.diagonal() << 1, 1, -1, -1;
  Mat V = rng.matrix(4, 4) + Mat::Identity(4, 4);
  const OrthoFrame fr = gram_schmidt(V, g);
  int pos = 0, neg = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double want = (i == j) ? fr.signs[i] : 0.0;
      CHECK(std::abs(fr.basis.col(i).dot(g * fr.basis.col(j)) - want) < 1e-10);
    }
    (fr.signs[i] > 0 ? pos : neg)++;
  }
  CHECK(pos == 2);
  CHECK(neg == 2);

  // degenerate pairing on the span must throw
  Mat gdeg = Mat::Zero(2, 2);
  gdeg(0, 0) = 1.0;
  Mat W(2, 2);
  W << 0, 0, 1, 2;  // span = e2 direction only, isotropic for gdeg
  CHECK_THROWS_AS(gram_schmidt(W, gdeg), DegenerateMetric);
}

TEST_CASE("grid: margins and counts") {
  GridSpec g = GridSpec::box(2, 1.0, 5, 0.1);
  const auto pts = grid_points(g);
  CHECK(pts.size() == 25);
  for (const Vec& p : pts) {
    CHECK(p.cwiseAbs().maxCoeff() <= 0.9 + 1e-12);
  }
}
