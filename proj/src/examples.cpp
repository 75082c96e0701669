#include "affq/examples.hpp"

#include <cmath>

namespace affq {

namespace {

using JetVec = std::vector<Jet2>;

ExampleSpec hyperbola(int n) {
  if (n != 1) throw BadDimension("hyperbola", n);
  ExampleSpec ex;
  ex.name = "hyperbola";
  ex.n = 1;
  ex.immersion.f = ChartMap::analytic(1, 2, [](const JetVec& u) {
    return JetVec{cosh(u[0]), sinh(u[0])};
  });
  ex.immersion.xi = ex.immersion.f;
  ex.immersion.nu = ChartMap::analytic(1, 2, [](const JetVec& u) {
    return JetVec{cosh(u[0]), -sinh(u[0])};
  });
  ex.manifest.centroaffine = true;
  ex.manifest.proper_affine_sphere = true;
  ex.manifest.maximal = true;
  ex.manifest.metric_pos = 1;
  ex.manifest.shape_sign = -1;
  ex.manifest.boundary_cone = "segment";
  ex.chart_box = GridSpec::box(1, 1.0, 21);
  return ex;
}

ExampleSpec ellipse(int n, double a, double b) {
  if (n != 1) throw BadDimension("ellipse", n);
  ExampleSpec ex;
  ex.name = "ellipse";
  ex.n = 1;
  ex.immersion.f = ChartMap::analytic(1, 2, [a, b](const JetVec& u) {
    return JetVec{a * cos(u[0]), b * sin(u[0])};
  });
  ex.immersion.xi = ex.immersion.f.scaled(-1.0);
  ex.immersion.nu = ChartMap::analytic(1, 2, [a, b](const JetVec& u) {
    return JetVec{(-1.0 / a) * cos(u[0]), (-1.0 / b) * sin(u[0])};
  });
  ex.manifest.centroaffine = true;
  ex.manifest.proper_affine_sphere = true;
  ex.manifest.maximal = true;
  ex.manifest.metric_pos = 1;
  ex.manifest.shape_sign = +1;
  ex.chart_box = GridSpec::box(1, 1.0, 21);
  return ex;
}

// f(u) = (e^{u_1}, …, e^{u_n}, e^{−Σu}),  ν = (1/(n+1))(e^{−u_1}, …, e^{Σu})
ChartMap titeica_f(int n) {
  return ChartMap::analytic(n, n + 1, [n](const JetVec& u) {
    JetVec out;
    out.reserve(n + 1);
    Jet2 s = Jet2::constant(0.0, n);
    for (int i = 0; i < n; ++i) {
      out.push_back(exp(u[i]));
      s = s + u[i];
    }
    out.push_back(exp(-s));
    return out;
  });
}
ChartMap titeica_nu(int n) {
  return ChartMap::analytic(n, n + 1, [n](const JetVec& u) {
    JetVec out;
    out.reserve(n + 1);
    Jet2 s = Jet2::constant(0.0, n);
    const double w = 1.0 / (n + 1);
    for (int i = 0; i < n; ++i) {
      out.push_back(w * exp(-u[i]));
      s = s + u[i];
    }
    out.push_back(w * exp(s));
    return out;
  });
}

ExampleSpec titeica(int n) {
  if (n < 1 || n > 4) throw BadDimension("titeica", n);
  ExampleSpec ex;
  ex.name = "titeica";
  ex.n = n;
  ex.immersion.f = titeica_f(n);
  ex.immersion.xi = ex.immersion.f;
  ex.immersion.nu = titeica_nu(n);
  ex.manifest.centroaffine = true;
  ex.manifest.proper_affine_sphere = true;
  ex.manifest.maximal = true;
  ex.manifest.metric_pos = n;
  ex.manifest.shape_sign = -1;
  ex.manifest.boundary_cone = "orthant";
  ex.chart_box = GridSpec::box(n, 1.0, 21);
  return ex;
}

ExampleSpec sphere(int n) {
  if (n != 2) throw BadDimension("sphere", n);
  ExampleSpec ex;
  ex.name = "sphere";
  ex.n = 2;
  ex.immersion.f = ChartMap::analytic(2, 3, [](const JetVec& u) {
    const Jet2 s = pow(1.0 + u[0] * u[0] + u[1] * u[1], -0.5);
    return JetVec{u[0] * s, u[1] * s, s};
  });
  ex.immersion.xi = ex.immersion.f.scaled(-1.0);
  // ν = −f^T works: ν(−f) = |f|² = 1 and ν(f_* X) = −½ ∂_X |f|² = 0
  ex.immersion.nu = ex.immersion.f.scaled(-1.0);
  ex.manifest.centroaffine = true;
  ex.manifest.proper_affine_sphere = true;
  ex.manifest.maximal = true;
  ex.manifest.metric_pos = 2;
  ex.manifest.shape_sign = +1;
  ex.chart_box = GridSpec::box(2, 1.0, 21);
  return ex;
}

ExampleSpec quartic(int n, double step) {
  if (n != 2) throw BadDimension("quartic", n);
  ExampleSpec ex;
  ex.name = "quartic";
  ex.n = 2;
  // radial parametrization p -> p / (x^4+y^4+z^4)^{1/4}, FD jets
  ex.immersion.f = ChartMap::finite_difference(
      2, 3,
      [](const Vec& u) {
        Vec w(3);
        w << u(0), u(1), 1.0;
        const double q = std::pow(u(0), 4) + std::pow(u(1), 4) + 1.0;
        return Vec(w / std::pow(q, 0.25));
      },
      step);  // default keeps the h²-roundoff floor out of the jets
  ex.immersion.xi = ex.immersion.f.scaled(-1.0);
  ex.manifest.centroaffine = true;
  ex.manifest.proper_affine_sphere = false;
  ex.manifest.maximal = false;
  ex.manifest.metric_pos = 2;
  ex.manifest.shape_sign = +1;
  ex.manifest.expects_analytic_jets = false;
  // the quartic body has flat points on the coordinate axes (h degenerates
  // at u = 0 or v = 0); keep the chart away from them
  ex.chart_box.lo = Vec::Constant(2, 0.35);
  ex.chart_box.hi = Vec::Constant(2, 1.15);
  ex.chart_box.points_per_axis = 21;
  return ex;
}

// (u, t) -> Psi_t(sigma^-(u)) = (−e^t f(u), e^{−t} ν(u)), a chart into V
ExampleSpec pseudoflat(int n) {
  if (n < 1 || n > 3) throw BadDimension("pseudoflat", n);
  ExampleSpec ex;
  ex.name = "pseudoflat";
  ex.n = n;
  ex.kind = ExampleKind::QuadricChart;
  ex.quadric_sign = -1;
  const int d = n + 1;  // chart dimension (u_1..u_n, t)
  ex.quadric_chart = ChartMap::analytic(d, 2 * (n + 1), [n](const JetVec& u) {
    JetVec out;
    out.reserve(2 * (n + 1));
    const Jet2& t = u[n];
    Jet2 s = Jet2::constant(0.0, n + 1);
    for (int i = 0; i < n; ++i) s = s + u[i];
    const double w = 1.0 / (n + 1);
    for (int i = 0; i < n; ++i) out.push_back(-exp(t) * exp(u[i]));
    out.push_back(-exp(t) * exp(-s));
    for (int i = 0; i < n; ++i) out.push_back(w * exp(-t) * exp(-u[i]));
    out.push_back(w * exp(-t) * exp(s));
    return out;
  });
  ex.manifest.maximal = true;
  ex.manifest.flat_induced_metric = true;
  ex.manifest.metric_pos = n + 1;
  ex.chart_box = GridSpec::box(d, 1.0, 9);
  return ex;
}

// Titeica sigma^+ with the non-constant gauge μ(u, v) = sin(u)·cos(v)
ExampleSpec scrambled_titeica(int n) {
  if (n != 2) throw BadDimension("scrambled-titeica", n);
  ExampleSpec ex;
  ex.name = "scrambled-titeica";
  ex.n = 2;
  ex.kind = ExampleKind::Lift;
  ex.quadric_sign = +1;
  ex.quadric_chart = ChartMap::analytic(2, 6, [](const JetVec& u) {
    const Jet2 mu = sin(u[0]) * cos(u[1]);
    const Jet2 em = exp(mu), emi = exp(-mu);
    const Jet2 s = u[0] + u[1];
    JetVec out;
    out.push_back(em * exp(u[0]));
    out.push_back(em * exp(u[1]));
    out.push_back(em * exp(-s));
    out.push_back(emi * (1.0 / 3.0) * exp(-u[0]));
    out.push_back(emi * (1.0 / 3.0) * exp(-u[1]));
    out.push_back(emi * (1.0 / 3.0) * exp(s));
    return out;
  });
  ex.true_gauge = ChartMap::analytic(2, 1, [](const JetVec& u) {
    return JetVec{sin(u[0]) * cos(u[1])};
  });
  ex.manifest.maximal = true;
  ex.chart_box = GridSpec::box(2, 1.0, 21);
  return ex;
}

double param(const std::map<std::string, double>& params, const std::string& k,
             double fallback) {
  auto it = params.find(k);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

ExampleSpec example(const std::string& name, int n,
                    const std::map<std::string, double>& params) {
  if (name == "hyperbola") return hyperbola(n);
  if (name == "ellipse")
    return ellipse(n, param(params, "a", 1.0), param(params, "b", 1.0));
  if (name == "titeica") return titeica(n);
  if (name == "sphere") return sphere(n);
  if (name == "quartic") return quartic(n, param(params, "step", 4e-3));
  if (name == "pseudoflat") return pseudoflat(n);
  if (name == "scrambled-titeica") return scrambled_titeica(n);
  throw UnknownExample(name);
}

std::vector<std::string> example_names() {
  return {"hyperbola", "ellipse",    "titeica",
          "sphere",    "quartic",    "pseudoflat",
          "scrambled-titeica"};
}

}  // namespace affq
