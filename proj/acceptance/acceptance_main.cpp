// Acceptance suite: one pass/fail line per criterion, each with its pinned
// tolerance and runtime budget. Exit code = number of failed criteria.

#include "affq/boundary.hpp"
#include "affq/examples.hpp"
#include "affq/lift.hpp"
#include "affq/report.hpp"
#include "affq/sigma.hpp"
#include "affq/split.hpp"
#include "affq/symspace.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace affq;

namespace {

int g_failures = 0;

void criterion(const char* id, const char* label, double time_limit_s,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
    ok = false;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (secs > time_limit_s) {
    ok = false;
    detail += " [over time limit]";
  }
  std::printf("[%s] %s %-34s %s (%.2fs, limit %.0fs)\n", ok ? "PASS" : "FAIL",
              id, label, detail.c_str(), secs, time_limit_s);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

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

struct SuiteEntry {
  const char* name;
  int n;
};
const std::vector<SuiteEntry> kAffineSuite = {
    {"hyperbola", 1}, {"ellipse", 1}, {"titeica", 1}, {"titeica", 2},
    {"titeica", 3},   {"sphere", 2},  {"quartic", 2}};

GridSpec grid_for(const ExampleSpec& ex, int pts) {
  GridSpec g = ex.chart_box;
  g.points_per_axis = pts;
  g.margin = 0.1;
  return g;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");

  // ---------------------------------------------------------------- C1
  criterion("C1", "structure equations", 1.0, [](std::string& d) {
    double worst = 0.0;
    const auto hyp = example("hyperbola", 1);
    for (double s : {-0.8, 0.0, 0.6}) {
      const AffineData ad = decompose_structure(hyp.immersion, v1(s));
      worst = std::max({worst, std::abs(ad.gamma[0](0, 0)),
                        std::abs(ad.h(0, 0) - 1.0), std::abs(ad.S(0, 0) + 1.0),
                        std::abs(ad.tau(0))});
    }
    const auto cir = example("ellipse", 1);
    for (double s : {-0.5, 0.3}) {
      const AffineData ad = decompose_structure(cir.immersion, v1(s));
      worst = std::max({worst, std::abs(ad.gamma[0](0, 0)),
                        std::abs(ad.h(0, 0) - 1.0), std::abs(ad.S(0, 0) - 1.0),
                        std::abs(ad.tau(0))});
    }
    const auto tit = example("titeica", 2);
    const AffineData ad = decompose_structure(tit.immersion, v2(0, 0));
    Mat h_want(2, 2);
    h_want << 2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3;
    worst = std::max({worst, (ad.h - h_want).cwiseAbs().maxCoeff(),
                      std::abs(ad.gamma[0](0, 0) - 1.0 / 3),
                      std::abs(ad.gamma[1](0, 0) + 2.0 / 3)});
    d = "max residual " + fmt(worst) + " tol 1e-10";
    return worst <= 1e-10;
  });

  // ---------------------------------------------------------------- C2
  criterion("C2", "Codazzi + Pick invariants", 30.0, [](std::string& d) {
    double worst = 0.0;
    for (const auto& e : kAffineSuite) {
      const auto ex = example(e.name, e.n);
      const GridSpec g = grid_for(ex, 21);
      for (const Vec& p : grid_points(g)) {
        worst = std::max(worst, codazzi_h_residual(ex.immersion, p));
        worst = std::max(worst, pick_symmetry_residual(ex.immersion, p));
        worst = std::max(worst, shape_symmetry_residual(ex.immersion, p));
      }
      // Codazzi for S on a coarser lattice (it differentiates S per point)
      const GridSpec gs = grid_for(ex, e.n >= 3 ? 3 : 5);
      for (const Vec& p : grid_points(gs))
        worst = std::max(worst, codazzi_S_residual(ex.immersion, p));
    }
    d = "max residual " + fmt(worst) + " tol 1e-7";
    return worst <= 1e-7;
  });

  // ---------------------------------------------------------------- C3
  criterion("C3", "quadric immersion suite", 60.0, [](std::string& d) {
    double member = 0.0, match = 0.0, horiz = 0.0;
    for (const auto& e : kAffineSuite) {
      const auto ex = example(e.name, e.n);
      const GridSpec g = grid_for(ex, e.n >= 3 ? 5 : 9);
      for (SigmaKind kind : {SigmaKind::Plus, SigmaKind::Minus}) {
        const SigmaData sd = build_sigma(ex.immersion, kind, g);
        for (const Vec& p : grid_points(g)) {
          member = std::max(member, membership_residual(sd, p));
          match = std::max(match, induced_metric(sd, p).match_dual_metric);
          horiz = std::max({horiz, horizontality_residual(sd, p),
                            anti_invariance_residual(sd, p)});
        }
      }
    }
    // negative control: non-constant gauge scramble breaks horizontality
    const auto tit = example("titeica", 2);
    const SigmaData sd =
        build_sigma(tit.immersion, SigmaKind::Plus, grid_for(tit, 3));
    ChartMap scrambled = ChartMap::finite_difference(
        2, 6,
        [base = sd.sigma](const Vec& p) {
          return r_action(p(0), SplitVector::from_concat(base(p))).concat();
        },
        1e-4);
    const double control = horizontality_residual_chart(
        scrambled, QuadricKind::Sphere, v2(0.2, -0.1));
    d = "membership " + fmt(member) + " metric " + fmt(match) + " horiz " +
        fmt(horiz) + " control " + fmt(control);
    return member <= 1e-10 && match <= 1e-8 && horiz <= 1e-6 && control > 1e-2;
  });

  // ---------------------------------------------------------------- C4
  criterion("C4", "maximality biconditional", 120.0, [](std::string& d) {
    struct Case {
      const char* name;
      int n;
      bool expect;
    };
    double cross = 0.0;
    for (const Case c : {Case{"titeica", 2, true}, Case{"hyperbola", 1, true},
                         Case{"ellipse", 1, true}, Case{"sphere", 2, true},
                         Case{"quartic", 2, false}}) {
      const auto ex = example(c.name, c.n);
      const GridSpec g = grid_for(ex, c.n >= 2 ? 5 : 9);
      const SigmaData sd = build_sigma(ex.immersion, SigmaKind::Minus, g);
      const MaximalityReport rep = maximality_verdict(sd, g, 1e-4);
      cross = std::max(cross, rep.sup_cross_check);
      if (rep.maximal != c.expect || rep.dual_is_proper_sphere != c.expect) {
        d = std::string("verdict mismatch on ") + c.name;
        return false;
      }
    }
    d = "cross-check " + fmt(cross) + " tol 1e-6";
    return cross <= 1e-6;
  });

  // ---------------------------------------------------------------- C5
  criterion("C5", "inverse-problem round trip", 10.0, [](std::string& d) {
    const auto ex = example("scrambled-titeica", 2);
    const GridSpec g = grid_for(ex, 9);
    const LiftedImmersion li =
        make_lift(ex.quadric_chart, QuadricKind::Sphere, v2(0, 0));
    const GaugeFunction gf = integrate_gauge(li, g, 1e-9);
    const auto pts = grid_points(g);
    double mean = 0.0;
    std::vector<double> diff;
    for (size_t i = 0; i < pts.size(); ++i) {
      diff.push_back(gf.values[i] - ex.true_gauge(pts[i])(0));
      mean += diff.back();
    }
    mean /= diff.size();
    double var = 0.0;
    for (double x : diff) var += (x - mean) * (x - mean);
    var /= diff.size();

    GridSpec gc = grid_for(ex, 3);
    const LiftedImmersion hl = horizontal_lift(li, gc, 1e-9);
    const CentroaffinePair pair = extract_centroaffine_pair(hl, gc, 1e-6);
    const auto tit = example("titeica", 2);
    double lo = 1e300, hi = -1e300;
    for (const Vec& p : grid_points(gc)) {
      const Vec got = pair.f(p);
      const Vec want = tit.immersion.f(p);
      for (int c = 0; c < 3; ++c) {
        lo = std::min(lo, got(c) / want(c));
        hi = std::max(hi, got(c) / want(c));
      }
    }
    const double spread = hi - lo;
    const double duality =
        std::max(pair.duality_pairing, pair.duality_tangency);
    d = "var " + fmt(var) + " spread " + fmt(spread) + " duality " +
        fmt(duality);
    return var <= 1e-6 && spread <= 1e-7 && duality <= 1e-8;
  });

  // ---------------------------------------------------------------- C6
  criterion("C6", "Blaschke-lift harmonicity", 120.0, [](std::string& d) {
    double tension = 0.0, blocks = 0.0, gap = 0.0;
    for (const SuiteEntry e :
         {SuiteEntry{"hyperbola", 1}, SuiteEntry{"titeica", 2},
          SuiteEntry{"titeica", 3}}) {
      const auto ex = example(e.name, e.n);
      const GridSpec g = grid_for(ex, e.n >= 3 ? 21 : 9);
      const HarmonicityReport hr = harmonicity_report(ex.immersion, g, 1e-4);
      tension = std::max(tension, hr.sup_tension);
      blocks = std::max(blocks, hr.sup_horizontality);
      gap = std::max(gap, hr.sup_pipeline_gap);
      if (!hr.harmonic) {
        d = std::string("not harmonic: ") + e.name;
        return false;
      }
    }
    const auto qua = example("quartic", 2);
    const HarmonicityReport hq =
        harmonicity_report(qua.immersion, grid_for(qua, 3), 1e-4, false);
    d = "tension " + fmt(tension) + " blocks " + fmt(blocks) + " gap " +
        fmt(gap) + " control " + fmt(hq.sup_tension);
    return tension <= 1e-4 && blocks <= 1e-8 && gap <= 1e-4 &&
           hq.sup_tension >= 1e-2;
  });

  // ---------------------------------------------------------------- C7
  criterion("C7", "iota/Phi algebra", 1.0, [](std::string& d) {
    Rng rng(20260810);
    double worst = 0.0;
    const Mat B = b_matrix(3);
    for (int rep = 0; rep < 100; ++rep) {
      const Mat M = rng.sl_matrix(3);
      const Mat Q = rng.spd_unit_det(3);
      const Mat X = iota_embed(M);
      worst =
          std::max(worst, (X.transpose() * B * X - B).cwiseAbs().maxCoeff());
      worst = std::max(worst, equivariance_residual(M, Q));
    }
    d = "max residual " + fmt(worst) + " tol 1e-12";
    return worst <= 1e-12;
  });

  // ---------------------------------------------------------------- C8
  criterion("C8", "appendices (para-Sasaki, contact)", 60.0,
            [](std::string& d) {
              Rng rng(80706);
              double axioms = 0.0, nijenhuis = 0.0, floor_min = 1e300;
              for (int rep = 0; rep < 100; ++rep) {
                const QuadricPoint q =
                    random_quadric_point(rng, 2, QuadricKind::Sphere);
                const ParaSasakiFrame fr(q);
                const Vec X = random_tangent(rng, q);
                const Vec Y = random_tangent(rng, q);
                axioms = std::max(axioms, fr.phi_endo(fr.zeta()).norm());
                axioms = std::max(axioms, std::abs(fr.eta(fr.phi_endo(X))));
                axioms = std::max(axioms, (fr.phi_endo(fr.phi_endo(X)) -
                                           (X - fr.eta(X) * fr.zeta()))
                                              .norm());
                axioms = std::max(
                    axioms, std::abs(fr.g(fr.phi_endo(X), fr.phi_endo(Y)) +
                                     fr.g(X, Y) - fr.eta(X) * fr.eta(Y)));
                axioms = std::max(
                    axioms, std::abs(fr.deta(X, Y) - fr.g(X, fr.phi_endo(Y))));
                nijenhuis = std::max(nijenhuis, nijenhuis_residual(q, X, Y));
                floor_min = std::min(
                    floor_min,
                    std::abs(contact_condition(q, tangent_basis(q))));
              }
              d = "axioms " + fmt(axioms) + " nijenhuis " + fmt(nijenhuis) +
                  " floor " + fmt(floor_min);
              // recorded floor for orthonormal frames at n = 2: 1e-3
              return axioms <= 1e-5 && nijenhuis <= 1e-5 && floor_min >= 1e-3;
            });

  // ---------------------------------------------------------------- C9
  criterion("C9", "boundary-ray sampling", 120.0, [](std::string& d) {
    double lam = 0.0, flow_inv = 0.0, flow_lim = 0.0;
    for (const SuiteEntry e :
         {SuiteEntry{"hyperbola", 1}, SuiteEntry{"titeica", 1},
          SuiteEntry{"titeica", 2}, SuiteEntry{"titeica", 3}}) {
      const auto ex = example(e.name, e.n);
      const GridSpec g = grid_for(ex, 3);
      const SigmaData sd = build_sigma(ex.immersion, SigmaKind::Minus, g);
      const ConvexCone cone = ex.manifest.boundary_cone == "segment"
                                  ? ConvexCone::segment()
                                  : ConvexCone::orthant(e.n + 1);
      std::vector<Vec> dirs;
      if (e.n == 1) {
        dirs = {v1(1), v1(-1)};
      } else if (e.n == 2) {
        dirs = {v2(1, 0), v2(0, 1), v2(1, 1), v2(-1, -1), v2(2, 1)};
      } else {
        Vec a(3), b(3), c(3);
        a << 1, 0, 0;
        b << 1, 1, 1;
        c << 2, 1, 0;
        dirs = {a, b, c};
      }
      for (const Vec& w : dirs) {
        auto ray = [&](double s) { return Vec(s * w); };
        const RayLimit rl = projective_limit(sd.sigma, ray, 10.0, &cone);
        lam = std::max({lam, rl.ein_residual, rl.lambda.max()});
        for (double t : {-1.0, 0.0, 1.0}) {
          const RayLimit rt =
              projective_limit(flowed_chart(sd.sigma, t), ray, 10.0, &cone);
          flow_inv =
              std::max(flow_inv, pair_proj_distance(rt.limit, rl.limit));
        }
      }
      const FlowBoundary fb =
          flow_boundary(sd.sigma, Vec(Vec::Zero(e.n)), 20.0, &cone);
      flow_lim = std::max({flow_lim, fb.plus_residual, fb.minus_residual});
    }
    d = "lambda " + fmt(lam) + " flow-inv " + fmt(flow_inv) + " flow-lims " +
        fmt(flow_lim);
    return lam <= 1e-3 && flow_inv <= 1e-6 && flow_lim <= 1e-6;
  });

  // ---------------------------------------------------------------- C10
  criterion("C10", "determinism (byte-identical reports)", 60.0,
            [](std::string& d) {
              const std::string base = AFFQ_CLI_PATH;
              const std::string flags =
                  " verify --example titeica --n 2 --grid 7 --seed 2026 "
                  "--report ";
              const std::string ra = "/tmp/affq_acc_a.json";
              const std::string rb = "/tmp/affq_acc_b.json";
              if (std::system((base + flags + ra + " > /dev/null").c_str()) !=
                  0) {
                d = "first run failed";
                return false;
              }
              if (std::system((base + flags + rb + " > /dev/null").c_str()) !=
                  0) {
                d = "second run failed";
                return false;
              }
              std::ifstream fa(ra, std::ios::binary), fb(rb, std::ios::binary);
              std::stringstream sa, sb;
              sa << fa.rdbuf();
              sb << fb.rdbuf();
              std::remove(ra.c_str());
              std::remove(rb.c_str());
              const bool same = sa.str() == sb.str() && sa.str().size() > 100;
              d = same ? "byte-identical" : "reports differ";
              return same;
            });

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
