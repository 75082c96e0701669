// The inverse problem: from a lift of a non-degenerate Lagrangian immersion
// into the para-complex hyperbolic base, compute the 1-form α, certify its
// closedness, integrate to the horizontal gauge, and extract the dual
// centroaffine pair.
//
// Orientation convention: for a lift (F, N) = (e^μ ξ, e^{−μ} ν) of a
// horizontal pair, α(X) := N_*(X)(F) equals −dμ(X). The recovered gauge
// μ̂ := −∫α therefore estimates the applied scramble (μ̂ − μ = const), and
// the horizontal lift is (e^{−μ̂} F, e^{+μ̂} N).

#pragma once

#include "affq/grid.hpp"
#include "affq/sigma.hpp"
#include "affq/split.hpp"

namespace affq {

struct DegenerateLift : Error {
  explicit DegenerateLift(const std::string& w) : Error("degenerate lift: " + w) {}
};
struct NotClosed : Error {
  explicit NotClosed(double r)
      : Error("alpha not closed, residual=" + std::to_string(r) +
              " (input not Lagrangian)") {}
};
struct NotHorizontal : Error {
  explicit NotHorizontal(double r)
      : Error("lift not horizontal, residual=" + std::to_string(r)) {}
};

struct LiftedImmersion {
  ChartMap lift;  // chart into R^{2n+2}
  QuadricKind kind = QuadricKind::Sphere;
  Vec basepoint;

  int n() const { return lift.domain_dim(); }
};

// Validates quadric membership at the basepoint and a handful of samples.
LiftedImmersion make_lift(ChartMap chart, QuadricKind kind, Vec basepoint,
                          double membership_tol = 1e-10);

// α(e_i) = (derivative of the second slot along e_i) applied to the first
// slot; the horizontality defect of the lift itself.
Vec alpha_form(const LiftedImmersion& li, const Vec& p);

// ĝ(lift_* X, lift) — vanishes identically (derivative of the quadric
// relation); reported as a sanity residual.
double alpha_radial_residual(const LiftedImmersion& li, const Vec& p);

// max over the grid of the FD antisymmetry |∂_i α_j − ∂_j α_i|.
double closedness_residual(const LiftedImmersion& li, const GridSpec& grid);

struct GaugeFunction {
  GridSpec grid;
  std::vector<double> values;      // μ̂ at the grid nodes, basepoint-normalized
  Vec basepoint;
  double path_disagreement = 0.0;  // two independent staircases
};

// Integrates −α from the basepoint along axis-monotone staircases.
// Throws NotClosed when the closedness residual exceeds path_tol.
GaugeFunction integrate_gauge(const LiftedImmersion& li, const GridSpec& grid,
                              double path_tol = 1e-6);

// The gauge value at an arbitrary chart point (staircase quadrature).
double gauge_at(const LiftedImmersion& li, const Vec& p);

// Re-gauged lift (e^{−μ̂} F, e^{+μ̂} N); horizontal up to path_tol.
LiftedImmersion horizontal_lift(const LiftedImmersion& li,
                                const GridSpec& certification_grid,
                                double path_tol = 1e-6);

// Slots of a horizontal lift as centroaffine charts, with duality residuals.
struct CentroaffinePair {
  ChartMap f;   // first slot, a centroaffine immersion into R^{n+1}
  ChartMap nu;  // second slot, its conormal in the dual space
  double duality_pairing = 0.0;   // sup |ν(f) − 1|
  double duality_tangency = 0.0;  // sup |ν(f_* e_i)|
};
CentroaffinePair extract_centroaffine_pair(const LiftedImmersion& horizontal,
                                           const GridSpec& grid,
                                           double horizontality_tol = 1e-6);

}  // namespace affq
