// The maps σ± = (±ξ, ν) into the quadrics: membership and rank certificates,
// induced metric against ±h(S·,·), horizontality and φ-anti-invariance,
// second fundamental form and mean curvature (direct normal projection and
// the dual-Pick-trace formula), maximality, and the projection to the
// para-complex hyperbolic base.

#pragma once

#include "affq/affine.hpp"
#include "affq/split.hpp"

namespace affq {

struct DegenerateShapeOperator : Error {
  explicit DegenerateShapeOperator(double d)
      : Error("det(S) = " + std::to_string(d) + "; sigma is degenerate") {}
};
struct RankDeficient : Error {
  explicit RankDeficient(double sv)
      : Error("sigma rank deficient, smallest singular value " +
              std::to_string(sv)) {}
};
struct DegenerateInducedMetric : Error {
  explicit DegenerateInducedMetric(double d)
      : Error("induced metric degenerate, det=" + std::to_string(d)) {}
};

enum class SigmaKind : int { Plus = +1, Minus = -1 };
inline QuadricKind quadric_of(SigmaKind k) {
  return k == SigmaKind::Plus ? QuadricKind::Sphere : QuadricKind::Hyperbolic;
}

struct SigmaData {
  EquiaffineImmersion imm;
  SigmaKind kind = SigmaKind::Plus;
  ChartMap sigma;  // chart into R^{2n+2}
  int n = 0;

  QuadricKind quadric() const { return quadric_of(kind); }
};

// Builds σ = (±ξ, ν). Checks det S ≠ 0 at the chart-box center, quadric
// membership and the rank certificate at the given samples.
SigmaData build_sigma(const EquiaffineImmersion& imm, SigmaKind kind,
                      const GridSpec& samples, double rank_floor = 1e-8);

// Induced metric g_T(i,j) = ĝ(σ_* e_i, σ_* e_j) and its match to the dual
// affine metric ±h(S·,·).
struct InducedMetric {
  Mat g;
  Signature signature;
  double match_dual_metric = 0.0;  // componentwise |g ∓ h(S·,·)|
};
InducedMetric induced_metric(const SigmaData& sd, const Vec& p);

// Residuals at p (all should vanish for σ± of an equiaffine pair):
double horizontality_residual(const SigmaData& sd, const Vec& p);
double anti_invariance_residual(const SigmaData& sd, const Vec& p);
double radial_residual(const SigmaData& sd, const Vec& p);
double membership_residual(const SigmaData& sd, const Vec& p);

// Chart-level variants used by the inverse problem and negative controls.
double horizontality_residual_chart(const ChartMap& sigma, QuadricKind kind,
                                    const Vec& p);
double anti_invariance_residual_chart(const ChartMap& sigma, const Vec& p);
double radial_residual_chart(const ChartMap& sigma, const Vec& p);

// Horizontal part of the induced metric of a chart into V: the metric the
// projected immersion carries in the para-complex hyperbolic base.
Mat base_induced_metric(const ChartMap& sigma, const Vec& p);

// Second fundamental form by ĝ-orthogonal projection of the ambient Hessian
// onto the normal bundle, and the mean curvature (1/n)·tr_{g_T}(II).
struct SecondFundamental {
  Mat normal_basis;            // (2n+2) × codim, Euclidean-orthonormal
  std::vector<Vec> II;         // row-major (i,j) -> ambient normal vector
  Vec mean_curvature;          // ambient vector
  double decomposition_residual = 0.0;
  double phat_sigma_component = 0.0;  // max |ĝ(II_ij, P̂σ)|; 0 for σ±
  int n = 0;

  const Vec& II_at(int i, int j) const { return II[i * n + j]; }
};
SecondFundamental second_fundamental_form(const SigmaData& sd, const Vec& p);
Vec mean_curvature_direct(const SigmaData& sd, const Vec& p);

// Mean curvature from the dual Pick trace:
//   H_{σ⁺} = −(1/2n) Σ_k ε_k tr_{−h̄}(C̄)(e_k) P̂(σ_* e_k)
// in a g_T-orthonormal frame; the σ⁻ value is obtained by F-conjugation.
Vec mean_curvature_pick(const SigmaData& sd, const Vec& p);

// Residual of the identity
//   h(∇̄_{e_i} e_i, S e_k) − h(∇_{e_i}(S e_i), e_k) = −C̄(e_i, e_k, e_i)
// evaluated in a smooth g_T-orthonormal frame field.
double pick_identity_residual(const SigmaData& sd, const Vec& p);

struct MaximalityReport {
  bool maximal = false;
  double sup_mean_curvature = 0.0;
  double sup_cross_check = 0.0;  // |direct − pick| componentwise sup
  bool dual_is_proper_sphere = false;
  double dual_sup_trC = 0.0;
};
MaximalityReport maximality_verdict(const SigmaData& sd, const GridSpec& grid,
                                    double tol = 1e-6);

// A generic quadric-immersion mean curvature for charts that are not of the
// σ± form (the flowed pseudo-flat chart): tangent space from the Jacobian,
// normal space as the ĝ-orthocomplement inside the quadric tangent space.
Vec mean_curvature_quadric_chart(const ChartMap& chart, QuadricKind kind,
                                 const Vec& p);

// Projection to the para-complex hyperbolic base.
struct TauProjectionReport {
  double omega_pullback = 0.0;     // sup |ω̂(σ_* e_i, σ_* e_j)| (gauge-invariant)
  double base_metric_match = 0.0;  // horizontal induced metric vs g_T
  double tau_collapse = 0.0;       // flowed family maps to identical TauPoints
  double metric_scale_err = 0.0;   // slot-pinned pairing metric vs e^t · h̄
  double mean_curv_transfer = 0.0; // ‖H_{Ψ_t σ} − Λ_t H_σ‖ sup over t
};
TauProjectionReport project_to_tau(const SigmaData& sd, const GridSpec& grid,
                                   const std::vector<double>& flow_times = {
                                       -1.0, 0.0, 1.0});

TauPoint tau_point_of(const SigmaData& sd, const Vec& p);

// Ψ_t applied to a chart into V (constant t).
ChartMap flowed_chart(const ChartMap& sigma, double t);

}  // namespace affq
