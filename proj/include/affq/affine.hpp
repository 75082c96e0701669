// Equiaffine structure equations, Blaschke normalization, conormal maps and
// dual structure equations, and Pick-tensor invariants.
//
// Conventions follow the structure equations
//   D_X f_* Y = f_*(∇_X Y) + h(X, Y) ξ
//   D_X ξ     = −f_*(S X) + τ(X) ξ
// solved per chart point in the frame [f_* e_1 … f_* e_n | ξ].

#pragma once

#include "affq/grid.hpp"
#include "affq/numerics.hpp"

namespace affq {

struct TransversalityLost : Error {
  double det;
  explicit TransversalityLost(double d)
      : Error("transversality lost, frame det=" + std::to_string(d)), det(d) {}
};
struct IndefiniteMetric : Error {
  explicit IndefiniteMetric(const std::string& w) : Error("indefinite metric: " + w) {}
};
struct NonConstantRescale : Error {
  explicit NonConstantRescale(double spread)
      : Error("|θ|/ω_h varies across samples by " + std::to_string(spread) +
              "; transversal is not an affine-normal direction") {}
};
struct NotCentroaffine : Error {
  explicit NotCentroaffine(double r)
      : Error("transversal not proportional to position, residual=" +
              std::to_string(r)) {}
};

// An immersion f : U ⊂ R^n -> R^{n+1} with a transverse field ξ.
// `nu` optionally carries a closed-form conormal chart; when absent the
// conormal is solved pointwise and differentiated by finite differences.
struct EquiaffineImmersion {
  ChartMap f;
  ChartMap xi;
  int orientation = +1;  // sign convention for the ambient volume form
  std::optional<ChartMap> nu;

  int n() const { return f.domain_dim(); }
};

// (∇, h, S, τ, θ) at a chart point.
struct AffineData {
  std::vector<Mat> gamma;  // gamma[k](i,j) = Γ^k_{ij}
  Mat h;                   // affine metric in chart coordinates
  Mat S;                   // shape operator, columns S e_i
  Vec tau;                 // induced 1-form; ≡ 0 certifies equiaffinity
  double theta = 0.0;      // induced volume θ(e_1,…,e_n) = ω̃(f_* e_i, ξ)
  double residual = 0.0;   // max reconstruction residual of the linear solves
};

AffineData decompose_structure(const EquiaffineImmersion& imm, const Vec& p);

// Affine metric as a differentiable field over the chart.
MetricField affine_metric_field(const EquiaffineImmersion& imm);

// Rescale the transversal by a constant so that |θ| = ω_h = √|det h|.
// Returns the rescaled immersion and the constant c (ξ' = cξ, h' = h/c).
struct BlaschkeResult {
  EquiaffineImmersion immersion;
  double c = 1.0;
};
BlaschkeResult blaschke_normalize(const EquiaffineImmersion& imm,
                                  const GridSpec& samples,
                                  double constancy_tol = 1e-6);

// Conormal covector at p: ν(ξ) = 1, ν(f_* X) = 0.
Vec conormal(const EquiaffineImmersion& imm, const Vec& p);

// The conormal as a chart map (analytic if the immersion carries one).
ChartMap conormal_chart(const EquiaffineImmersion& imm);

// Pick tensor C = ∇h, the associated endomorphism A with C = −2h(A·,·),
// and the trace 1-form Tr_h(C).
struct PickData {
  std::vector<Mat> C;  // C[i](j,k) = C(e_i, e_j, e_k)
  std::vector<Mat> A;  // A[i] = matrix of A(e_i)
  Vec trC;             // Tr_h(C)(e_i) = tr(h^{-1} ∇_{e_i} h)
};
PickData pick_tensor(const EquiaffineImmersion& imm, const Vec& p);

struct SphereReport {
  double sup_trC = 0.0;   // sup over grid of max_i |Tr_h(C)(e_i)|
  bool proper = false;
  double tol = 0.0;
};
// A centroaffine immersion with non-degenerate h is a proper affine sphere
// iff the trace 1-form Tr_h(C) vanishes identically.
SphereReport is_proper_affine_sphere(const EquiaffineImmersion& imm,
                                     const GridSpec& samples,
                                     double sphere_tol = 1e-6);

// Dual structure equations D*_X ν_* Y = ν_*(∇̄_X Y) − h̄(X, Y) ν at a point,
// plus the compatibility residuals of the conormal calculus.
struct DualData {
  std::vector<Mat> gamma_bar;  // ∇̄ coefficients
  Mat h_bar;                   // h̄(X, Y)
  double residual = 0.0;       // reconstruction residual
  // compatibility residuals:
  double hbar_vs_hS = 0.0;     // h̄ = h(S·,·)
  double metric_pairing = 0.0; // X·h(Y,Z) = h(∇_X Y, Z) + h(Y, ∇̄_X Z)
  double levi_civita_avg = 0.0;// ∇^h = ½(∇ + ∇̄)
};
DualData dual_structure(const EquiaffineImmersion& imm, const Vec& p);

// Lightweight dual decomposition (∇̄, h̄) without the compatibility extras.
struct DualCore {
  std::vector<Mat> gamma_bar;
  Mat h_bar;
};
DualCore dual_core(const EquiaffineImmersion& imm, const Vec& p);
MetricField dual_metric_field(const EquiaffineImmersion& imm);
// Pick tensor of the dual immersion, C̄ = ∇̄ h̄; result[i](j,k) = C̄(e_i,e_j,e_k).
std::vector<Mat> dual_pick_tensor(const EquiaffineImmersion& imm, const Vec& p);

// tr_h(∇^h A)(X, Y) = X·tr(A(Y)) − tr(A(∇^h_X Y)); zero on proper affine
// spheres. X, Y are constant coefficient vectors in chart coordinates.
double pick_trace_derivative(const EquiaffineImmersion& imm, const Vec& p,
                             const Vec& X, const Vec& Y);

// --- identity residuals used by property tests and the verification suite ---

// Codazzi for h: (∇_X h)(Y,Z) symmetric in X, Y (raw, before symmetrizing C).
double codazzi_h_residual(const EquiaffineImmersion& imm, const Vec& p);
// Codazzi for S: (∇_X S)Y = (∇_Y S)X.
double codazzi_S_residual(const EquiaffineImmersion& imm, const Vec& p);
// h-symmetry of S: h(SX, Y) = h(X, SY).
double shape_symmetry_residual(const EquiaffineImmersion& imm, const Vec& p);
// Total symmetry of C under all six permutations.
double pick_symmetry_residual(const EquiaffineImmersion& imm, const Vec& p);
// Total symmetry of T(X,Y,Z,W) = h((∇^h_X A)(Y)Z, W) (proper spheres only).
double nabla_pick_symmetry_residual(const EquiaffineImmersion& imm, const Vec& p);
// Conormal duality: |ν(ξ) − 1|, max |ν(f_* e_i)|, and the derivative
// pairing ν_*(Y)(f_* X) = −h(Y, X).
struct ConormalResiduals {
  double pairing = 0.0;      // ν(ξ) = 1
  double tangency = 0.0;     // ν(f_* e_i) = 0
  double derivative = 0.0;   // ν_*(Y)(f_* X) + h(Y, X) = 0
};
ConormalResiduals conormal_residuals(const EquiaffineImmersion& imm, const Vec& p);

// Levi-Civita connection of the affine metric at p.
std::vector<Mat> levi_civita_of_h(const EquiaffineImmersion& imm, const Vec& p);

// Helper: ξ ∥ f check used by centroaffine-only operations.
double centroaffine_residual(const EquiaffineImmersion& imm, const Vec& p);

// Rescale a chart map by a constant factor (used for ξ -> cξ and f -> γf).
ChartMap scaled_chart(const ChartMap& chart, double factor);

}  // namespace affq
