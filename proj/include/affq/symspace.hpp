// The symmetric space of unit-determinant inner products, the incidence
// space of triples (v, P, q), and the SO(n+1,n+1) symmetric space of
// positive-definite (n+1)-planes: Blaschke lifts, the submersion between
// them, tension fields and harmonicity certificates, and the ι/Φ embeddings
// with their equivariance.
//
// Metric conventions, pinned once: on unit-determinant SPD matrices we use
// ⟨A,B⟩_Q = tr(Q⁻¹AQ⁻¹B); the block metric on the incidence space is
// normalized as 4·tr(sym·sym) on horizontal blocks so that the projection is
// a Riemannian submersion for that pair (the overall constant cancels from
// every harmonicity verdict).

#pragma once

#include "affq/affine.hpp"
#include "affq/grid.hpp"

namespace affq {

struct NotPositive : Error {
  explicit NotPositive(const std::string& w) : Error("not positive definite: " + w) {}
};
struct SingularM : Error {
  explicit SingularM(double d) : Error("singular matrix, det=" + std::to_string(d)) {}
};
struct NotHyperbolicSphere : Error {
  explicit NotHyperbolicSphere(const std::string& w)
      : Error("not a hyperbolic affine sphere: " + w) {}
};
struct FrameNotUnimodular : Error {
  explicit FrameNotUnimodular(double d)
      : Error("frame determinant " + std::to_string(d) + " != ±1") {}
};

// A point of the symmetric space: symmetric positive definite, det = 1.
struct SymPoint {
  Mat Q;
  static SymPoint checked(Mat Q, double det_tol = 1e-9);
};

// A point of the incidence space: vector v, hyperplane P (kernel of the
// covector), inner product q on P in the explicit column basis.
struct XPoint {
  Vec v;
  Vec covector;
  Mat basis;  // (n+1) x n, columns span P
  Mat q;      // n x n, SPD
};

// A positive-definite (n+1)-plane in (R^{2n+2}, b), spanned by the columns
// of W; compared modulo the right GL action via b-orthogonal projectors.
struct YPoint {
  Mat W;  // (2n+2) x (n+1)
};

// Q with Q|_P = q, Q(v, P) = 0 and Q(v,v) = λ solved from det Q = 1.
SymPoint pi_n1(const XPoint& x);

// --- Blaschke lift -----------------------------------------------------------

// Rescales a centroaffine hyperbolic-sphere candidate to the gauge where the
// position vector is the affine normal (θ = ω_h with ξ = f̂ = γf); h is
// unchanged by the ambient rescale.
struct SphereNormalization {
  EquiaffineImmersion immersion;  // f̂ = γ f, ξ = f̂
  double gamma = 1.0;
};
SphereNormalization normalize_hyperbolic_sphere(const EquiaffineImmersion& imm,
                                                const GridSpec& samples,
                                                double constancy_tol = 1e-6);

XPoint tilde_lift(const EquiaffineImmersion& normalized, const Vec& p);
SymPoint blaschke_lift(const EquiaffineImmersion& normalized, const Vec& p);

// p -> vec(Q(p)) as a chart into R^{(n+1)^2} (row-major), used for tensions.
ChartMap blaschke_lift_chart(const EquiaffineImmersion& normalized);

Mat unvec(const Vec& v, int rows);
Vec vec_of(const Mat& m);

// --- Maurer-Cartan blocks ------------------------------------------------------

// Decomposition of g⁻¹ ∂_X g for the unimodular adapted frame
// g = [f_* ẽ_1 … f_* ẽ_n | f] with h-orthonormal ẽ_i.
struct MCBlocks {
  Mat gauge;          // so(n) part of the diagonal block
  Mat sym_diag;       // symmetric part of the diagonal block
  Vec upper;          // last column (coordinates of X)
  Vec lower;          // last row
  double frame_det = 0.0;

  // 𝔨∩𝔪 component: antisymmetric part of the off-diagonal pair
  double horizontality() const {
    return 0.5 * (upper - lower).cwiseAbs().maxCoeff();
  }
  double diag_trace() const { return sym_diag.trace(); }
};
MCBlocks maurer_cartan_blocks(const EquiaffineImmersion& normalized,
                              const Vec& p, const Vec& X);

// --- tension fields ------------------------------------------------------------

// τ = Σ h^{ij} (∂_i∂_j ψ − Γ^k_{ij} ∂_k ψ − ½(∂_iψ ψ⁻¹ ∂_jψ + ∂_jψ ψ⁻¹ ∂_iψ))
// for a chart into vec(SPD).
Mat spd_tension(const ChartMap& psi, const MetricField& domain_metric,
                const Vec& p);

// ⟨A,A⟩_Q^{1/2} with ⟨A,B⟩_Q = tr(Q⁻¹AQ⁻¹B).
double spd_norm(const Mat& Q, const Mat& A);

// Exponential of a symmetric matrix (eigendecomposition).
Mat sym_exp(const Mat& A);

struct HarmonicityReport {
  double sup_tension = 0.0;        // sup ‖τ(G_f)‖_Q
  double sup_horizontality = 0.0;  // 𝔨∩𝔪 block component
  double sup_diag_trace = 0.0;     // H₀ component (tr_h ∇_X h)
  double sup_pipeline_gap = 0.0;   // SPD tension vs the Pick-derivative route
  bool harmonic = false;
  double tol = 0.0;
};
// expect_sphere = false skips the sphere normalization (negative controls).
HarmonicityReport harmonicity_report(const EquiaffineImmersion& imm,
                                     const GridSpec& grid, double harm_tol,
                                     bool expect_sphere = true);

// The incidence-space tension mapped into the SPD tangent space:
// s(Z,W) = Σ h^{ab} (∇^h_a C)(b, Z, W), pushed through the fiber projection.
Mat x_level_tension(const EquiaffineImmersion& normalized, const Vec& p);

// Pulled-back-metric residual of the fiber projection: the submersion is a
// Riemannian isometry on horizontal blocks for the pinned normalization.
double submersion_isometry_residual(const EquiaffineImmersion& normalized,
                                    const Vec& p);

// --- ι and Φ -------------------------------------------------------------------

Mat iota_embed(const Mat& M);            // diag(M, (M^T)^{-1}), checks det M
YPoint phi_embed(const Mat& Q);          // graph of Q, b-positive
Mat y_projector(const YPoint& y);        // b-orthogonal projector onto span W
// ‖Π(M∗Q) − ι(M) Π(Q) ι(M)^{-1}‖_max with M∗Q = (M^T)^{-1} Q M^{-1}
double equivariance_residual(const Mat& M, const Mat& Q);

struct ComposedReport {
  double sup_tension = 0.0;
  bool harmonic = false;
  double tol = 0.0;
};
// Tension of Φ∘G_f in the projector model of the SO(n+1,n+1) symmetric space.
ComposedReport composed_harmonicity(const EquiaffineImmersion& imm,
                                    const GridSpec& grid, double tol,
                                    bool expect_sphere = true);

}  // namespace affq
