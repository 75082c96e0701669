// The ambient split space V = R^{n+1} ⊕ (R^{n+1})^* with the para-Kähler
// triple (ĝ, P̂, ω̂), the quadrics S^{n,n+1} and H^{n+1,n}, the R-action and
// the gauge projection to the para-complex hyperbolic base, the contact form
// of the Liouville construction, and the para-Sasaki structure.
//
//   ĝ((v,φ),(w,ψ)) = ½(φ(w) + ψ(v)),   P̂ = (Id, −Id),   ω̂ = ĝ(·, P̂·).
//
// Normalization note: with η := ω̂(q,·)| the flat exterior derivative gives
// dη = 2·ω̂| on tangent vectors. The para-Sasaki tuple that satisfies all
// five para-contact axioms and the normality condition on both quadrics is
//   ζ = s·P̂q  (s = ĝ(q,q) = ±1),   φ = P̂ ∘ pr_H,
//   g_sasaki = 2·ĝ(pr_H·, pr_H·) + η⊗η,
// while immersion geometry (induced metrics, mean curvature) uses the plain
// restriction of ĝ.

#pragma once

#include "affq/numerics.hpp"

namespace affq {

struct NotOnQuadric : Error {
  explicit NotOnQuadric(double r)
      : Error("not on quadric, residual=" + std::to_string(r)) {}
};
struct NotTangent : Error {
  explicit NotTangent(double r)
      : Error("vector not tangent to quadric, residual=" + std::to_string(r)) {}
};
struct DegenerateFrame : Error {
  explicit DegenerateFrame(const std::string& w) : Error("degenerate frame: " + w) {}
};

// An element (v, φ) of V; φ is stored as a coefficient vector and applied
// via the dot product.
struct SplitVector {
  Vec v;
  Vec phi;

  int dim() const { return static_cast<int>(v.size()); }  // n+1
  Vec concat() const {
    Vec c(2 * dim());
    c << v, phi;
    return c;
  }
  static SplitVector from_concat(const Vec& c) {
    const int d = static_cast<int>(c.size()) / 2;
    return SplitVector{c.head(d), c.tail(d)};
  }
};

double ghat(const SplitVector& a, const SplitVector& b);
SplitVector phat(const SplitVector& a);
double omegahat(const SplitVector& a, const SplitVector& b);

// Matrices of the structures in concatenated coordinates on R^{2(n+1)}.
Mat ghat_matrix(int n_plus_1);
Mat phat_matrix(int n_plus_1);
Mat omegahat_matrix(int n_plus_1);
Mat b_matrix(int n_plus_1);  // ½ [[0, I], [I, 0]]

// (x, y) -> (x + y, x − y): isometry from the diagonal ⟨,⟩-model onto the
// b-model.
Vec model_isometry(const Vec& x, const Vec& y);

// F(v, φ) = (−v, φ): the anti-isometry exchanging the two quadrics.
SplitVector anti_isometry_F(const SplitVector& a);

// Ψ_t(v, φ) = (e^t v, e^{−t} φ).
SplitVector r_action(double t, const SplitVector& a);

enum class QuadricKind : int { Sphere = +1, Hyperbolic = -1 };
inline int sign_of(QuadricKind k) { return static_cast<int>(k); }

struct QuadricPoint {
  SplitVector base;
  QuadricKind kind = QuadricKind::Sphere;

  double membership_residual() const {
    return std::abs(ghat(base, base) - sign_of(kind));
  }
  static QuadricPoint checked(SplitVector b, QuadricKind k, double tol = 1e-10);
};

// Euclidean basis of the tangent space {w : ĝ(w, q) = 0}, columns of a
// (2n+2) × (2n+1) matrix.
Mat tangent_basis(const QuadricPoint& q);

// Project an ambient vector onto the tangent space at q along q.
Vec project_tangent(const QuadricPoint& q, const Vec& w_concat);

// --- gauge projection to the para-complex hyperbolic base ------------------

// Canonical fiber representative with ‖v‖ = ‖φ‖ (Euclidean); the projective
// ± class of the hatted models is kept alongside.
struct TauPoint {
  SplitVector rep;
  QuadricKind kind = QuadricKind::Sphere;
};
TauPoint tau_project(const QuadricPoint& q);
// distance between fiber points modulo the antipodal class
double tau_distance(const TauPoint& a, const TauPoint& b);

// --- contact structure ------------------------------------------------------

// η(w) = ω̂(q, w) on tangent vectors; throws NotTangent.
double contact_eta(const QuadricPoint& q, const Vec& w_concat,
                   double tangent_tol = 1e-10);
// Reeb field ζ = s·P̂q, so that η(ζ) = 1 on both quadrics.
Vec reeb(const QuadricPoint& q);

// Full antisymmetrized evaluation of η ∧ (dη)^n on a frame of 2n+1 tangent
// vectors (columns). dη = 2ω̂ on tangent vectors.
double contact_condition(const QuadricPoint& q, const Mat& frame);

// --- para-Sasaki structure ---------------------------------------------------

class ParaSasakiFrame {
 public:
  explicit ParaSasakiFrame(QuadricPoint q);

  const QuadricPoint& point() const { return q_; }
  double eta(const Vec& w) const;
  const Vec& zeta() const { return zeta_; }
  Vec phi_endo(const Vec& w) const;  // P̂ ∘ pr_H, tangent -> tangent
  double g(const Vec& w1, const Vec& w2) const;  // the para-Sasaki metric
  double deta(const Vec& w1, const Vec& w2) const;  // = 2 ω̂(w1, w2)
  // restriction g as a BilinearForm on the tangent basis
  Mat tangent_frame() const { return basis_; }
  Mat g_matrix() const;

 private:
  QuadricPoint q_;
  Vec zeta_;
  Mat basis_;
};

ParaSasakiFrame para_sasaki_frame(const QuadricPoint& q);

struct SasakiResiduals {
  double phi_zeta = 0.0;       // (i)  φ(ζ) = 0
  double eta_phi = 0.0;        // (i)  η ∘ φ = 0
  double phi_square = 0.0;     // (iii) φ² = Id − η⊗ζ
  double metric_compat = 0.0;  // (iv) g(φX,φY) = −g(X,Y) + η(X)η(Y)
  double deta_compat = 0.0;    // (v)  dη(X,Y) = g(X,φY)
  double nijenhuis = 0.0;      // normality tensor, FD brackets
  double max() const {
    return std::max({phi_zeta, eta_phi, phi_square, metric_compat, deta_compat,
                     nijenhuis});
  }
};

// Evaluate the residuals on random tangent pairs drawn from rng.
SasakiResiduals axioms_report(const QuadricPoint& q, Rng& rng, int pairs = 4);

// Normality tensor residual ‖N_φ(X,Y) − dη(X,Y)ζ‖ with the documented
// FD-bracket convention (constant-coefficient ambient extension followed by
// pointwise quadric projection).
double nijenhuis_residual(const QuadricPoint& q, const Vec& X, const Vec& Y);

// --- para-Kähler base --------------------------------------------------------

struct ParaKahlerBase {
  Mat basis;  // (2n+2) × 2n horizontal basis at the gauged representative
  Mat g;      // 𝐠 in that basis (plain ĝ restriction, factor-1)
  Mat P;      // 𝐏 in that basis
  Mat omega;  // 𝛚 = 𝐠(·, 𝐏·)
};
ParaKahlerBase para_kahler_base(const TauPoint& tp);

// d(σ*ω̂) residual at p for a chart into V, by finite differences of the
// pulled-back coefficients over all coordinate triples.
double pullback_closedness_residual(const ChartMap& sigma, const Vec& p,
                                    double step = 1e-4);

// --- test helpers ------------------------------------------------------------

QuadricPoint random_quadric_point(Rng& rng, int n, QuadricKind kind);
Vec random_tangent(Rng& rng, const QuadricPoint& q);

}  // namespace affq
