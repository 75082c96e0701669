// Projective-limit machinery and hyperplane boundary sets: membership in the
// Einstein universe and in Λ_Ω, ray limits of σ⁻ with Cauchy certificates,
// boundary of the flowed family, and the boundary graph in the para-complex
// hyperbolic base.

#pragma once

#include "affq/sigma.hpp"
#include "affq/split.hpp"

namespace affq {

struct NoConvergence : Error {
  explicit NoConvergence(double ratio)
      : Error("projective Cauchy test failed, ratio=" + std::to_string(ratio)) {}
};
struct UnsupportedCone : Error {
  explicit UnsupportedCone(const std::string& w) : Error("unsupported cone: " + w) {}
};
struct NotStrictlyConvex : Error {
  explicit NotStrictlyConvex(const std::string& w)
      : Error("cone not strictly convex: " + w) {}
};

// A point of a projective space, stored as a unit-Euclidean-norm
// representative; distance ignores the sign class.
struct ProjPoint {
  Vec rep;
  static ProjPoint of(const Vec& v);
};
double proj_distance(const ProjPoint& a, const ProjPoint& b);

// Slot-wise ("pair") normalization for points of V whose two slots blow up
// at different exponential rates: each slot is normalized separately, since
// [v, φ] and [v, cφ] define the same boundary pair for every c > 0. Both
// slots must be nonzero.
Vec pair_normalized(const Vec& concat);
// max of the two slot-wise projective angles
double pair_proj_distance(const ProjPoint& a, const ProjPoint& b);

// Built-in sharp convex cones: the positive orthant, the planar bisector
// cone {a >= |b|} (cone over a segment), and the round cone {s >= |x|}
// (cone over an ellipsoid), each optionally composed with a linear map.
// All three standard cones are self-dual; with a map L the dual is L^{-T} of
// the standard cone.
class ConvexCone {
 public:
  enum class Kind { Orthant, Segment, Ellipsoid };

  static ConvexCone orthant(int dim);
  static ConvexCone segment();
  static ConvexCone ellipsoid(int dim);
  ConvexCone with_map(const Mat& L) const;

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool strictly_convex() const { return kind_ != Kind::Orthant; }

  // All oracles take unit-scale representatives; the ± projective class is
  // resolved internally. Residuals vanish on the respective sets.
  double membership_residual(const Vec& v) const;        // v ∈ ±C̄
  double boundary_residual(const Vec& v) const;          // v ∈ ∂(±C)
  double dual_membership_residual(const Vec& phi) const; // φ ∈ ±C̄*
  // φ(v) = 0 and φ supporting at v ∈ ∂C (positivity up to the joint sign)
  double support_residual(const Vec& v, const Vec& phi) const;

 private:
  Kind kind_ = Kind::Orthant;
  int dim_ = 0;
  Mat map_, inv_;  // cone = map_(standard cone)
};

// 2|ĝ(rep, rep)| for the unit representative: 0 exactly on the Einstein
// universe, 1 on gauge-balanced quadric points.
double ein_membership(const ProjPoint& p);

struct LambdaResidual {
  double boundary = 0.0;  // v ∈ ∂C(Ω)
  double pairing = 0.0;   // φ(v) = 0
  double support = 0.0;   // φ ≥ 0 on the cone (up to the sign class)
  double max() const { return std::max({boundary, pairing, support}); }
};
LambdaResidual lambda_membership(const ProjPoint& p, const ConvexCone& cone);

// Dyadic samples of the normalized σ-image along a ray p(s), the geometric
// Cauchy certificate, and the limit's Einstein/Λ_Ω residuals.
struct RayLimit {
  ProjPoint limit;
  std::vector<double> s_samples;
  std::vector<Vec> reps;          // normalized representatives per sample
  double cauchy_ratio = 0.0;      // successive-distance ratio (≤ 0.9 required)
  double ein_residual = 0.0;
  LambdaResidual lambda;
};
RayLimit projective_limit(const ChartMap& sigma,
                          const std::function<Vec(double)>& ray, double s_max,
                          const ConvexCone* cone = nullptr,
                          double cauchy_ratio_max = 0.9);

// Limits of Ψ_t σ(p) as t -> ±∞, evaluated at |t| = t_abs, with the
// residuals against [first slot, 0] and [0, second slot] and the cone
// memberships of Prop-4.7 type.
struct FlowBoundary {
  ProjPoint plus_limit;    // t → +∞
  ProjPoint minus_limit;   // t → −∞
  double plus_residual = 0.0;   // distance to [v-slot, 0]
  double minus_residual = 0.0;  // distance to [0, φ-slot]
  double omega_membership = 0.0;       // v-slot ∈ ±C̄ (when a cone is given)
  double omega_dual_membership = 0.0;  // φ-slot ∈ ±C̄*
};
FlowBoundary flow_boundary(const ChartMap& sigma, const Vec& p, double t_abs,
                           const ConvexCone* cone = nullptr);

// Paired boundary limits ([v], [φ]) in the two projective factors, with the
// graph-of-a-bijection certificate for strictly convex cones.
struct BoundaryGraphSample {
  ProjPoint v;
  ProjPoint phi;
  double pairing = 0.0;  // φ(v) residual
};
struct BoundaryGraphReport {
  std::vector<BoundaryGraphSample> samples;
  double sup_pairing = 0.0;
  double graph_defect = 0.0;  // nearby v's must carry nearby φ's
};
BoundaryGraphReport tau_boundary_graph(
    const ChartMap& sigma, const std::vector<std::function<Vec(double)>>& rays,
    double s_max, const ConvexCone& cone, double angular_tol = 5e-2);

}  // namespace affq
