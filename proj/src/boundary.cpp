#include "affq/boundary.hpp"

#include <Eigen/Dense>

namespace affq {

ProjPoint ProjPoint::of(const Vec& v) {
  const double n = v.norm();
  if (n == 0.0) throw Error("ProjPoint of zero vector");
  return ProjPoint{v / n};
}

double proj_distance(const ProjPoint& a, const ProjPoint& b) {
  const double c = std::min(1.0, std::abs(a.rep.dot(b.rep)));
  return std::acos(c);
}

Vec pair_normalized(const Vec& concat) {
  const int d = static_cast<int>(concat.size()) / 2;
  const double nv = concat.head(d).norm();
  const double np = concat.tail(d).norm();
  if (nv == 0.0 || np == 0.0) throw Error("pair_normalized: a slot vanishes");
  Vec out(2 * d);
  out << concat.head(d) / (nv * std::sqrt(2.0)),
      concat.tail(d) / (np * std::sqrt(2.0));
  return out;
}

double pair_proj_distance(const ProjPoint& a, const ProjPoint& b) {
  const int d = static_cast<int>(a.rep.size()) / 2;
  auto slot_angle = [](const Vec& x, const Vec& y) {
    const double c =
        std::min(1.0, std::abs(x.dot(y)) / std::max(x.norm() * y.norm(), 1e-300));
    return std::acos(c);
  };
  return std::max(slot_angle(a.rep.head(d), b.rep.head(d)),
                  slot_angle(a.rep.tail(d), b.rep.tail(d)));
}

// --- cones -------------------------------------------------------------------

ConvexCone ConvexCone::orthant(int dim) {
  ConvexCone c;
  c.kind_ = Kind::Orthant;
  c.dim_ = dim;
  c.map_ = Mat::Identity(dim, dim);
  c.inv_ = c.map_;
  return c;
}

ConvexCone ConvexCone::segment() {
  ConvexCone c;
  c.kind_ = Kind::Segment;
  c.dim_ = 2;
  c.map_ = Mat::Identity(2, 2);
  c.inv_ = c.map_;
  return c;
}

ConvexCone ConvexCone::ellipsoid(int dim) {
  if (dim < 2) throw UnsupportedCone("ellipsoid cone needs dim >= 2");
  ConvexCone c;
  c.kind_ = Kind::Ellipsoid;
  c.dim_ = dim;
  c.map_ = Mat::Identity(dim, dim);
  c.inv_ = c.map_;
  return c;
}

ConvexCone ConvexCone::with_map(const Mat& L) const {
  if (L.rows() != dim_ || L.cols() != dim_)
    throw UnsupportedCone("map dimension");
  ConvexCone c = *this;
  c.map_ = L * map_;
  c.inv_ = c.map_.inverse();
  return c;
}

namespace {

// standard-cone oracles on unit vectors; sign class resolved by the caller
double std_membership(ConvexCone::Kind k, const Vec& x) {
  switch (k) {
    case ConvexCone::Kind::Orthant:
      return std::abs(x.cwiseMin(0.0).norm());
    case ConvexCone::Kind::Segment:
      return std::max(0.0, std::abs(x(1)) - x(0));
    case ConvexCone::Kind::Ellipsoid: {
      const int d = static_cast<int>(x.size());
      return std::max(0.0, x.head(d - 1).norm() - x(d - 1));
    }
  }
  return 0.0;
}

double std_boundary(ConvexCone::Kind k, const Vec& x) {
  switch (k) {
    case ConvexCone::Kind::Orthant:
      // on the boundary: inside the closed orthant with some vanishing entry
      return x.cwiseAbs().minCoeff();
    case ConvexCone::Kind::Segment:
      return std::abs(x(0) - std::abs(x(1)));
    case ConvexCone::Kind::Ellipsoid: {
      const int d = static_cast<int>(x.size());
      return std::abs(x(d - 1) - x.head(d - 1).norm());
    }
  }
  return 0.0;
}

// sign that points the representative into the nonnegative copy
double orientation(ConvexCone::Kind k, const Vec& x) {
  switch (k) {
    case ConvexCone::Kind::Orthant:
      return x.sum() >= 0 ? 1.0 : -1.0;
    case ConvexCone::Kind::Segment:
      return x(0) >= 0 ? 1.0 : -1.0;
    case ConvexCone::Kind::Ellipsoid:
      return x(static_cast<int>(x.size()) - 1) >= 0 ? 1.0 : -1.0;
  }
  return 1.0;
}

}  // namespace

double ConvexCone::membership_residual(const Vec& v) const {
  Vec x = inv_ * v;
  x /= std::max(x.norm(), 1e-300);
  x *= orientation(kind_, x);
  return std_membership(kind_, x);
}

double ConvexCone::boundary_residual(const Vec& v) const {
  Vec x = inv_ * v;
  x /= std::max(x.norm(), 1e-300);
  x *= orientation(kind_, x);
  return std::max(std_membership(kind_, x), std_boundary(kind_, x));
}

double ConvexCone::dual_membership_residual(const Vec& phi) const {
  // φ ∈ (L C)* ⟺ L^T φ ∈ C* = C (self-dual standard cones)
  Vec y = map_.transpose() * phi;
  y /= std::max(y.norm(), 1e-300);
  y *= orientation(kind_, y);
  return std_membership(kind_, y);
}

double ConvexCone::support_residual(const Vec& v, const Vec& phi) const {
  const double pairing = std::abs(phi.dot(v)) / (v.norm() * phi.norm());
  return std::max(pairing, dual_membership_residual(phi));
}

// --- Einstein universe / Λ_Ω ---------------------------------------------------

double ein_membership(const ProjPoint& p) {
  const SplitVector s = SplitVector::from_concat(p.rep);
  return 2.0 * std::abs(ghat(s, s));
}

LambdaResidual lambda_membership(const ProjPoint& p, const ConvexCone& cone) {
  const SplitVector s = SplitVector::from_concat(p.rep);
  if (s.v.norm() < 1e-12 || s.phi.norm() < 1e-12)
    throw Error("lambda_membership: a slot vanishes");
  LambdaResidual out;
  out.boundary = cone.boundary_residual(s.v / s.v.norm());
  out.pairing = std::abs(s.phi.dot(s.v)) / (s.v.norm() * s.phi.norm());
  out.support = cone.dual_membership_residual(s.phi / s.phi.norm());
  return out;
}

// --- ray limits ----------------------------------------------------------------

RayLimit projective_limit(const ChartMap& sigma,
                          const std::function<Vec(double)>& ray, double s_max,
                          const ConvexCone* cone, double cauchy_ratio_max) {
  RayLimit out;
  out.s_samples = {s_max / 8, s_max / 4, s_max / 2, s_max};
  for (double s : out.s_samples)
    out.reps.push_back(pair_normalized(sigma(ray(s))));
  std::vector<double> dists;
  for (size_t i = 0; i + 1 < out.reps.size(); ++i)
    dists.push_back(pair_proj_distance(ProjPoint{out.reps[i]},
                                       ProjPoint{out.reps[i + 1]}));
  for (size_t i = 0; i + 1 < dists.size(); ++i)
    out.cauchy_ratio =
        std::max(out.cauchy_ratio,
                 dists[i + 1] / std::max(dists[i], 1e-300));
  if (out.cauchy_ratio > cauchy_ratio_max) throw NoConvergence(out.cauchy_ratio);

  out.limit = ProjPoint{out.reps.back()};
  out.ein_residual = ein_membership(out.limit);
  if (cone) out.lambda = lambda_membership(out.limit, *cone);
  return out;
}

FlowBoundary flow_boundary(const ChartMap& sigma, const Vec& p, double t_abs,
                           const ConvexCone* cone) {
  const Vec base = sigma(p);
  const int d = static_cast<int>(base.size()) / 2;

  FlowBoundary out;
  const Vec plus = r_action(t_abs, SplitVector::from_concat(base)).concat();
  const Vec minus = r_action(-t_abs, SplitVector::from_concat(base)).concat();
  out.plus_limit = ProjPoint::of(plus);
  out.minus_limit = ProjPoint::of(minus);

  Vec first_only = Vec::Zero(2 * d);
  first_only.head(d) = base.head(d);
  Vec second_only = Vec::Zero(2 * d);
  second_only.tail(d) = base.tail(d);
  out.plus_residual = proj_distance(out.plus_limit, ProjPoint::of(first_only));
  out.minus_residual =
      proj_distance(out.minus_limit, ProjPoint::of(second_only));

  if (cone) {
    out.omega_membership = cone->membership_residual(base.head(d));
    out.omega_dual_membership = cone->dual_membership_residual(base.tail(d));
  }
  return out;
}

BoundaryGraphReport tau_boundary_graph(
    const ChartMap& sigma, const std::vector<std::function<Vec(double)>>& rays,
    double s_max, const ConvexCone& cone, double angular_tol) {
  if (!cone.strictly_convex())
    throw NotStrictlyConvex("boundary graph needs a strictly convex cone");

  BoundaryGraphReport out;
  const int d = sigma.target_dim() / 2;
  for (const auto& ray : rays) {
    const RayLimit rl = projective_limit(sigma, ray, s_max, &cone);
    BoundaryGraphSample s;
    s.v = ProjPoint::of(rl.limit.rep.head(d));
    s.phi = ProjPoint::of(rl.limit.rep.tail(d));
    s.pairing = std::abs(s.phi.rep.dot(s.v.rep));
    out.sup_pairing = std::max(out.sup_pairing, s.pairing);
    out.samples.push_back(std::move(s));
  }
  // graph certificate: rays hitting (projectively) equal v's must carry
  // equal supporting functionals
  for (size_t i = 0; i < out.samples.size(); ++i)
    for (size_t j = i + 1; j < out.samples.size(); ++j) {
      const double dv = proj_distance(out.samples[i].v, out.samples[j].v);
      const double dp = proj_distance(out.samples[i].phi, out.samples[j].phi);
      if (dv < angular_tol)
        out.graph_defect = std::max(out.graph_defect, dp);
    }
  return out;
}

}  // namespace affq
