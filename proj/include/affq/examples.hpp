// Registry of the worked example immersions: affine curves and hypersurfaces
// with closed-form jets, the quartic body (finite differences), the flowed
// pseudo-flat chart into the quadric, and the gauge-scrambled lift used by
// the inverse-problem round trip.

#pragma once

#include "affq/affine.hpp"
#include "affq/grid.hpp"
#include "affq/numerics.hpp"

#include <map>
#include <string>

namespace affq {

struct UnknownExample : Error {
  explicit UnknownExample(const std::string& n) : Error("unknown example: " + n) {}
};
struct BadDimension : Error {
  BadDimension(const std::string& n, int got)
      : Error("example " + n + " does not support n=" + std::to_string(got)) {}
};

enum class ExampleKind {
  Affine,       // equiaffine immersion into R^{n+1}
  QuadricChart, // direct chart into V = R^{n+1} + (R^{n+1})^*
  Lift,         // gauge-scrambled lift for the inverse problem
};

// What the verification driver is expected to find.
struct Manifest {
  bool centroaffine = false;
  bool proper_affine_sphere = false;
  bool maximal = false;                  // of sigma^- (or of the quadric chart)
  int metric_pos = 0, metric_neg = 0;    // signature of the affine metric h
  int shape_sign = 0;                    // S = shape_sign * Id when centroaffine
  std::string boundary_cone;             // "", "orthant", "segment", "ellipsoid"
  bool flat_induced_metric = false;      // pseudo-flat chart
  bool expects_analytic_jets = true;
};

struct ExampleSpec {
  std::string name;
  int n = 0;
  ExampleKind kind = ExampleKind::Affine;

  EquiaffineImmersion immersion;  // Affine kind
  ChartMap quadric_chart;         // QuadricChart / Lift kinds (into R^{2n+2})
  int quadric_sign = +1;          // ghat(sigma, sigma) for chart kinds
  ChartMap true_gauge;            // Lift kind: the scramble that was applied

  Manifest manifest;
  GridSpec chart_box;
};

// name in {hyperbola, ellipse, titeica, sphere, quartic, pseudoflat,
// scrambled-titeica}; params are example-specific (see the registry source).
ExampleSpec example(const std::string& name, int n,
                    const std::map<std::string, double>& params = {});

std::vector<std::string> example_names();

}  // namespace affq
