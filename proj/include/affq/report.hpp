// Verification driver and report surface: runs the expected-property checks
// of an example manifest, collects {name, residual, tolerance, verdict}
// rows, and serializes them deterministically to JSON and CSV.

#pragma once

#include "affq/examples.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace affq {

struct TolProfile {
  std::string name = "analytic";
  double structure = 1e-10;
  double equiaffine = 1e-10;
  double codazzi = 1e-7;
  double total_symmetry = 1e-7;
  double nabla_pick_symmetry = 1e-5;
  double conormal = 1e-8;
  double sphere = 1e-9;
  double membership = 1e-10;
  double metric_match = 1e-8;
  double horizontality = 1e-6;
  double anti_invariance = 1e-6;
  double mean_curvature = 1e-6;
  double cross_check = 1e-6;
  double radial = 1e-9;
  double metric_scale = 1e-9;
  double path = 1e-9;
  double gauge_var = 1e-6;
  double duality = 1e-8;
  double homothety = 1e-7;
  double harmonic = 1e-8;
  double pipeline_gap = 1e-4;
  double mc_block = 1e-8;
  double iota = 1e-12;
  double sasaki = 1e-5;
  double contact_floor = 1e-3;
  double ray_lambda = 1e-3;
  double flow_invariance = 1e-6;
  double flow_limits = 1e-6;
  double negative_floor = 1e-2;  // controls must exceed this

  static TolProfile analytic();
  static TolProfile fd();
};

struct RunConfig {
  std::string example_name = "titeica";
  int n = 2;
  int grid = 21;
  double step = 0.0;  // 0 = per-example default FD step
  std::string tol_profile;  // "", "analytic" or "fd" ("" = per example)
  std::uint64_t seed = 1234;
  bool timings = false;
  std::string checks_filter;  // substring; empty = all
};

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  double seconds = 0.0;
  std::string note;  // tolerance provenance / expected-fail marker
};

struct Report {
  std::string schema = "affq-report/1";
  RunConfig config;
  std::vector<CheckResult> checks;

  bool all_pass() const;
  std::string to_json() const;  // deterministic for fixed config+seed
};

// Full manifest suite for one example (plus the seeded structure checks of
// the ambient para-Sasaki/contact layer and the embedding algebra).
Report run_suite(const RunConfig& cfg);

// sup ‖τ(G_f)‖ lines for the Blaschke lift of the example.
Report run_tension(const RunConfig& cfg);

// Horizontal-lift round trip on the gauge-scrambled example.
Report run_invert(const RunConfig& cfg);

// Ray tables; also returns the CSV bodies (one per ray).
struct CsvTable {
  std::string filename;
  std::string content;
};
Report run_boundary(const RunConfig& cfg, std::vector<CsvTable>* tables);

// Residual grid for the CSV contract of the verify command.
CsvTable grid_csv(const RunConfig& cfg);

}  // namespace affq
