// Command-line verification driver: runs the expected-property checks of the
// registered examples and writes deterministic JSON reports and CSV tables.

#include "affq/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

void add_common(CLI::App* cmd, affq::RunConfig& cfg, std::string& report_path,
                std::string& csv_dir) {
  cmd->add_option("--example", cfg.example_name, "example name");
  cmd->add_option("--n", cfg.n, "chart dimension");
  cmd->add_option("--grid", cfg.grid, "grid points per axis");
  cmd->add_option("--step", cfg.step, "finite-difference step");
  cmd->add_option("--tol-profile", cfg.tol_profile,
                  "tolerance profile: analytic or fd")
      ->check(CLI::IsMember({"", "analytic", "fd"}));
  cmd->add_option("--seed", cfg.seed, "seed for the sampled checks");
  cmd->add_option("--checks", cfg.checks_filter, "substring filter on names");
  cmd->add_option("--report", report_path, "write the JSON report here");
  cmd->add_option("--csv", csv_dir, "directory for CSV tables");
  cmd->add_flag("--timings", cfg.timings,
                "record wall time per check (breaks byte-determinism)");
}

int finish(const affq::Report& report, const std::string& report_path,
           const std::string& csv_dir,
           const std::vector<affq::CsvTable>& tables) {
  for (const auto& c : report.checks) {
    std::string suffix = c.note.empty() ? "" : "  (" + c.note + ")";
    std::printf("[%s] %-32s residual=%.3e tol=%.3e%s\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(), c.residual, c.tol,
                suffix.c_str());
  }
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    out << report.to_json();
  }
  if (!csv_dir.empty()) {
    std::filesystem::create_directories(csv_dir);
    for (const auto& t : tables) {
      std::ofstream out(std::filesystem::path(csv_dir) / t.filename,
                        std::ios::binary);
      out << t.content;
    }
  }
  const long failures =
      std::count_if(report.checks.begin(), report.checks.end(),
                    [](const auto& c) { return !c.pass; });
  if (failures) std::printf("%ld check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "affq: numerical verification of the equiaffine-to-quadric "
      "correspondence"};
  app.require_subcommand(1);

  affq::RunConfig cfg;
  std::string report_path, csv_dir;

  CLI::App* examples = app.add_subcommand("examples", "list the registry");
  examples->add_subcommand("list", "list example names");

  CLI::App* verify =
      app.add_subcommand("verify", "run the full manifest suite");
  add_common(verify, cfg, report_path, csv_dir);

  CLI::App* tension =
      app.add_subcommand("tension", "Blaschke-lift tension lines");
  add_common(tension, cfg, report_path, csv_dir);

  CLI::App* invert =
      app.add_subcommand("invert", "horizontal-lift round trip");
  add_common(invert, cfg, report_path, csv_dir);

  CLI::App* boundary = app.add_subcommand("boundary", "ray tables");
  add_common(boundary, cfg, report_path, csv_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (examples->parsed()) {
      for (const auto& name : affq::example_names())
        std::printf("%s\n", name.c_str());
      return 0;
    }
    std::vector<affq::CsvTable> tables;
    affq::Report report;
    if (verify->parsed()) {
      report = affq::run_suite(cfg);
      if (!csv_dir.empty()) tables.push_back(affq::grid_csv(cfg));
    } else if (tension->parsed()) {
      report = affq::run_tension(cfg);
    } else if (invert->parsed()) {
      report = affq::run_invert(cfg);
    } else if (boundary->parsed()) {
      report = affq::run_boundary(cfg, csv_dir.empty() ? nullptr : &tables);
    }
    return finish(report, report_path, csv_dir, tables);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
