#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace tpa::runner {

using json = nlohmann::ordered_json;

struct ExperimentConfig {
  // Matrix source, first match wins: inline rows, a file, the constructor, else
  // the built-in 4x4 example.
  std::optional<std::vector<std::vector<long>>> matrix;
  std::string matrix_file;
  std::optional<int> construct_d;

  std::string perturb = "single";  // preset name, or see perturb_file
  std::string perturb_file;        // JSON {"kind": ..., "modes": [{"m": [...], "amp": [...], "phase": x}]}
  double eps = 1e-3;

  int window = 0;  // 0: suggested_window of the map
  double newton_tol = 1e-12;
  int max_newton = 50;

  long radius = 5;          // lattice radius for holonomy audits
  int drift_vectors = 64;
  int probes = 2;
  int samples = 32;         // random points per residual audit
  long scan_radius = 2000;  // Diophantine / center-projection scans
  int grid_points = 3;      // accessibility grid per axis
  double grid_range = 0.5;
  double recurrence_eps = 0.3;
  std::optional<double> recurrence_b;
  unsigned long seed = 1;
  int workers = 1;
  std::string out_dir = "tpa_out";
};

json config_to_json(const ExperimentConfig& c);
// Keys present in j override the fields of base. Unknown keys are rejected.
ExperimentConfig config_from_json(const json& j, ExperimentConfig base = {});

struct Report {
  json doc;                                // report.json
  std::map<std::string, std::string> csv;  // file name -> contents
  int errors = 0;
};

Report run_classify(const ExperimentConfig& c);
Report run_construct(const ExperimentConfig& c);
Report run_dynamics(const ExperimentConfig& c);
Report run_linearize(const ExperimentConfig& c);
Report run_all(const ExperimentConfig& c);

// Writes report.json and the CSV side files into dir (created if missing).
void write_report(const Report& r, const std::string& dir);

}  // namespace tpa::runner
