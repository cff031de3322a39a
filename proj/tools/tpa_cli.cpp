// tpa: batch driver. Subcommands classify | construct | dynamics | linearize | all.
// Precedence: config file > flags > defaults.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tpa/runner/runner.hpp"

using namespace tpa::runner;

int main(int argc, char** argv) {
  CLI::App app{"Partially hyperbolic toral automorphisms: classification, invariant manifolds, holonomy, linearization"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string matrix_file, config_file, perturb = cfg.perturb;
  int construct_d = 0;
  std::optional<double> recurrence_b;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--matrix", matrix_file, "matrix file (JSON rows or whitespace-separated integers)");
    sub->add_option("--construct", construct_d, "use the constructed 2d x 2d matrix for this d");
    sub->add_option("--perturb", perturb, "preset (zero, single, double, conjugate) or a JSON mode file");
    sub->add_option("--eps", cfg.eps, "perturbation size (C^1 bound of the preset)");
    sub->add_option("--window", cfg.window, "manifold shooting depth K (0 = chosen from the spectrum)");
    sub->add_option("--radius", cfg.radius, "lattice radius for holonomy audits");
    sub->add_option("--scan-radius", cfg.scan_radius, "radius for Diophantine and center-projection scans");
    sub->add_option("--grid", cfg.grid_points, "accessibility grid points per axis");
    sub->add_option("--recurrence-eps", cfg.recurrence_eps, "eps of the recurrence search");
    sub->add_option("--b", recurrence_b, "exponent b in L = eps^-b (default N/u)");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--config", config_file, "JSON config file; its keys override flags")->check(CLI::ExistingFile);
  };
  CLI::App* classify = app.add_subcommand("classify", "spectral classification of the matrix");
  CLI::App* construct = app.add_subcommand("construct", "pseudo-Anosov constructor battery (d = 3..6 or --construct)");
  CLI::App* dynamics = app.add_subcommand("dynamics", "manifold, holonomy and accessibility experiments");
  CLI::App* linearize = app.add_subcommand("linearize", "Diophantine scans, conjugacies and drift audits");
  CLI::App* all = app.add_subcommand("all", "everything above");
  for (CLI::App* s : {classify, construct, dynamics, linearize, all}) add_common(s);

  CLI11_PARSE(app, argc, argv);

  try {
    if (!matrix_file.empty()) cfg.matrix_file = matrix_file;
    if (construct_d > 0) cfg.construct_d = construct_d;
    if (recurrence_b) cfg.recurrence_b = recurrence_b;
    if (perturb.size() > 5 && perturb.substr(perturb.size() - 5) == ".json") cfg.perturb_file = perturb;
    else cfg.perturb = perturb;
    if (!config_file.empty()) {
      std::ifstream f(config_file);
      cfg = config_from_json(json::parse(f), cfg);
    }

    Report r;
    if (classify->parsed()) r = run_classify(cfg);
    else if (construct->parsed()) r = run_construct(cfg);
    else if (dynamics->parsed()) r = run_dynamics(cfg);
    else if (linearize->parsed()) r = run_linearize(cfg);
    else r = run_all(cfg);

    write_report(r, cfg.out_dir);
    for (const auto& [name, sec] : r.doc["experiments"].items()) {
      std::cout << name << ": " << sec["status"].get<std::string>();
      if (sec.contains("message")) std::cout << " (" << sec["message"].get<std::string>() << ")";
      std::cout << '\n';
    }
    std::cout << "report: " << cfg.out_dir << "/report.json, errors: " << r.errors << '\n';
    return r.errors == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "tpa: " << e.what() << '\n';
    return 2;
  }
}
