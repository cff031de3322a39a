#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "tpa/errors.hpp"
#include "tpa/runner/runner.hpp"

using namespace tpa;
using namespace tpa::runner;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.samples = 6;
  c.drift_vectors = 10;
  c.probes = 1;
  c.radius = 3;
  c.scan_radius = 200;
  c.grid_points = 2;
  return c;
}

json without_timings(json d) {
  d.erase("timings");
  return d;
}

}  // namespace

TEST_SUITE("cli_runner") {
  TEST_CASE("config round trip and overrides") {
    ExperimentConfig c = small_config();
    c.matrix = std::vector<std::vector<long>>{{2, 1}, {1, 1}};
    c.recurrence_b = 1.5;
    const json j = config_to_json(c);
    const ExperimentConfig back = config_from_json(j);
    CHECK(config_to_json(back) == j);

    const ExperimentConfig o = config_from_json(json{{"eps", 0.01}, {"seed", 7}}, c);
    CHECK(o.eps == 0.01);
    CHECK(o.seed == 7);
    CHECK(o.samples == c.samples);
    CHECK_THROWS_AS(config_from_json(json{{"epsilon", 1}}), InvalidInput);
    CHECK_THROWS_AS(config_from_json(json{{"eps", "big"}}), InvalidInput);
  }

  TEST_CASE("classify reports") {
    const Report r = run_classify(small_config());
    CHECK(r.errors == 0);
    const json& k = r.doc["experiments"]["classification"]["result"];
    CHECK(k["pseudo_anosov"] == true);
    CHECK(k["anosov"] == false);
    CHECK(k["center_dim"] == 2);
    CHECK(k["trace_polynomial"] == "z^2 - 8z + 4");
    CHECK(r.doc["config"] == config_to_json(small_config()));

    ExperimentConfig id = small_config();
    id.matrix = std::vector<std::vector<long>>{{1, 0}, {0, 1}};
    const Report ri = run_classify(id);
    CHECK(ri.errors == 0);
    CHECK(ri.doc["experiments"]["classification"]["result"]["ergodic"] == false);
    CHECK(ri.doc["experiments"]["power_irreducibility"]["status"] == "precondition-not-met");
  }

  TEST_CASE("construct d = 3") {
    ExperimentConfig c = small_config();
    c.construct_d = 3;
    const Report r = run_construct(c);
    CHECK(r.errors == 0);
    CHECK(r.doc["experiments"]["construct_d3"]["result"]["P"] == "x^6 + 3x^4 - 2x^3 + 3x^2 + 1");
    const Report k = run_classify(c);
    CHECK(k.doc["experiments"]["classification"]["result"]["char_poly"] == "t^6 + 3t^4 - 2t^3 + 3t^2 + 1");
  }

  TEST_CASE("dynamics: linear map, determinism, window overflow") {
    ExperimentConfig c = small_config();
    c.perturb = "zero";
    const Report z = run_dynamics(c);
    CHECK(z.errors == 0);
    const json& ex = z.doc["experiments"];
    CHECK(ex["bounds_audit"]["result"]["measured_kappa"] == 0.0);
    CHECK(ex["drift_audit"]["result"]["fitted_C"].get<double>() < 1e-12);
    CHECK(ex["accessibility"]["result"]["verdict"] == "trivial-within-tolerance");
    CHECK(ex["recurrence"]["result"]["defect"] == 0.0);
    CHECK(z.csv.count("drift.csv") == 1);
    CHECK(z.csv.count("accessibility.csv") == 1);
    for (const auto& [name, sec] : ex.items()) CHECK(sec.contains("ref"));

    c.perturb = "single";
    c.workers = 2;
    const Report a = run_dynamics(c);
    const Report b = run_dynamics(c);
    CHECK(a.errors == 0);
    CHECK(without_timings(a.doc).dump() == without_timings(b.doc).dump());
    CHECK(a.csv == b.csv);

    c.window = 3;
    const Report w = run_dynamics(c);
    CHECK(w.errors >= 1);
    CHECK(w.doc["experiments"]["recurrence"]["error_kind"] == "window-overflow");
    CHECK(w.doc["experiments"]["map"]["status"] == "ok");
  }

  TEST_CASE("linearize: special vectors and conjugacies") {
    ExperimentConfig c = small_config();
    c.perturb = "zero";
    const Report r = run_linearize(c);
    CHECK(r.errors == 0);
    const json& ex = r.doc["experiments"];
    CHECK(ex["special_vectors"]["result"]["n"] == json{{8, -5, 8, -1}, {1, 0, 1, 0}});
    CHECK(ex["center_conjugacy"]["result"]["equivariance_residual"].get<double>() < 1e-12);
    CHECK(ex["small_divisor"]["result"]["round_trip"].get<double>() < 1e-12);
    CHECK(ex["fundamental_conjugacy"]["result"]["residual_p1"].get<double>() < 1e-8);
  }

  TEST_CASE("report files") {
    const Report r = run_classify(small_config());
    const auto dir = std::filesystem::temp_directory_path() / "tpa_runner_test";
    std::filesystem::remove_all(dir);
    write_report(r, dir.string());
    std::ifstream f(dir / "report.json");
    const json back = json::parse(f);
    CHECK(back == r.doc);
    std::filesystem::remove_all(dir);
  }
}
