#include "tpa/runner/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "tpa/errors.hpp"
#include "tpa/holonomy/holonomy.hpp"
#include "tpa/lattice/center_scan.hpp"
#include "tpa/lattice/classify.hpp"
#include "tpa/lattice/construct.hpp"
#include "tpa/linearization/center_conjugacy.hpp"
#include "tpa/linearization/conjugacy.hpp"
#include "tpa/linearization/diophantine.hpp"
#include "tpa/linearization/drift.hpp"
#include "tpa/linearization/small_divisor.hpp"
#include "tpa/manifolds/cohomological.hpp"

namespace tpa::runner {

using dynamics::Subspace;
using dynamics::TorusMapLift;

namespace {

const std::vector<std::vector<long>> kIntro = {{0, 0, 0, -1}, {1, 0, 0, 8}, {0, 1, 0, -6}, {0, 0, 1, 8}};

// Report assembly. Each section records what it audits, a status and either a
// result or an error message; timings go to a separate block so the rest of
// the document is reproducible byte for byte.
class Builder {
 public:
  explicit Builder(const ExperimentConfig& c) {
    r_.doc["tool"] = "tpa";
    r_.doc["config"] = config_to_json(c);
    r_.doc["experiments"] = json::object();
    r_.doc["timings"] = json::object();
  }

  // fn returns the result object; PreconditionFailed is an outcome, not an error.
  void section(const std::string& name, const std::string& ref, const std::function<json()>& fn) {
    json s;
    s["ref"] = ref;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      s["result"] = fn();
      s["status"] = "ok";
    } catch (const PreconditionFailed& e) {
      s["status"] = "precondition-not-met";
      s["message"] = e.what();
    } catch (const WindowOverflow& e) {
      s["status"] = "error";
      s["error_kind"] = "window-overflow";
      s["message"] = e.what();
      ++r_.errors;
    } catch (const std::exception& e) {
      s["status"] = "error";
      s["message"] = e.what();
      ++r_.errors;
    }
    r_.doc["experiments"][name] = std::move(s);
    r_.doc["timings"][name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  void csv(const std::string& file, std::string body) { r_.csv[file] = std::move(body); }

  Report finish() {
    r_.doc["errors"] = r_.errors;
    return std::move(r_);
  }

 private:
  Report r_;
};

std::string poly(const lattice::IntPolynomial& p, char var = 't') { return p.to_string(var); }

lattice::ToralMatrix parse_matrix_text(const std::string& text) {
  try {
    const json j = json::parse(text);
    const json& rows = j.is_object() ? j.at("matrix") : j;
    return lattice::ToralMatrix(rows.get<std::vector<std::vector<long>>>());
  } catch (const json::exception&) {
  }
  std::vector<std::vector<long>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<long> row;
    long v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw InvalidInput("matrix file: non-integer entry");
    if (!row.empty()) rows.push_back(row);
  }
  if (rows.empty()) throw InvalidInput("matrix file is empty");
  return lattice::ToralMatrix(rows);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

lattice::ToralMatrix load_matrix(const ExperimentConfig& c) {
  if (c.matrix) return lattice::ToralMatrix(*c.matrix);
  if (!c.matrix_file.empty()) return parse_matrix_text(read_file(c.matrix_file));
  if (c.construct_d) return lattice::construct_pseudo_anosov(*c.construct_d).A;
  return lattice::ToralMatrix(kIntro);
}

dynamics::PerturbationSpec load_perturbation(const ExperimentConfig& c, int dim) {
  if (c.perturb_file.empty()) return dynamics::perturbation_preset(c.perturb, dim, c.eps);
  const json j = json::parse(read_file(c.perturb_file));
  dynamics::PerturbationSpec p;
  const std::string kind = j.value("kind", "additive");
  if (kind == "conjugate") p.kind = dynamics::PerturbationKind::conjugate;
  else if (kind != "additive") throw InvalidInput("perturbation kind must be additive or conjugate");
  for (const auto& m : j.at("modes")) {
    dynamics::Mode mode;
    mode.m = m.at("m").get<std::vector<long>>();
    const auto amp = m.at("amp").get<std::vector<double>>();
    if (static_cast<int>(mode.m.size()) != dim || static_cast<int>(amp.size()) != dim)
      throw InvalidInput("perturbation mode has the wrong dimension");
    mode.amp = Vec::Map(amp.data(), dim);
    mode.phase = m.value("phase", 0.0);
    p.modes.push_back(mode);
  }
  return p;
}

manifolds::ManifoldEvalConfig eval_config(const ExperimentConfig& c, const TorusMapLift& map) {
  manifolds::ManifoldEvalConfig cfg;
  cfg.window = c.window > 0 ? c.window : manifolds::suggested_window(map);
  cfg.newton_tol = c.newton_tol;
  cfg.max_newton = c.max_newton;
  return cfg;
}

json classification_json(const lattice::SpectralClassification& k) {
  json j;
  j["ergodic"] = k.ergodic;
  j["anosov"] = k.anosov;
  j["pseudo_anosov"] = k.pseudo_anosov;
  j["center_dim"] = k.center_dim;
  j["stable_dim"] = k.stable_dim;
  j["unstable_dim"] = k.unstable_dim;
  j["char_poly"] = poly(k.char_poly);
  j["palindromic"] = k.palindromic;
  j["irreducible"] = k.irreducible;
  j["irreducibility_decided_by"] = k.irreducibility.decided_by;
  if (k.irreducibility.factor) j["proper_factor"] = poly(*k.irreducibility.factor);
  j["power"] = k.power ? json{{"n", k.power->n}, {"q", poly(k.power->q)}} : json(nullptr);
  json cyc = json::array();
  for (const auto& f : k.cyclotomic) cyc.push_back({{"m", f.m}, {"multiplicity", f.multiplicity}});
  j["cyclotomic_factors"] = cyc;
  j["trace_polynomial"] = k.trace_q ? json(poly(*k.trace_q, 'z')) : json(nullptr);
  if (k.trace_count)
    j["trace_interval"] = {{"inside", k.trace_count->inside},
                           {"inside_distinct", k.trace_count->inside_distinct},
                           {"at_plus_two", k.trace_count->at_plus_two},
                           {"at_minus_two", k.trace_count->at_minus_two}};
  j["center_route"] = k.center_route;
  j["unit_circle_pairs"] = k.unit_circle_pairs;
  return j;
}

void classify_into(Builder& b, const ExperimentConfig& c) {
  std::optional<lattice::ToralMatrix> A;
  std::optional<lattice::SpectralClassification> k;
  b.section("classification", "spectral classification; trace polynomial and Sturm count", [&] {
    A = load_matrix(c);
    k = lattice::classify(*A);
    json j = classification_json(*k);
    j["dim"] = A->dim();
    return j;
  });
  b.section("power_irreducibility", "irreducibility of the characteristic polynomials of A^l", [&]() -> json {
    if (!k) throw InvalidInput("classification failed");
    if (!k->pseudo_anosov) throw PreconditionFailed("matrix is not pseudo-Anosov");
    json a = json::array();
    for (const auto& p : lattice::power_irreducibility_check(*A, 5))
      a.push_back({{"l", p.l}, {"irreducible", p.irreducible}, {"char_poly", poly(p.char_poly)}});
    return a;
  });
}

void construct_into(Builder& b, const ExperimentConfig& c) {
  std::vector<int> ds;
  if (c.construct_d) ds.push_back(*c.construct_d);
  else ds = {3, 4, 5, 6};
  for (int d : ds)
    b.section("construct_d" + std::to_string(d), "palindromic constructor with two unit-modulus roots", [&] {
      const auto ca = lattice::construct_pseudo_anosov(d);
      const auto k = lattice::classify(ca.A);
      json j;
      j["d"] = d;
      j["P"] = poly(ca.P, 'x');
      j["Q"] = poly(ca.Q, 'z');
      j["palindromic"] = ca.P.is_palindromic();
      j["irreducible"] = k.irreducible;
      j["power_polynomial"] = k.power.has_value();
      j["unit_modulus_roots"] = 2 * k.unit_circle_pairs;
      j["pseudo_anosov"] = k.pseudo_anosov;
      j["center_dim"] = k.center_dim;
      return j;
    });
}

std::string drift_csv(const holonomy::DriftAudit& a) {
  std::ostringstream os;
  os.precision(17);
  os << "n,ns,nu,nc,drift,lip_ratio,residual\n";
  for (const auto& s : a.samples) {
    os << '"';
    for (size_t i = 0; i < s.n.size(); ++i) os << (i ? " " : "") << s.n[i];
    os << "\"," << s.ns << ',' << s.nu << ',' << s.nc << ',' << s.drift << ',' << s.lip_ratio << ',' << s.residual
       << '\n';
  }
  return os.str();
}

std::string accessibility_csv(const holonomy::AccessibilityReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "a,b,e,residual\n";
  auto cell = [&](const Vec& v) {
    os << '"';
    for (int i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    os << '"';
  };
  for (const auto& e : r.endpoints) {
    cell(e.a);
    os << ',';
    cell(e.b);
    os << ',';
    cell(e.e);
    os << ',' << e.residual << '\n';
  }
  return os.str();
}

void dynamics_into(Builder& b, const ExperimentConfig& c) {
  std::optional<TorusMapLift> map;
  manifolds::ManifoldEvalConfig cfg;
  b.section("map", "splitting, adapted norms and the perturbation budget", [&] {
    const auto A = load_matrix(c);
    map.emplace(A, load_perturbation(c, A.dim()));
    cfg = eval_config(c, *map);
    const auto& fr = map->frame();
    json j;
    j["dim"] = map->dim();
    j["s_dim"] = fr.s_dim();
    j["u_dim"] = fr.u_dim();
    j["c_dim"] = fr.c_dim();
    j["lambda_s"] = fr.lambda_s();
    j["lambda_u"] = fr.lambda_u();
    j["kappa"] = dynamics::estimate_kappa(*map);
    j["window"] = cfg.window;
    j["window_range_u"] = manifolds::window_range(*map, Subspace::u, cfg);
    return j;
  });
  auto need = [&] {
    if (!map) throw InvalidInput("map construction failed");
    return &*map;
  };
  b.section("bounds_audit", "invariant-manifold bounds (log growth, kappa-smallness)", [&] {
    const auto a = manifolds::bounds_audit(*need(), cfg, c.samples, c.seed);
    return json{{"samples", a.samples},           {"range", a.range},
                {"log_growth_C", a.item1_C},       {"center_sup", a.item2_sup},
                {"unstable_s_part_sup", a.item3_sup}, {"stable_u_part_sup", a.item4_sup},
                {"slope_ratio", a.item5_ratio},    {"measured_kappa", a.measured_kappa},
                {"kappa_budget", a.kappa_budget},  {"max_residual", a.max_residual}};
  });
  b.section("invariance", "F maps W^sigma(x) onto W^sigma(F(x))", [&] {
    const TorusMapLift& F = *need();
    const auto& fr = F.frame();
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0, 1);
    std::normal_distribution<double> g(0, 1);
    json j;
    for (Subspace s : {Subspace::s, Subspace::u, Subspace::c, Subspace::cs, Subspace::cu}) {
      double worst = 0;
      for (int i = 0; i < c.samples; ++i) {
        Vec x(F.dim());
        for (int k = 0; k < x.size(); ++k) x[k] = unit(rng);
        Vec v(fr.count(s));
        for (int k = 0; k < v.size(); ++k) v[k] = g(rng);
        worst = std::max(worst, manifolds::invariance_residual(F, s, x, v, cfg));
      }
      j[dynamics::to_string(s)] = worst;
    }
    return j;
  });
  b.section("cohomological", "bounded solutions of A^sigma phi - phi o F = psi^sigma", [&] {
    const TorusMapLift& F = *need();
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0, 1);
    json j;
    for (Subspace s : {Subspace::s, Subspace::u}) {
      const manifolds::CohomologicalSolution sol(F, s, manifolds::CohomologicalSolution::terms_for(F, s, 1e-12));
      double res = 0, sup = 0;
      for (int i = 0; i < c.samples; ++i) {
        Vec x(F.dim());
        for (int k = 0; k < x.size(); ++k) x[k] = unit(rng);
        res = std::max(res, sol.equation_residual(x));
        sup = std::max(sup, F.frame().norm(sol(x)));
      }
      j[dynamics::to_string(s)] = {{"terms", sol.terms()},         {"equation_residual", res},
                                   {"sampled_sup", sup},           {"sup_bound", sol.sup_bound()},
                                   {"sup_bound_holds", sup <= sol.sup_bound()}, {"tail_bound", sol.tail_bound()}};
    }
    return j;
  });
  std::optional<holonomy::DriftAudit> drift;
  b.section("drift_audit", "holonomy drift |T_n(x) - x - n^c| <= C log(|n^s||n^u|) + C; Lipschitz growth", [&] {
    holonomy::DriftAuditOptions o;
    o.radius = c.radius;
    o.max_vectors = c.drift_vectors;
    o.probes = c.probes;
    o.seed = c.seed;
    o.workers = c.workers;
    drift = holonomy::drift_audit(*need(), o, cfg);
    b.csv("drift.csv", drift_csv(*drift));
    return json{{"vectors", drift->samples.size()},       {"fitted_C", drift->fitted_C},
                {"max_drift", drift->max_drift},          {"case4_max_drift", drift->case4_max_drift},
                {"case4_within_C", drift->case4_within_C}, {"max_lipschitz", drift->max_lip},
                {"beta_fit", drift->beta_fit},            {"beta_analytic", drift->beta_analytic},
                {"center_rate_gamma", drift->center_rate_gamma}, {"max_residual", drift->max_residual}};
  });
  b.section("group_law", "T_n o T_m = T_{n+m} (holds when accessibility classes are trivial)", [&] {
    const TorusMapLift& F = *need();
    std::mt19937_64 rng(c.seed + 1);
    std::uniform_int_distribution<long> d(-c.radius, c.radius);
    std::uniform_real_distribution<double> z(-1, 1);
    double worst = 0;
    json rows = json::array();
    for (int i = 0; i < 8; ++i) {
      std::vector<long> n(static_cast<size_t>(F.dim())), m(n.size());
      for (auto& v : n) v = d(rng);
      for (auto& v : m) v = d(rng);
      Vec x(F.frame().c_dim());
      for (int k = 0; k < x.size(); ++k) x[k] = z(rng);
      const double def = holonomy::group_law_defect(F, n, m, x, cfg);
      worst = std::max(worst, def);
      rows.push_back({{"n", n}, {"m", m}, {"defect", def}});
    }
    return json{{"max_defect", worst}, {"samples", rows}};
  });
  b.section("accessibility", "su-loop endpoints on W^c(0); trivial vs open accessibility class", [&] {
    const TorusMapLift& F = *need();
    const auto& fr = F.frame();
    const auto r = holonomy::accessibility_probe(
        F, Vec::Zero(F.dim()), holonomy::parameter_grid(fr.count(Subspace::s), c.grid_range, c.grid_points),
        holonomy::parameter_grid(fr.count(Subspace::u), c.grid_range, c.grid_points), cfg, c.workers);
    b.csv("accessibility.csv", accessibility_csv(r));
    return json{{"loops", r.endpoints.size()},
                {"diameter", r.diameter},
                {"accumulated_residual", r.accumulated_residual},
                {"verdict", r.verdict}};
  });
  b.section("recurrence", "box recurrence W^s_eps(W^u_L(W^c_eps(0))) + n, L = eps^-b", [&] {
    const double beta = drift ? std::max(0.0, drift->beta_fit) : 0.0;
    const auto r = holonomy::recurrence_search(*need(), c.recurrence_eps, c.recurrence_b, std::nullopt, cfg, beta);
    return json{{"eps", r.eps},         {"b", r.b},
                {"L", r.L},             {"found", r.found},
                {"n", r.n},             {"defect", r.defect},
                {"beta_used", r.beta_used}, {"gamma_implied", r.gamma_implied},
                {"candidates", r.candidates}, {"evaluated", r.evaluated}};
  });
}

void linearize_into(Builder& b, const ExperimentConfig& c) {
  std::optional<lattice::ToralMatrix> A;
  std::optional<linearization::SpecialVectors> sv;
  b.section("special_vectors", "Diophantine lattice vectors of a companion matrix", [&] {
    A = load_matrix(c);
    sv = linearization::special_vectors(*A);
    json alpha = json::array(), measured = json::array();
    for (const auto& a : sv->alpha) alpha.push_back(a);
    for (const auto& a : sv->alpha_measured) measured.push_back(a);
    return json{{"c1", sv->c1}, {"n", sv->n}, {"alpha", alpha}, {"alpha_measured", measured}};
  });
  b.section("center_projection_scan", "min |n^c| |n|^(r + delta) over the lattice ball", [&] {
    if (!A) throw InvalidInput("no matrix");
    // Enumerated points grow like (2R)^(N-2)/(N-2)!; keep that below ~2e7.
    long radius = c.scan_radius;
    const int free = A->dim() - 2;
    auto work = [&](long r) {
      double w = 1;
      for (int i = 1; i <= free; ++i) w *= 2.0 * static_cast<double>(r) / i;
      return w;
    };
    while (radius > 1 && work(radius) > 2e7) radius = radius * 9 / 10;
    const auto s = lattice::center_projection_scan(*A, radius, 0.1);
    return json{{"radius", s.radius}, {"r", s.r}, {"delta", s.delta}, {"c_estimate", s.c_estimate},
                {"argmin", s.argmin}, {"center_norm", s.center_norm}};
  });
  b.section("diophantine", "Diophantine constants of the special rotations", [&] {
    if (!sv) throw InvalidInput("special vectors unavailable");
    json j;
    if (sv->alpha.size() == 2) {
      const auto d = linearization::diophantine_scan({sv->c1}, 1.0, c.scan_radius);
      j["c1_scan"] = {{"exponent", 1.0}, {"c_est", d.c_est}, {"argmin", d.argmin}};
      const auto s = linearization::simultaneous_scan(sv->alpha[0], sv->alpha[1], 2.0, std::min(c.scan_radius, 400L));
      j["simultaneous"] = {{"exponent", s.exponent}, {"radius", s.radius}, {"c_est", s.c_est}, {"argmin", s.argmin}};
    } else {
      const auto& a = sv->alpha[0];
      const auto d = linearization::diophantine_scan({a[0], a[1]}, 2.1, std::min(c.scan_radius, 400L));
      j["alpha_scan"] = {{"exponent", 2.1}, {"radius", d.radius}, {"c_est", d.c_est}, {"argmin", d.argmin}};
    }
    return j;
  });
  b.section("small_divisor", "M^{-1} with the tame estimate, sigma = 4 + 1/30", [&]() -> json {
    if (!sv) throw InvalidInput("special vectors unavailable");
    if (sv->alpha.size() != 2) throw PreconditionFailed("two rotation vectors are needed (N = 4)");
    const auto v = linearization::SmallDivisorField::random(2, 200, 40, c.seed);
    const auto r = linearization::small_divisor_solve(sv->alpha[0], sv->alpha[1], v, 0.0);
    const auto back = linearization::apply_divisor_operator(sv->alpha[0], sv->alpha[1], r.u);
    double rt = 0;
    for (size_t i = 0; i < back.modes.size(); ++i)
      for (size_t k = 0; k < back.modes[i].value.size(); ++k)
        rt = std::max(rt, std::abs(back.modes[i].value[k] - v.modes[i].value[k]));
    return json{{"modes", v.modes.size()},    {"mu_min", r.mu_min},     {"divisor_floor", r.divisor_floor},
                {"sigma", r.sigma},           {"u_norm_r", r.u_norm_r}, {"v_norm_sigma_plus_r", r.v_norm_sigma_plus_r},
                {"tame_ratio", r.tame_ratio}, {"round_trip", rt}};
  });
  b.section("fundamental_conjugacy", "plane conjugacy h = id + eta with |eta| <= C log+|z| + C", [&] {
    const double amp = std::min(c.eps, 1e-2);
    const std::vector<linearization::PlaneMode> modes{{{0, 1}, {amp, 0.5 * amp}, 0.3}, {{1, 1}, {-0.5 * amp, 0.25 * amp}, 1.1}};
    const auto h = linearization::fundamental_conjugacy(linearization::perturbed_translation({1, 0}, modes),
                                                        linearization::translation_map({0, 1}));
    std::ostringstream os;
    os.precision(17);
    os << "x,y,eta_x,eta_y\n";
    for (int i = 0; i < 32; ++i)
      for (int k = 0; k < 32; ++k) {
        const linearization::P2 z{i / 32.0, k / 32.0};
        const auto e = h.eta(z);
        os << z[0] << ',' << z[1] << ',' << e[0] << ',' << e[1] << '\n';
      }
    b.csv("conjugacy_grid.csv", os.str());
    return json{{"h_at_zero", h.h_at_zero},       {"residual_p1", h.residual_p1},
                {"residual_p2", h.residual_p2},   {"inverse_residual", h.inverse_residual},
                {"eta_sup_grid", h.eta_sup_grid}, {"growth_constant", h.growth_constant},
                {"bump_cr_norm", h.bump_cr_norm}};
  });
  b.section("rotation_drift", "drift dichotomy: linear growth when lambda != 0, C log k + C when lambda = 0", [&] {
    const std::vector<linearization::PlaneMode> h1{{{1, 0}, {1e-2, 0}, 0.2}, {{0, 1}, {0, 1e-2}, 0.7}};
    const linearization::P2 alpha{0.5358983848622454, 0.2};
    const linearization::P2 lam{1e-3, 0};
    linearization::DriftOptions o;
    o.alpha_ref = alpha;
    o.lambda_norm = linearization::norm(lam);
    o.delta = 0.1;
    const auto lin = linearization::rotation_drift(linearization::synthetic_q(lam, alpha, h1), 10000, o);
    const auto flat = linearization::rotation_drift(linearization::synthetic_q({0, 0}, alpha, h1), 10000, o);
    std::ostringstream os;
    os.precision(17);
    os << "k,drift_lambda_nonzero,drift_lambda_zero\n";
    for (size_t i = 0; i < lin.table.size() && i < flat.table.size(); ++i)
      os << lin.table[i].k << ',' << lin.table[i].drift << ',' << flat.table[i].drift << '\n';
    b.csv("rotation_drift.csv", os.str());
    return json{{"lambda_nonzero", {{"slope", lin.slope}, {"lower_bound_holds", lin.lower_bound_holds.value_or(false)},
                                    {"incompatibility_k", lin.incompatibility_k.value_or(-1)}}},
                {"lambda_zero", {{"fitted_C", flat.fitted_c}, {"log_bound_holds", flat.log_bound_holds},
                                 {"slope", flat.slope}}}};
  });
  b.section("center_conjugacy", "H2 = x^s + x^u + h^c with h^c o L_n = R_{n^c} o h^c", [&]() -> json {
    if (!A) throw InvalidInput("no matrix");
    const TorusMapLift F(*A, load_perturbation(c, A->dim()));
    const auto cfg = eval_config(c, F);
    const bool exact = F.is_linear() || F.perturbation().kind == dynamics::PerturbationKind::conjugate;
    if (!exact) throw PreconditionFailed("no center chart is available for this perturbation kind");
    linearization::CenterConjugacyOptions o;
    o.seed = c.seed;
    o.workers = c.workers;
    o.lattice_points = std::min(c.samples, 32);
    o.equivariance_checks = std::min(c.samples, 32);
    o.lipschitz_pairs = c.samples;
    o.accessibility_points = c.grid_points;
    o.accessibility_range = c.grid_range;
    // Throws PreconditionFailed on open accessibility evidence.
    const linearization::CenterConjugacy cc(F, linearization::exact_chart(F, cfg), cfg, o);
    const auto a = cc.audit();
    return json{{"accessibility_verdict", a.accessibility.verdict},
                {"conjugacy_residual", a.conjugacy_residual},
                {"equivariance_residual", a.equivariance_residual},
                {"lipschitz_min", a.lip_min},
                {"lipschitz_max", a.lip_max},
                {"C0", a.C0},
                {"max_residual", a.max_residual}};
  });
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["matrix"] = c.matrix ? json(*c.matrix) : json(nullptr);
  j["matrix_file"] = c.matrix_file;
  j["construct"] = c.construct_d ? json(*c.construct_d) : json(nullptr);
  j["perturb"] = c.perturb;
  j["perturb_file"] = c.perturb_file;
  j["eps"] = c.eps;
  j["window"] = c.window;
  j["newton_tol"] = c.newton_tol;
  j["max_newton"] = c.max_newton;
  j["radius"] = c.radius;
  j["drift_vectors"] = c.drift_vectors;
  j["probes"] = c.probes;
  j["samples"] = c.samples;
  j["scan_radius"] = c.scan_radius;
  j["grid_points"] = c.grid_points;
  j["grid_range"] = c.grid_range;
  j["recurrence_eps"] = c.recurrence_eps;
  j["recurrence_b"] = c.recurrence_b ? json(*c.recurrence_b) : json(nullptr);
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["out_dir"] = c.out_dir;
  return j;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    try {
      if (k == "matrix") c.matrix = v.is_null() ? std::nullopt : std::optional(v.get<std::vector<std::vector<long>>>());
      else if (k == "matrix_file") c.matrix_file = v.get<std::string>();
      else if (k == "construct") c.construct_d = v.is_null() ? std::nullopt : std::optional(v.get<int>());
      else if (k == "perturb") c.perturb = v.get<std::string>();
      else if (k == "perturb_file") c.perturb_file = v.get<std::string>();
      else if (k == "eps") c.eps = v.get<double>();
      else if (k == "window") c.window = v.get<int>();
      else if (k == "newton_tol") c.newton_tol = v.get<double>();
      else if (k == "max_newton") c.max_newton = v.get<int>();
      else if (k == "radius") c.radius = v.get<long>();
      else if (k == "drift_vectors") c.drift_vectors = v.get<int>();
      else if (k == "probes") c.probes = v.get<int>();
      else if (k == "samples") c.samples = v.get<int>();
      else if (k == "scan_radius") c.scan_radius = v.get<long>();
      else if (k == "grid_points") c.grid_points = v.get<int>();
      else if (k == "grid_range") c.grid_range = v.get<double>();
      else if (k == "recurrence_eps") c.recurrence_eps = v.get<double>();
      else if (k == "recurrence_b") c.recurrence_b = v.is_null() ? std::nullopt : std::optional(v.get<double>());
      else if (k == "seed") c.seed = v.get<unsigned long>();
      else if (k == "workers") c.workers = v.get<int>();
      else if (k == "out_dir") c.out_dir = v.get<std::string>();
      else throw InvalidInput("unknown config key: " + k);
    } catch (const json::exception& e) {
      throw InvalidInput("config key " + k + ": " + e.what());
    }
  }
  return c;
}

Report run_classify(const ExperimentConfig& c) {
  Builder b(c);
  classify_into(b, c);
  return b.finish();
}

Report run_construct(const ExperimentConfig& c) {
  Builder b(c);
  construct_into(b, c);
  return b.finish();
}

Report run_dynamics(const ExperimentConfig& c) {
  Builder b(c);
  dynamics_into(b, c);
  return b.finish();
}

Report run_linearize(const ExperimentConfig& c) {
  Builder b(c);
  linearize_into(b, c);
  return b.finish();
}

Report run_all(const ExperimentConfig& c) {
  Builder b(c);
  classify_into(b, c);
  construct_into(b, c);
  dynamics_into(b, c);
  linearize_into(b, c);
  return b.finish();
}

void write_report(const Report& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  {
    std::ofstream f(base / "report.json");
    if (!f) throw InvalidInput("cannot write to " + dir);
    f << r.doc.dump(2) << '\n';
  }
  for (const auto& [name, body] : r.csv) {
    std::ofstream f(base / name);
    f << body;
  }
}

}  // namespace tpa::runner
