#include <doctest.h>

#include <cmath>
#include <random>

#include "tpa/errors.hpp"
#include "tpa/holonomy/holonomy.hpp"
#include "tpa/lattice/construct.hpp"

using namespace tpa;
using namespace tpa::dynamics;
using namespace tpa::holonomy;
using manifolds::ManifoldEvalConfig;

namespace {

const std::vector<std::vector<long>> kIntro = {{0, 0, 0, -1}, {1, 0, 0, 8}, {0, 1, 0, -6}, {0, 0, 1, 8}};

TorusMapLift intro_map(const std::string& preset, double eps) {
  return TorusMapLift(lattice::ToralMatrix(kIntro), perturbation_preset(preset, 4, eps));
}

ManifoldEvalConfig fast_cfg(const TorusMapLift& F) {
  ManifoldEvalConfig cfg;
  cfg.window = manifolds::suggested_window(F);
  return cfg;
}

std::vector<long> random_n(std::mt19937_64& rng, long r) {
  std::uniform_int_distribution<long> d(-r, r);
  return {d(rng), d(rng), d(rng), d(rng)};
}

Vec random_center(std::mt19937_64& rng, double r = 1) {
  std::uniform_real_distribution<double> d(-r, r);
  Vec z(2);
  z << d(rng), d(rng);
  return z;
}

Vec as_vec(const std::vector<long>& n) {
  Vec v(static_cast<int>(n.size()));
  for (size_t i = 0; i < n.size(); ++i) v[static_cast<int>(i)] = static_cast<double>(n[i]);
  return v;
}

std::vector<long> times_A(const std::vector<long>& n) {
  std::vector<long> out(4, 0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[static_cast<size_t>(i)] += kIntro[static_cast<size_t>(i)][static_cast<size_t>(j)] * n[static_cast<size_t>(j)];
  return out;
}

}  // namespace

TEST_SUITE("holonomy_accessibility") {
  TEST_CASE("linear map: holonomies are translations") {
    const TorusMapLift F = intro_map("zero", 0);
    const auto& fr = F.frame();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
      const auto n = random_n(rng, 20);
      const auto m = random_n(rng, 20);
      const Vec z = random_center(rng, 3);
      const HolonomyValue h = holonomy_T(F, n, z);
      CHECK((h.value - z - fr.coords(as_vec(n), Subspace::c)).norm() < 1e-10);
      CHECK(h.remainder.norm() < 1e-10);
      CHECK(group_law_defect(F, n, m, z) < 1e-10);
    }
    const Vec x = (Vec(4) << 0.3, -1.2, 2.5, 0.7).finished();
    CHECK((project_su(F, x).center - fr.coords(x, Subspace::c)).norm() < 1e-12);
  }

  TEST_CASE("n = 0 is the identity and W^c(0) is fixed by the projection") {
    const TorusMapLift F = intro_map("single", 1e-3);
    const ManifoldEvalConfig cfg = fast_cfg(F);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 5; ++i) {
      const Vec z = random_center(rng);
      CHECK((holonomy_T(F, {0, 0, 0, 0}, z, cfg).value - z).norm() < 1e-10);
      const Vec q = manifolds::manifold_point(F, Subspace::c, Vec::Zero(4), z, cfg).point;
      CHECK((project_su(F, q, cfg).point - q).norm() < 1e-10);
    }
    CHECK_THROWS_AS(holonomy_T(F, {1, 2}, Vec::Zero(2), cfg), InvalidInput);
  }

  TEST_CASE("remainder shrinks with the perturbation") {
    std::mt19937_64 rng(7);
    std::vector<std::vector<long>> ns;
    for (int i = 0; i < 20; ++i) ns.push_back(random_n(rng, 5));
    const Vec z = random_center(rng);
    for (const char* preset : {"single", "conjugate"}) {
      double prev = INFINITY;
      for (double eps : {1e-2, 1e-3, 1e-4}) {
        const TorusMapLift F = intro_map(preset, eps);
        const ManifoldEvalConfig cfg = fast_cfg(F);
        double worst = 0;
        for (const auto& n : ns) worst = std::max(worst, holonomy_T(F, n, z, cfg).remainder.norm());
        CHECK(worst > 0);
        CHECK(worst < prev);
        prev = worst;
      }
    }
  }

  TEST_CASE("equivariance under the center return map") {
    const TorusMapLift F = intro_map("single", 1e-3);
    const ManifoldEvalConfig cfg = fast_cfg(F);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 10; ++i) {
      const auto n = random_n(rng, 3);
      const Vec z = random_center(rng);
      const Vec lhs = holonomy_T(F, times_A(n), center_return(F, z, cfg), cfg).value;
      const Vec rhs = center_return(F, holonomy_T(F, n, z, cfg).value, cfg);
      CHECK((lhs - rhs).norm() < 1e-5);

      // F(pi^su(x)) and pi^su(F(x)) are on the same center leaf W^c(0).
      Vec x(4);
      std::uniform_real_distribution<double> d(-2, 2);
      for (int k = 0; k < 4; ++k) x[k] = d(rng);
      const Vec a = F.F(project_su(F, x, cfg).point);
      const Vec b = project_su(F, F.F(x), cfg).point;
      CHECK(manifolds::membership_residual(F, Subspace::c, Vec::Zero(4), a, cfg) < 1e-6);
      CHECK((a - b).norm() < 1e-6);
    }
  }

  TEST_CASE("group law") {
    std::mt19937_64 rng(9);
    const TorusMapLift S = intro_map("single", 1e-2);
    const TorusMapLift C = intro_map("conjugate", 1e-2);
    for (int i = 0; i < 5; ++i) {
      const auto n = random_n(rng, 4);
      auto neg = n;
      for (auto& v : neg) v = -v;
      const Vec z = random_center(rng);
      // Inverse case: T_n(T_{-n}(z)) = T_0(z) = z.
      const double inv = group_law_defect(S, n, neg, z, fast_cfg(S));
      const double direct = (holonomy_T(S, n, holonomy_T(S, neg, z, fast_cfg(S)).value, fast_cfg(S)).value - z).norm();
      CHECK(inv == doctest::Approx(direct).epsilon(1e-6));
      // The conjugate preset has jointly integrable su-foliations.
      CHECK(group_law_defect(C, n, random_n(rng, 4), z, fast_cfg(C)) < 1e-10);
    }
  }

  TEST_CASE("drift audit") {
    DriftAuditOptions opt;
    opt.radius = 3;
    opt.max_vectors = 30;
    opt.probes = 2;
    SUBCASE("linear map") {
      const DriftAudit a = drift_audit(intro_map("zero", 0), opt);
      CHECK(a.samples.size() == 30);
      CHECK(a.fitted_C < 1e-12);
      for (const auto& s : a.samples) {
        CHECK(s.drift < 1e-12);
        CHECK(s.lip_ratio == doctest::Approx(1).epsilon(1e-10));
      }
    }
    SUBCASE("perturbed maps") {
      for (const char* preset : {"single", "conjugate"}) {
        const TorusMapLift F = intro_map(preset, 1e-2);
        const auto& fr = F.frame();
        opt.radius = 50;
        const DriftAudit a = drift_audit(F, opt, fast_cfg(F));
        CHECK(std::isfinite(a.fitted_C));
        CHECK(a.fitted_C > 0);
        for (const auto& s : a.samples) {
          CHECK(s.drift <= a.fitted_C * (std::log(std::max(1.0, s.ns * s.nu)) + 1) + 1e-15);
          const Vec n = as_vec(s.n);
          CHECK(std::fabs(fr.norm(n, Subspace::s) - s.ns) <= 1e-12);
          CHECK(std::fabs(fr.norm(n, Subspace::u) - s.nu) <= 1e-12);
          CHECK(std::fabs(fr.norm(n, Subspace::c) - s.nc) <= 1e-12);
        }
        // The log-log slope stays within the exponent the center rates allow.
        CHECK(a.beta_analytic > 0);
        CHECK(std::fabs(a.beta_fit) <= a.beta_analytic);
        if (std::string(preset) == "conjugate") CHECK(a.case4_within_C);
      }
    }
    SUBCASE("deterministic under seed and workers") {
      const TorusMapLift F = intro_map("single", 1e-3);
      opt.radius = 20;
      opt.max_vectors = 12;
      const DriftAudit a = drift_audit(F, opt, fast_cfg(F));
      opt.workers = 3;
      const DriftAudit b = drift_audit(F, opt, fast_cfg(F));
      REQUIRE(a.samples.size() == b.samples.size());
      for (size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].n == b.samples[i].n);
        CHECK(a.samples[i].drift == b.samples[i].drift);
        CHECK(a.samples[i].lip_ratio == b.samples[i].lip_ratio);
      }
      CHECK(a.fitted_C == b.fitted_C);
      CHECK(a.beta_fit == b.beta_fit);
    }
    CHECK_THROWS_AS(drift_audit(intro_map("zero", 0), DriftAuditOptions{0}), InvalidInput);
  }

  TEST_CASE("accessibility probe") {
    const auto grid = parameter_grid(1, 0.5, 3);
    CHECK(grid.size() == 3);
    CHECK(grid.front()[0] == -0.5);
    CHECK(parameter_grid(2, 1, 3).size() == 9);

    const TorusMapLift L = intro_map("zero", 0);
    const AccessibilityReport lin = accessibility_probe(L, Vec::Zero(4), grid, grid);
    CHECK(lin.diameter < 1e-10);
    CHECK(lin.trivial());
    CHECK(lin.endpoints.size() == 9);

    const TorusMapLift C = intro_map("conjugate", 1e-2);
    const AccessibilityReport conj = accessibility_probe(C, Vec::Zero(4), grid, grid, fast_cfg(C), 2);
    CHECK(conj.trivial());

    const TorusMapLift S = intro_map("single", 1e-2);
    const Vec base = (Vec(4) << 0.1, 0.2, -0.3, 0.05).finished();
    const AccessibilityReport single = accessibility_probe(S, base, grid, grid, fast_cfg(S));
    CHECK(std::isfinite(single.diameter));
    MESSAGE("single-mode eps=1e-2 class diameter " << single.diameter << " (" << single.verdict << ")");
    for (const auto* rep : {&lin, &conj, &single})
      for (const auto& e : rep->endpoints)
        if (e.a.norm() == 0 && e.b.norm() == 0) CHECK(e.e.norm() <= rep->accumulated_residual);

    CHECK_THROWS_AS(accessibility_probe(L, Vec::Zero(4), parameter_grid(2, 1, 2), grid), InvalidInput);
  }

  TEST_CASE("recurrence search") {
    const TorusMapLift L = intro_map("zero", 0);
    const auto& fr = L.frame();
    const double eps = 0.3;
    const RecurrenceSearchResult r = recurrence_search(L, eps, std::nullopt, std::nullopt);
    REQUIRE(r.found);
    CHECK(r.b == 4);  // N / u
    CHECK(r.L == doctest::Approx(std::pow(eps, -4.0)));
    CHECK(r.defect == 0);
    const Vec n = as_vec(r.n);
    CHECK(fr.norm(n, Subspace::u) <= 2 * r.L);
    CHECK(fr.norm(n, Subspace::s) <= 2 * eps);
    CHECK(fr.norm(n, Subspace::c) <= 2 * eps);
    CHECK(r.gamma_implied == doctest::Approx(1));  // b u - (N - u) at beta = 0

    // Sublattice spanned by m, Am, A^2 m, A^3 m for m = 2 e_1, i.e. 2 Z^4.
    const std::vector<long> m = {2, 0, 0, 0};
    const auto rank = lattice::lattice_rank_check(lattice::ToralMatrix(kIntro), {2, 0, 0, 0}, 1);
    CHECK(rank.maximal);
    std::vector<std::vector<long>> cols{m};
    for (int k = 1; k < 4; ++k) cols.push_back(times_A(cols.back()));
    lattice::IntMatrix G(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) G(i, j) = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
    const RecurrenceSearchResult rs = recurrence_search(L, eps, std::nullopt, G);
    CHECK(rs.candidates < r.candidates);
    if (rs.found)
      for (long v : rs.n) CHECK(v % 2 == 0);

    CHECK_THROWS_AS(recurrence_search(L, 1.5, std::nullopt, std::nullopt), InvalidInput);
    ManifoldEvalConfig tiny;
    tiny.window = 4;
    CHECK_THROWS_AS(recurrence_search(L, 0.01, std::nullopt, std::nullopt, tiny), WindowOverflow);
  }

  TEST_CASE("recurrence search on a perturbed map") {
    const TorusMapLift F = intro_map("single", 1e-3);
    const RecurrenceSearchResult r = recurrence_search(F, 0.3, std::nullopt, std::nullopt, fast_cfg(F), 0, 8);
    REQUIRE(r.found);
    CHECK(r.evaluated <= 8);
    CHECK(r.defect < 1e-2);
    const auto& fr = F.frame();
    CHECK(fr.norm(as_vec(r.n), Subspace::u) <= 3 * r.L);
  }
}
