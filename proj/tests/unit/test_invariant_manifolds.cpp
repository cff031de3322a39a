#include <doctest.h>

#include <cmath>
#include <random>

#include "tpa/errors.hpp"
#include "tpa/manifolds/cohomological.hpp"
#include "tpa/manifolds/manifolds.hpp"

using namespace tpa;
using namespace tpa::dynamics;
using namespace tpa::manifolds;

namespace {

const std::vector<std::vector<long>> kIntro = {{0, 0, 0, -1}, {1, 0, 0, 8}, {0, 1, 0, -6}, {0, 0, 1, 8}};
const Subspace kFlavors[] = {Subspace::s, Subspace::u, Subspace::c, Subspace::cs, Subspace::cu};

TorusMapLift intro_map(const std::string& preset, double eps) {
  return TorusMapLift(lattice::ToralMatrix(kIntro), perturbation_preset(preset, 4, eps));
}

Vec random_point(std::mt19937_64& rng, int n, double lo = 0, double hi = 1) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

// Random parameter in E^sigma with adapted norm t.
Vec random_param(std::mt19937_64& rng, const SplittingFrame& fr, Subspace s, double t) {
  std::normal_distribution<double> g(0, 1);
  Vec v(fr.count(s));
  for (int i = 0; i < v.size(); ++i) v[i] = g(rng);
  return v * (t / fr.coords_norm(v, s));
}

}  // namespace

TEST_SUITE("invariant_manifolds") {
  TEST_CASE("linear map: zero sections and linear intersections") {
    const TorusMapLift F = intro_map("zero", 0);
    const auto& fr = F.frame();
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
      const Vec x = random_point(rng, 4, -3, 3);
      for (Subspace s : kFlavors) {
        const Vec v = random_param(rng, fr, s, 5.0);
        const GraphPoint gp = manifold_point(F, s, x, v);
        CHECK(gp.gamma.norm() <= 1e-12);
        CHECK((gp.point - x - fr.embed(v, s)).norm() <= 1e-12);
      }
      const Vec y = random_point(rng, 4, -3, 3);
      // z - x lies in E^s and z - y in E^cu.
      const IntersectionResult r = intersect(F, Subspace::s, x, Subspace::cu, y);
      CHECK((fr.project(r.point, Subspace::cu) - fr.project(x, Subspace::cu)).norm() <= 1e-12);
      CHECK((fr.project(r.point, Subspace::s) - fr.project(y, Subspace::s)).norm() <= 1e-12);
      const IntersectionResult q = intersect(F, Subspace::u, x, Subspace::cs, y);
      CHECK((fr.project(q.point, Subspace::cs) - fr.project(x, Subspace::cs)).norm() <= 1e-12);
      CHECK((fr.project(q.point, Subspace::u) - fr.project(y, Subspace::u)).norm() <= 1e-12);
    }
    const BoundsAudit b = bounds_audit(F, {}, 5);
    CHECK(b.measured_kappa == 0);
    CHECK(b.item1_C == 0);
    CHECK(b.item3_sup == 0);
    CHECK(b.item4_sup == 0);
  }

  TEST_CASE("leaves pass through their base point and are periodic") {
    const TorusMapLift F = intro_map("single", 1e-3);
    const auto& fr = F.frame();
    const Vec zero = Vec::Zero(4);
    std::mt19937_64 rng(12);
    for (Subspace s : kFlavors) {
      const Vec v0 = Vec::Zero(fr.count(s));
      CHECK(manifold_point(F, s, zero, v0).point.norm() <= 1e-12);
      const Vec x = random_point(rng, 4);
      CHECK(manifold_point(F, s, x, v0).gamma.norm() <= 1e-12);
      const Vec v = random_param(rng, fr, s, 1.5);
      Vec n(4);
      n << 3, -2, 7, 1;
      const Vec g1 = manifold_point(F, s, x, v).gamma;
      const Vec g2 = manifold_point(F, s, x + n, v).gamma;
      CHECK((g1 - g2).norm() <= 1e-10);
    }
  }

  TEST_CASE("conjugate preset: leaves equal H(H^-1 x + E^sigma)") {
    // F = H A H^{-1}, so W^sigma_F(x) = H(H^{-1}(x) + E^sigma) exactly.
    const TorusMapLift F = intro_map("conjugate", 1e-2);
    const auto& fr = F.frame();
    std::mt19937_64 rng(13);
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
      const Vec x = random_point(rng, 4);
      for (Subspace s : kFlavors) {
        const Vec e = fr.embed(random_param(rng, fr, s, 0.2 + 3 * i / 10.0), s);
        const Vec p = F.H(F.H_inv(x) + e);
        const Vec v = fr.coords(p - x, s);
        const GraphPoint gp = manifold_point(F, s, x, v);
        worst = std::max(worst, fr.norm(gp.point - p));
      }
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("invariance: F maps W(x) onto W(F(x))") {
    const TorusMapLift F = intro_map("single", 1e-3);
    const auto& fr = F.frame();
    ManifoldEvalConfig cfg;
    cfg.window = 40;
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> size(0.1, 3.0);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const Subspace s = kFlavors[i % 5];
      const Vec x = random_point(rng, 4);
      worst = std::max(worst, invariance_residual(F, s, x, random_param(rng, fr, s, size(rng)), cfg));
    }
    CHECK(worst < 1e-6);
    const Vec x = random_point(rng, 4);
    CHECK(invariance_residual(F, Subspace::u, x, random_param(rng, fr, Subspace::u, 1.0), cfg) < 1e-6);
  }

  TEST_CASE("graph transform reproduces the computed section") {
    const TorusMapLift F = intro_map("double", 1e-3);
    const auto& fr = F.frame();
    std::mt19937_64 rng(15);
    const Subspace flavors[] = {Subspace::s, Subspace::u, Subspace::cs, Subspace::cu};
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
      const Subspace s = flavors[i % 4];
      const Vec x = random_point(rng, 4);
      const Vec v = random_param(rng, fr, s, 0.5 + i / 10.0);
      const Vec g = manifold_point(F, s, x, v).gamma;
      worst = std::max(worst, fr.norm(graph_transform_apply(F, s, x, v) - g));
    }
    CHECK(worst < 1e-6);
  }

  TEST_CASE("intersections: membership, uniqueness, contraction") {
    const TorusMapLift F = intro_map("single", 1e-3);
    const auto& fr = F.frame();
    std::mt19937_64 rng(16);
    const BoundsAudit audit = bounds_audit(F, {}, 4, 3);
    for (int i = 0; i < 4; ++i) {
      const Vec x = random_point(rng, 4), y = random_point(rng, 4);
      for (auto [a, b] : {std::pair{Subspace::s, Subspace::cu}, std::pair{Subspace::u, Subspace::cs}}) {
        const IntersectionResult r = intersect(F, a, x, b, y);
        CHECK(r.residual_a < 1e-10);
        CHECK(r.residual_b < 1e-10);
        CHECK(r.contraction_rate <= audit.measured_kappa * audit.measured_kappa + 1e-3);
        for (int k = 0; k < 10; ++k) {
          const Vec seed = fr.project(random_point(rng, 4, -5, 5), b);
          const IntersectionResult q = intersect(F, a, x, b, y, {}, seed);
          CHECK(fr.norm(q.point - r.point) < 1e-9);
        }
        // Swapped order gives the same point.
        const IntersectionResult w = intersect(F, b, y, a, x);
        CHECK(fr.norm(w.point - r.point) < 1e-9);
      }
      const IntersectionResult same = intersect(F, Subspace::s, x, Subspace::cu, x);
      CHECK(fr.norm(same.point - x) < 1e-12);
    }
    CHECK_THROWS_AS(intersect(F, Subspace::s, Vec::Zero(4), Subspace::u, Vec::Zero(4)), InvalidInput);
  }

  TEST_CASE("bounds audit: measured constants within the kappa budget") {
    const TorusMapLift F = intro_map("single", 1e-3);
    const BoundsAudit b = bounds_audit(F, {}, 10, 7);
    CHECK(b.measured_kappa > 0);
    CHECK(b.measured_kappa < b.kappa_budget);
    CHECK(b.item3_sup <= b.item2_sup);
    CHECK(b.item4_sup <= b.item2_sup);
    CHECK(std::isfinite(b.item1_C));
  }

  TEST_CASE("window overflow and input checks") {
    const TorusMapLift F = intro_map("single", 1e-3);
    ManifoldEvalConfig cfg;
    cfg.window = 10;
    const double big = 2 * window_range(F, Subspace::u, cfg);
    Vec v(1);
    v << big / F.frame().coords_norm(Vec::Ones(1), Subspace::u);
    CHECK_THROWS_AS(manifold_point(F, Subspace::u, Vec::Zero(4), v, cfg), WindowOverflow);
    CHECK_THROWS_AS(manifold_point(F, Subspace::u, Vec::Zero(4), Vec::Zero(2)), InvalidInput);
    CHECK_THROWS_AS(manifold_point(F, Subspace::su, Vec::Zero(4), Vec::Zero(2)), InvalidInput);
  }

  TEST_CASE("cohomological equation") {
    std::mt19937_64 rng(17);
    for (const char* preset : {"single", "double", "conjugate"}) {
      const TorusMapLift F = intro_map(preset, 1e-3);
      const auto& fr = F.frame();
      for (Subspace w : {Subspace::s, Subspace::u}) {
        const int K = CohomologicalSolution::terms_for(F, w, 1e-10);
        CHECK(std::pow(w == Subspace::s ? fr.lambda_s() : 1 / fr.lambda_u(), K) < 1e-10);
        const CohomologicalSolution phi(F, w, K);
        double worst = 0, sup = 0, period = 0;
        for (int i = 0; i < 1000; ++i) {
          const Vec x = random_point(rng, 4);
          worst = std::max(worst, phi.equation_residual(x));
          const Vec p = phi(x);
          sup = std::max(sup, fr.norm(p));
          if (i < 50) {
            Vec n(4);
            n << i % 3 - 1, 2, -(i % 5), 1;
            period = std::max(period, fr.norm(phi(x + n) - p));
          }
          CHECK(fr.norm(p - fr.project(p, w)) <= 1e-15);
        }
        CHECK(worst < 1e-8);
        CHECK(sup <= phi.sup_bound());
        CHECK(period < 1e-10);
        // Tail: the K-term sum and a much longer one differ by at most the bound.
        const CohomologicalSolution longer(F, w, 3 * K);
        const Vec x = random_point(rng, 4);
        CHECK(fr.norm(longer(x) - phi(x)) <= phi.tail_bound() + 1e-15);
      }
    }
    const TorusMapLift L = intro_map("zero", 0);
    CHECK(CohomologicalSolution(L, Subspace::s, 10)(Vec::Constant(4, 0.3)).norm() == 0);
    CHECK_THROWS_AS(CohomologicalSolution(L, Subspace::c, 10), InvalidInput);
  }

  TEST_CASE("local holonomy along unstable leaves") {
    std::mt19937_64 rng(18);
    const Vec y = random_point(rng, 4);
    const Vec zc = Vec::Constant(2, 0.4);
    {
      const TorusMapLift L = intro_map("zero", 0);
      const auto& fr = L.frame();
      const Vec x = y + fr.embed(random_param(rng, fr, Subspace::cu, 1.5), Subspace::cu);
      const LocalHolonomy P(L, x, y);
      CHECK((P(zc) - zc - fr.coords(x - y, Subspace::c)).norm() <= 1e-12);
      CHECK(P.remainder(zc).norm() <= 1e-12);
      const LocalHolonomy I(L, y, y);
      CHECK((I(zc) - zc).norm() <= 1e-12);
    }
    // The remainder and its derivative shrink with the perturbation.
    std::mt19937_64 r2(19);
    const Vec w0 = random_point(r2, 3, -1, 1);
    double prev_sup = INFINITY, prev_der = INFINITY;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const TorusMapLift F = intro_map("single", eps);
      const auto& fr = F.frame();
      const Vec w = w0 * (1.5 / fr.coords_norm(w0, Subspace::cu));
      const Vec x = manifold_point(F, Subspace::cu, y, w).point;
      const LocalHolonomy P(F, x, y);
      const LocalHolonomy I(F, y, y);
      CHECK((I(zc) - zc).norm() <= 1e-10);
      double sup = 0, der = 0;
      for (double t : {-1.0, 0.0, 1.0}) {
        const Vec z = Vec::Constant(2, t);
        sup = std::max(sup, fr.coords_norm(P.remainder(z), Subspace::c));
        der = std::max(der, P.remainder_jacobian(z).norm());
      }
      CHECK(sup < prev_sup);
      CHECK(der < prev_der);
      prev_sup = sup;
      prev_der = der;
    }
    const TorusMapLift F = intro_map("single", 1e-3);
    const Vec off = y + F.frame().embed(Vec::Ones(1), Subspace::s);
    CHECK_THROWS_AS(LocalHolonomy(F, off, y), InvalidInput);
  }

  TEST_CASE("manifold trace csv") {
    const TorusMapLift F = intro_map("single", 1e-3);
    const std::string csv = manifold_trace_csv(F, Subspace::u, Vec::Zero(4), Vec::Ones(1), 2.0, 5);
    CHECK(csv.rfind("t,x0,x1,x2,x3,residual\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  }
}
