#include <doctest.h>

#include <random>

#include "tpa/errors.hpp"
#include "tpa/linearization/center_conjugacy.hpp"

using namespace tpa;
using namespace tpa::dynamics;
using namespace tpa::linearization;

namespace {

const std::vector<std::vector<long>> kIntro = {{0, 0, 0, -1}, {1, 0, 0, 8}, {0, 1, 0, -6}, {0, 0, 1, 8}};

TorusMapLift intro_map(const std::string& preset, double eps) {
  return TorusMapLift(lattice::ToralMatrix(kIntro), perturbation_preset(preset, 4, eps));
}

}  // namespace

TEST_SUITE("center_conjugacy") {
  TEST_CASE("unperturbed map: H2 is the identity") {
    const TorusMapLift F = intro_map("zero", 0);
    CenterConjugacyOptions opt;
    opt.lipschitz_pairs = 200;
    const CenterConjugacy cc(F, identity_chart(), {}, opt);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-5, 5);
    for (int i = 0; i < 200; ++i) {
      Vec x(4);
      for (int k = 0; k < 4; ++k) x[k] = d(rng);
      CHECK((cc.H2(x) - x).norm() < 1e-12);
    }
    const CenterConjugacyAudit a = cc.audit();
    CHECK(a.conjugacy_residual < 1e-12);
    CHECK(a.equivariance_residual < 1e-12);
    CHECK(a.lip_min == doctest::Approx(1).epsilon(1e-12));
    CHECK(a.lip_max == doctest::Approx(1).epsilon(1e-12));
  }

  TEST_CASE("conjugate preset with its exact chart") {
    const TorusMapLift F = intro_map("conjugate", 1e-3);
    manifolds::ManifoldEvalConfig cfg;
    cfg.window = manifolds::suggested_window(F);
    CenterConjugacyOptions opt;
    opt.lattice_points = 12;
    opt.equivariance_checks = 12;
    opt.lipschitz_pairs = 24;
    const CenterConjugacy cc(F, exact_chart(F, cfg), cfg, opt);
    CHECK(cc.accessibility().trivial());
    const CenterConjugacyAudit a = cc.audit();
    CHECK(a.equivariance_residual < 1e-5);
    CHECK(a.conjugacy_residual < 1e-5);
    CHECK(std::isfinite(a.C0));
    CHECK(a.lip_min > 0.9);
    CHECK(a.lip_max < 1.1);
    // h^c(0) = 0 since H fixes the origin.
    CHECK(cc.hc(Vec::Zero(4)).norm() < 1e-12);
  }

  TEST_CASE("non-trivial accessibility evidence is refused") {
    const TorusMapLift F = intro_map("single", 1e-2);
    manifolds::ManifoldEvalConfig cfg;
    cfg.window = manifolds::suggested_window(F);
    CHECK_THROWS_AS(CenterConjugacy(F, identity_chart(), cfg), PreconditionFailed);
    CHECK_THROWS_AS(exact_chart(F), InvalidInput);
  }
}
