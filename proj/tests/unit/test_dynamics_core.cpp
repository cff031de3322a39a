#include <doctest.h>

#include <cmath>
#include <random>

#include "tpa/dynamics/lift.hpp"
#include "tpa/errors.hpp"
#include "tpa/lattice/construct.hpp"

using namespace tpa;
using namespace tpa::dynamics;

namespace {

const std::vector<std::vector<long>> kIntro = {{0, 0, 0, -1}, {1, 0, 0, 8}, {0, 1, 0, -6}, {0, 0, 1, 8}};
const std::vector<std::vector<long>> kCat = {{2, 1}, {1, 1}};

Vec random_vec(std::mt19937_64& rng, int n, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

double inf(const Vec& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("dynamics_core") {
  TEST_CASE("splitting of the intro matrix") {
    auto f = build_splitting(lattice::ToralMatrix(kIntro));
    CHECK(f.s_dim() == 1);
    CHECK(f.u_dim() == 1);
    CHECK(f.c_dim() == 2);
    // Hyperbolic pair: lambda + 1/lambda = 4 + 2 sqrt 3.
    const double t = 4 + 2 * std::sqrt(3.0);
    const double lu = (t + std::sqrt(t * t - 4)) / 2;
    CHECK(f.lambda_u() == doctest::Approx(lu).epsilon(1e-13));
    CHECK(f.lambda_s() == doctest::Approx(1 / lu).epsilon(1e-13));
    CHECK(f.lambda_u() == doctest::Approx(7.3276).epsilon(1e-4));
    CHECK(f.lambda_s() == doctest::Approx(0.13646).epsilon(1e-4));
    REQUIRE(f.c1().has_value());
    CHECK(std::fabs(*f.c1() - (4 - 2 * std::sqrt(3.0))) < 1e-15);
    CHECK(std::fabs(2 * std::cos(*f.theta_c()) - *f.c1()) < 1e-15);
  }

  TEST_CASE("splitting of the cat map and rejection of the identity") {
    auto f = build_splitting(lattice::ToralMatrix(kCat));
    CHECK(f.s_dim() == 1);
    CHECK(f.u_dim() == 1);
    CHECK(f.c_dim() == 0);
    CHECK(f.lambda_u() == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-14));
    CHECK_FALSE(f.c1().has_value());
    CHECK_THROWS_AS(build_splitting(lattice::ToralMatrix::identity(2)), PreconditionFailed);
  }

  TEST_CASE("projections: reconstruction, idempotence, block structure") {
    for (int d : {0, 3, 4}) {
      lattice::ToralMatrix a = d == 0 ? lattice::ToralMatrix(kIntro) : lattice::construct_pseudo_anosov(d).A;
      auto f = build_splitting(a);
      const int n = f.dim();
      CHECK(f.s_dim() + f.u_dim() + f.c_dim() == n);
      Mat sum = f.projector(Subspace::s) + f.projector(Subspace::u) + f.projector(Subspace::c);
      CHECK((sum - Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
      for (Subspace s : {Subspace::s, Subspace::u, Subspace::c, Subspace::cs, Subspace::cu, Subspace::su}) {
        Mat P = f.projector(s);
        CHECK((P * P - P).cwiseAbs().maxCoeff() < 1e-12);
      }
      std::mt19937_64 rng(1);
      double worst = 0;
      for (int k = 0; k < 1000; ++k) {
        Vec v = random_vec(rng, n, -10, 10);
        Vec r = f.project(v, Subspace::s) + f.project(v, Subspace::u) + f.project(v, Subspace::c) - v;
        worst = std::max(worst, inf(r) / std::max(1.0, inf(v)));
        Vec c = f.project(v, Subspace::c);
        CHECK(inf(f.project(c, Subspace::c) - c) < 1e-12 * std::max(1.0, inf(v)));
        CHECK(inf(f.project(c, Subspace::su)) < 1e-12 * std::max(1.0, inf(v)));
      }
      CHECK(worst < 1e-12);
    }
  }

  TEST_CASE("adapted norm: center isometry and hyperbolic rates") {
    auto f = build_splitting(lattice::construct_pseudo_anosov(4).A);
    std::mt19937_64 rng(2);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
      Vec v = f.project(random_vec(rng, f.dim()), Subspace::c);
      worst = std::max(worst, std::fabs(f.norm(f.A() * v) - f.norm(v)));
    }
    CHECK(worst < 1e-12);
    // Iterate with the real matrix, re-projecting to remove round-off drift.
    for (int trial = 0; trial < 20; ++trial) {
      Vec vs = f.project(random_vec(rng, f.dim()), Subspace::s);
      Vec vu = f.project(random_vec(rng, f.dim()), Subspace::u);
      const double ns = f.norm(vs), nu = f.norm(vu);
      Vec ws = vs, wu = vu;
      for (int k = 1; k <= 50; ++k) {
        ws = f.project(f.A() * ws, Subspace::s);
        wu = f.project(f.A_inv() * wu, Subspace::u);
        CHECK(f.norm(ws) <= std::pow(f.lambda_s(), k) * ns * (1 + 1e-9));
        CHECK(f.norm(wu) <= std::pow(1 / f.lambda_u(), k) * nu * (1 + 1e-9));
      }
    }
    // One step: |A v| splits into the per-block bounds.
    Vec v = random_vec(rng, f.dim());
    Vec av = f.A() * v;
    CHECK(f.norm(av, Subspace::s) <= f.lambda_s() * f.norm(v, Subspace::s) * (1 + 1e-9));
    CHECK(f.norm(av, Subspace::u) >= f.lambda_u() * f.norm(v, Subspace::u) * (1 - 1e-9));
    CHECK(std::fabs(f.norm(av, Subspace::c) - f.norm(v, Subspace::c)) < 1e-12);
  }

  TEST_CASE("apply_power matches repeated D") {
    auto f = build_splitting(lattice::ToralMatrix(kIntro));
    std::mt19937_64 rng(3);
    Vec y = random_vec(rng, f.count(Subspace::c));
    Vec z = y;
    for (int k = 0; k < 7; ++k) z = f.apply_power(z, Subspace::c, 1);
    CHECK(inf(z - f.apply_power(y, Subspace::c, 7)) < 1e-13);
    CHECK(inf(f.apply_power(f.apply_power(y, Subspace::c, -5), Subspace::c, 5) - y) < 1e-13);
  }

  TEST_CASE("lift: linear case, periodicity and inverse round trip") {
    lattice::ToralMatrix a(kIntro);
    TorusMapLift lin(a, perturbation_preset("zero", 4, 0));
    std::mt19937_64 rng(4);
    Vec x = random_vec(rng, 4);
    CHECK(inf(lin.F(x) - lin.frame().A() * x) == 0.0);
    CHECK(inf(lin.F_inv(x) - lin.frame().A_inv() * x) == 0.0);
    CHECK(lin.kappa() == 0.0);

    for (const auto& name : perturbation_preset_names()) {
      for (int d : {0, 3}) {
        lattice::ToralMatrix m = d == 0 ? a : lattice::construct_pseudo_anosov(d).A;
        const int n = m.dim();
        TorusMapLift map(m, perturbation_preset(name, n, 1e-2));
        CAPTURE(name);
        CAPTURE(d);
        CHECK(inf(map.F(Vec::Zero(n))) < 1e-15);
        double worst_rt = 0, worst_per = 0;
        std::uniform_int_distribution<int> pick(-3, 3);
        for (int k = 0; k < 1000; ++k) {
          Vec y = random_vec(rng, n, 0, 1);
          worst_rt = std::max(worst_rt, inf(map.F(map.F_inv(y)) - y));
          Vec nn(n);
          for (int i = 0; i < n; ++i) nn[i] = pick(rng);
          worst_per = std::max(worst_per, inf(map.F(y + nn) - map.F(y) - map.frame().A() * nn));
        }
        CHECK(worst_rt < 1e-12);
        CHECK(worst_per < 1e-12);
      }
    }
  }

  TEST_CASE("DF matches finite differences") {
    lattice::ToralMatrix a(kIntro);
    std::mt19937_64 rng(5);
    for (const auto& name : {"single", "double", "conjugate"}) {
      TorusMapLift map(a, perturbation_preset(name, 4, 5e-2));
      Vec x = random_vec(rng, 4, 0, 1);
      Mat J = map.DF(x);
      const double h = 1e-6;
      for (int j = 0; j < 4; ++j) {
        Vec e = Vec::Zero(4);
        e[j] = h;
        Vec col = (map.F(x + e) - map.F(x - e)) / (2 * h);
        CHECK(inf(col - J.col(j)) < 1e-7);
      }
    }
  }

  TEST_CASE("presets have the requested C1 size") {
    for (const auto& name : {"single", "double", "conjugate"}) {
      auto p = perturbation_preset(name, 4, 1e-3);
      CHECK(p.cr_bound(1) == doctest::Approx(1e-3).epsilon(1e-12));
      CHECK(inf(p.eval(Vec::Zero(4))) == 0.0);
    }
    CHECK(perturbation_preset("zero", 4, 1.0).empty());
    CHECK_THROWS_AS(perturbation_preset("nope", 4, 1.0), InvalidInput);
  }

  TEST_CASE("estimate_kappa closed forms") {
    lattice::ToralMatrix a(kIntro);
    auto frame = std::make_shared<const SplittingFrame>(build_splitting(a));
    CHECK(estimate_kappa(TorusMapLift(a, frame, {})) == 0.0);
    PerturbationSpec one;
    Vec amp(4);
    amp << 1e-3, -2e-3, 0.5e-3, 1e-3;
    one.modes.push_back({{1, 0, 2, 0}, amp, 0.3});
    Vec m(4);
    m << 1, 0, 2, 0;
    const double k1 = 2 * M_PI * frame->norm(amp) * frame->dual_norm(m);
    CHECK(estimate_kappa(TorusMapLift(a, frame, one)) == doctest::Approx(k1).epsilon(1e-14));
    // Conditioning factor: the adapted norms are equivalent to Euclidean ones.
    CHECK(k1 >= 0.0);
    PerturbationSpec two = one;
    Vec amp2(4);
    amp2 << 0, 1e-3, 0, -1e-3;
    two.modes.push_back({{0, 1, 0, -1}, amp2, 0.0});
    Vec m2(4);
    m2 << 0, 1, 0, -1;
    const double k2 = 2 * M_PI * frame->norm(amp2) * frame->dual_norm(m2);
    CHECK(estimate_kappa(TorusMapLift(a, frame, two)) == doctest::Approx(k1 + k2).epsilon(1e-14));
    // Measured Lipschitz ratio never exceeds the bound.
    TorusMapLift map(a, frame, two);
    std::mt19937_64 rng(6);
    for (int k = 0; k < 200; ++k) {
      Vec x = random_vec(rng, 4, 0, 1), y = x + random_vec(rng, 4, -1e-3, 1e-3);
      double ratio = frame->norm(map.phi(x) - map.phi(y)) / frame->norm(x - y);
      CHECK(ratio <= map.kappa() * (1 + 1e-6));
    }
  }

  TEST_CASE("transport_map") {
    lattice::ToralMatrix cat(kCat);
    TorusMapLift f(cat, perturbation_preset("single", 2, 1e-2));
    lattice::IntMatrix L(std::vector<std::vector<long>>{{1, 2}, {0, 1}});
    TorusMapLift g = transport_map(f, L);
    CHECK(g.matrix().matrix() == lattice::IntMatrix(std::vector<std::vector<long>>{{0, -1}, {1, 3}}));
    const Mat Ld = to_mat(L), Li = Ld.inverse();
    std::mt19937_64 rng(7);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
      Vec x = random_vec(rng, 2, -2, 2);
      worst = std::max(worst, inf(g.F(Li * x) - Li * f.F(x)));
    }
    CHECK(worst < 1e-10);

    TorusMapLift same = transport_map(f, lattice::IntMatrix::identity(2));
    Vec x = random_vec(rng, 2);
    CHECK(inf(same.F(x) - f.F(x)) < 1e-15);
    TorusMapLift lin = transport_map(TorusMapLift(cat, {}), L);
    CHECK(lin.is_linear());
    CHECK(inf(lin.F(x) - lin.frame().A() * x) == 0.0);
    CHECK_THROWS_AS(transport_map(f, lattice::IntMatrix(std::vector<std::vector<long>>{{1, 1}, {1, 1}})), InvalidInput);
  }
}
