#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "tpa/errors.hpp"
#include "tpa/lattice/construct.hpp"
#include "tpa/linearization/conjugacy.hpp"
#include "tpa/linearization/diophantine.hpp"
#include "tpa/linearization/drift.hpp"
#include "tpa/linearization/small_divisor.hpp"

using namespace tpa;
using namespace tpa::linearization;

namespace {

const std::vector<std::vector<long>> kIntro = {{0, 0, 0, -1}, {1, 0, 0, 8}, {0, 1, 0, -6}, {0, 0, 1, 8}};

// ||x|| in long double.
long double dist_ld(long double x) { return std::fabs(x - std::round(x)); }

}  // namespace

TEST_SUITE("linearization") {
  TEST_CASE("golden mean: best approximations are Fibonacci numbers") {
    const long double phi = (std::sqrt(5.0L) - 1) / 2;
    // Continued fraction [0; 1, 1, 1, ...]: convergents F_{k-1}/F_k, and
    // F_k |F_k phi - F_{k-1}| -> 1/sqrt 5 alternating around the limit.
    std::vector<long> fib{1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597};
    double prev = INFINITY;
    for (size_t i = 1; i < fib.size(); ++i) {
      const long q = fib[i], p = fib[i - 1];
      auto res = diophantine_scan({static_cast<double>(phi)}, 1.0, q);
      REQUIRE(res.best_q);
      CHECK(*res.best_q == q);
      // Same double-rounded alpha as the scan sees.
      const long double phid = static_cast<double>(phi);
      const long double oracle = q * std::fabs(q * phid - p);
      CHECK(std::fabs(*res.best_q_value - static_cast<double>(oracle)) < 1e-12);
      if (q >= 8) CHECK(std::fabs(*res.best_q_value - 1 / std::sqrt(5.0)) < 0.01);
      CHECK(res.c_est <= prev);
      prev = res.c_est;
    }
    // The global minimum sits at n = 1 for this alpha.
    CHECK(diophantine_scan({static_cast<double>(phi)}, 1.0, 1000).argmin == std::vector<long>{1});
  }

  TEST_CASE("rational alpha: zero at the denominator") {
    CHECK(diophantine_scan({0.5}, 1.0, 10).c_est == 0);
    CHECK(diophantine_scan({0.5}, 1.0, 10).argmin == std::vector<long>{2});
    for (auto [p, q] : std::vector<std::pair<long, long>>{{1, 3}, {3, 7}, {5, 12}, {17, 41}}) {
      auto below = diophantine_scan_rational({p}, q, 1.0, q - 1);
      auto at = diophantine_scan_rational({p}, q, 1.0, q);
      CHECK(below.c_est > 0);
      CHECK(at.c_est == 0);
      CHECK(at.argmin == std::vector<long>{q});
    }
    auto two = diophantine_scan_rational({1, 2}, 5, 1.5, 6);
    CHECK(two.c_est == 0);
    long l1 = std::labs(two.argmin[0]) + std::labs(two.argmin[1]);
    CHECK(l1 <= 5);
  }

  TEST_CASE("two-component scan matches a direct loop") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 4; ++trial) {
      const double a1 = u(rng), a2 = u(rng), e = 1.5 + trial * 0.3;
      const long R = 120;
      long double best = INFINITY;
      std::vector<long> arg;
      for (long n1 = -R; n1 <= R; ++n1)
        for (long n2 = -R; n2 <= R; ++n2) {
          const long l1 = std::labs(n1) + std::labs(n2);
          if (l1 == 0 || l1 > R) continue;
          const long double v = dist_ld(n1 * static_cast<long double>(a1) + n2 * static_cast<long double>(a2)) *
                                std::pow(static_cast<long double>(l1), static_cast<long double>(e));
          if (v < best) {
            best = v;
            arg = n1 > 0 || (n1 == 0 && n2 > 0) ? std::vector<long>{n1, n2} : std::vector<long>{-n1, -n2};
          }
        }
      auto res = diophantine_scan({a1, a2}, e, R);
      CHECK(res.c_est == doctest::Approx(static_cast<double>(best)).epsilon(1e-9));
      CHECK(res.argmin == arg);
    }
  }

  TEST_CASE("constructed N = 6: scan of (-c1, c1^2) at radius 1e4") {
    auto sv = special_vectors(lattice::construct_pseudo_anosov(3).A);
    REQUIRE(sv.alpha.size() == 1);
    const auto t0 = std::chrono::steady_clock::now();
    auto res = diophantine_scan({sv.alpha[0][0], sv.alpha[0][1]}, 2.1, 10000);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(res.c_est > 0);
    CHECK(secs < 30);
    auto small = diophantine_scan({sv.alpha[0][0], sv.alpha[0][1]}, 2.1, 100);
    CHECK(res.c_est <= small.c_est);
  }

  TEST_CASE("special vectors") {
    auto sv = special_vectors(lattice::ToralMatrix(kIntro));
    REQUIRE(sv.n.size() == 2);
    CHECK(sv.n[0] == std::vector<long>{8, -5, 8, -1});
    CHECK(sv.n[1] == std::vector<long>{1, 0, 1, 0});
    // c1 is the root of z^2 - 8z + 4 in (-2, 2).
    CHECK(sv.c1 == doctest::Approx(4 - 2 * std::sqrt(3.0)).epsilon(1e-15));
    for (size_t i = 0; i < 2; ++i)
      for (size_t k = 0; k < 2; ++k) CHECK(std::fabs(sv.alpha[i][k] - sv.alpha_measured[i][k]) < 1e-10);
    CHECK(sv.alpha[0][0] == doctest::Approx(0.5358983848622454));

    for (int d : {3, 4}) {
      auto s = special_vectors(lattice::construct_pseudo_anosov(d).A);
      REQUIRE(s.n.size() == 1);
      std::vector<long> e24(static_cast<size_t>(2 * d), 0);
      e24[1] = e24[3] = 1;
      CHECK(s.n[0] == e24);
      CHECK(std::fabs(s.alpha[0][0] - s.alpha_measured[0][0]) < 1e-10);
      CHECK(std::fabs(s.alpha[0][1] - s.alpha_measured[0][1]) < 1e-10);
    }
    // Transposed intro matrix is not in companion form.
    std::vector<std::vector<long>> t(4, std::vector<long>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) t[static_cast<size_t>(i)][static_cast<size_t>(j)] = kIntro[static_cast<size_t>(j)][static_cast<size_t>(i)];
    CHECK_THROWS_AS(special_vectors(lattice::ToralMatrix(t)), InvalidInput);
    CHECK_THROWS_AS(special_vectors(lattice::ToralMatrix(std::vector<std::vector<long>>{{0, 1}, {1, 1}})), InvalidInput);
  }

  TEST_CASE("small divisor operator") {
    const double c1 = 4 - 2 * std::sqrt(3.0);
    const std::array<double, 2> a1{c1, 0}, a2{0, c1};

    // Single mode.
    auto one = SmallDivisorField::from_half(1, {{{3, -2}, {std::complex<double>(0.7, -0.2)}}});
    auto sol = small_divisor_solve(a1, a2, one, 0);
    const double s1 = std::sin(std::acos(-1.0L) * 3 * c1), s2 = std::sin(std::acos(-1.0L) * -2 * c1);
    const double mu = 4 * (s1 * s1 + s2 * s2);
    CHECK(std::abs(sol.u.modes[0].value[0] - std::complex<double>(0.7, -0.2) / mu) < 1e-14);
    CHECK(sol.u.real_valued(0));

    // Round trip and divisor floor on 10^3 modes.
    auto v = SmallDivisorField::random(2, 500, 60, 11);
    REQUIRE(v.modes.size() == 1000);
    CHECK(v.real_valued(0));
    auto res = small_divisor_solve(a1, a2, v, 0);
    auto back = apply_divisor_operator(a1, a2, res.u);
    double err = 0;
    for (size_t i = 0; i < v.modes.size(); ++i)
      for (size_t c = 0; c < 2; ++c) err = std::max(err, std::abs(back.modes[i].value[c] - v.modes[i].value[c]));
    CHECK(err < 1e-12);
    // mu_j >= 16 max_nu ||j.alpha_nu||^2 >= 16 c^2 / |j|^2 with c the exponent-1 simultaneous constant.
    auto scan = simultaneous_scan(a1, a2, 1.0, v.max_j());
    CHECK(scan.c_est > 0);
    CHECK(res.divisor_floor >= 16 * scan.c_est * scan.c_est);
    CHECK(res.divisor_floor >= scan.c_est);
    // |M^-1 v|_0 <= |v|_2 / (16 c^2) <= |v|_sigma / (16 c^2).
    CHECK(res.tame_ratio <= 1 / (16 * scan.c_est * scan.c_est));
    CHECK(res.sigma == doctest::Approx(4 + 1.0 / 30));

    // Resonance: alpha = (1/2, 0) kills j = (2, 0).
    auto res_field = SmallDivisorField::from_half(1, {{{2, 0}, {std::complex<double>(1, 0)}}});
    CHECK_THROWS_AS(small_divisor_solve({0.5, 0}, {0, 0.5}, res_field, 0), NumericalFailure);
  }

  TEST_CASE("bump profile") {
    BumpProfile psi{0.125, 3};
    CHECK(psi(0.1) == 0);
    CHECK(psi(0.9) == 1);
    CHECK(psi(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    for (double x = 0; x <= 1; x += 0.01) CHECK(std::fabs(psi(1 - x) - (1 - psi(x))) < 1e-14);
    // Smooth joins: derivative vanishes at the ends.
    CHECK(std::fabs(psi.derivative(0.125 + 1e-9)) < 1e-12);
    CHECK(psi.cr_norm(3) > 1);
  }

  TEST_CASE("fundamental conjugacy") {
    ConjugacyOptions opt;
    // Identity inputs: h = id exactly.
    auto id = fundamental_conjugacy(translation_map({1, 0}), translation_map({0, 1}), opt);
    CHECK(id.identity);
    CHECK(id.h.fwd({0.3, -7.1}) == P2{0.3, -7.1});

    // P1 = R_(1,0) + small mode, P2 = R_(0,1): these commute.
    const std::vector<PlaneMode> m1{{{0, 1}, {2e-3, 1e-3}, 0.3}, {{1, 1}, {-1e-3, 5e-4}, 1.1}};
    auto b = fundamental_conjugacy(perturbed_translation({1, 0}, m1), translation_map({0, 1}), opt);
    CHECK(b.h_at_zero == 0);
    CHECK(b.residual_p1 < 1e-8);
    CHECK(b.residual_p2 < 1e-8);
    CHECK(b.inverse_residual < 1e-10);
    CHECK(std::isfinite(b.growth_constant));
    CHECK(b.eta_sup_grid > 0);

    // Halving the perturbation at least halves sup |eta| (to first order).
    std::vector<PlaneMode> half = m1;
    for (auto& m : half) m.amp = 0.5 * m.amp;
    auto bh = fundamental_conjugacy(perturbed_translation({1, 0}, half), translation_map({0, 1}), opt);
    CHECK(bh.eta_sup_grid <= 1.2 * 0.5 * b.eta_sup_grid);

    // A Z^2-periodic g commutes with integer translations, so g R_{e_i} g^{-1}
    // is R_{e_i} up to rounding and h must come out as the identity.
    const PlaneMap g = perturbed_translation({0, 0}, {{{1, 2}, {1e-3, -2e-3}, 0.4}, {{2, -1}, {5e-4, 5e-4}, 2.0}});
    auto c = fundamental_conjugacy(conjugate(translation_map({1, 0}), g), conjugate(translation_map({0, 1}), g), opt);
    CHECK(c.residual_p1 < 1e-8);
    CHECK(c.residual_p2 < 1e-8);
    CHECK(c.h_at_zero == 0);
    CHECK(c.growth_constant < 1);
    CHECK(c.eta_sup_grid < 1e-12);

    // Non-commuting input.
    auto q1 = perturbed_translation({1, 0}, {{{0, 1}, {1e-2, 0}, 0}});
    auto q2 = perturbed_translation({0, 1}, {{{1, 0}, {0, 1e-2}, 0}});
    CHECK_THROWS_AS(fundamental_conjugacy(q1, q2, opt), InvalidInput);
    // Too large to glue.
    auto big = perturbed_translation({1, 0}, {{{0, 1}, {0.1, 0.1}, 0}});
    CHECK_THROWS_AS(fundamental_conjugacy(big, translation_map({0, 1}), opt), InvalidInput);
  }

  TEST_CASE("rotation drift dichotomy") {
    // Exact rotation.
    auto r = rotation_drift(translation_map({0.3, 0.7}), 1000);
    CHECK(r.alpha_estimate[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(r.fitted_c == 0);

    const std::vector<PlaneMode> h1{{{1, 0}, {0.01, 0.0}, 0.2}, {{0, 1}, {0.0, 0.01}, 1.3}};
    const double delta = c1_bound(h1) + 0.02;  // sup|phi| + sup|D phi| bounds the C^1 distance
    const P2 alpha{0.3819660112501051, 0.2360679774997897};
    const long kmax = 10000;

    // lambda != 0: linear drift with the predicted slope.
    const P2 lam{2e-3, -1e-3};
    DriftOptions o;
    o.alpha_ref = alpha;
    o.lambda_norm = norm(lam);
    o.delta = delta;
    auto lin = rotation_drift(synthetic_q(lam, alpha, h1), kmax, o);
    CHECK(lin.slope >= norm(lam) * (1 - delta));
    CHECK(*lin.lower_bound_holds);
    CHECK(*lin.upper_bound_holds);
    CHECK(!lin.log_bound_holds);
    REQUIRE(lin.incompatibility_k);

    // lambda = 0: drift stays within C log k + C.
    o.lambda_norm = 0.0;
    auto flat = rotation_drift(synthetic_q({0, 0}, alpha, h1), kmax, o);
    CHECK(flat.log_bound_holds);
    CHECK(flat.fitted_c < 0.1);
    CHECK(std::fabs(flat.slope) < 1e-5);
  }
}
