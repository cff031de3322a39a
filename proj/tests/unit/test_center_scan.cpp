#include <doctest.h>

#include <cmath>

#include "tpa/dynamics/frame.hpp"
#include "tpa/errors.hpp"
#include "tpa/lattice/center_scan.hpp"
#include "tpa/lattice/construct.hpp"
#include "tpa/simd/kernels.hpp"

using namespace tpa;

namespace {

const std::vector<std::vector<long>> kIntro = {{0, 0, 0, -1}, {1, 0, 0, 8}, {0, 1, 0, -6}, {0, 0, 1, 8}};

// Oracle: the center component measured through the frame's projector.
double oracle_min(const dynamics::SplittingFrame& f, long radius, double e) {
  const int n = f.dim();
  double best = INFINITY;
  std::vector<long> v(static_cast<size_t>(n), 0);
  auto rec = [&](auto&& self, int i, long left) -> void {
    if (i == n) {
      long l1 = 0;
      for (long x : v) l1 += std::labs(x);
      if (l1 == 0) return;
      Vec x(n);
      for (int k = 0; k < n; ++k) x[k] = static_cast<double>(v[static_cast<size_t>(k)]);
      best = std::min(best, f.norm(x, dynamics::Subspace::c) * std::pow(static_cast<double>(l1), e));
      return;
    }
    for (long a = -left; a <= left; ++a) {
      v[static_cast<size_t>(i)] = a;
      self(self, i + 1, left - std::labs(a));
    }
    v[static_cast<size_t>(i)] = 0;
  };
  rec(rec, 0, radius);
  return best;
}

}  // namespace

TEST_SUITE("lattice_algebra") {
  TEST_CASE("center scan: branch and bound matches exhaustive search") {
    auto f = dynamics::build_splitting(lattice::ToralMatrix(kIntro));
    for (long R : {1L, 5L, 13L, 24L, 40L}) {
      auto fast = lattice::center_projection_scan(f, R, 0.1);
      auto slow = lattice::center_projection_scan_bruteforce(f, R, 0.1);
      CHECK(fast.argmin == slow.argmin);
      CHECK(fast.c_estimate == doctest::Approx(slow.c_estimate).epsilon(1e-13));
      CHECK(fast.c_estimate == doctest::Approx(oracle_min(f, R, 1.1)).epsilon(1e-9));
      CHECK(fast.r == 1.0);
    }
    // A small exponent pushes the minimizer out past the exhaustive seed ball.
    auto fast = lattice::center_projection_scan(f, 45, 0.05, 0.0);
    auto slow = lattice::center_projection_scan_bruteforce(f, 45, 0.05, 0.0);
    long l1 = 0;
    for (long x : fast.argmin) l1 += std::labs(x);
    CHECK(l1 > 20);
    CHECK(fast.argmin == slow.argmin);
    CHECK(fast.c_estimate == doctest::Approx(slow.c_estimate).epsilon(1e-13));
  }

  TEST_CASE("center scan: higher dimension and explicit r") {
    auto f = dynamics::build_splitting(lattice::construct_pseudo_anosov(3).A);
    REQUIRE(f.c_dim() == 2);
    for (long R : {6L, 9L}) {
      auto fast = lattice::center_projection_scan(f, R, 0.05, 1.5);
      auto slow = lattice::center_projection_scan_bruteforce(f, R, 0.05, 1.5);
      CHECK(fast.argmin == slow.argmin);
      CHECK(fast.c_estimate == doctest::Approx(oracle_min(f, R, 1.55)).epsilon(1e-9));
    }
  }

  TEST_CASE("center scan: properties") {
    lattice::ToralMatrix a(kIntro);
    auto f = dynamics::build_splitting(a);
    // Nonincreasing in the radius, canonical argmin within the ball.
    double prev = INFINITY;
    for (long R = 1; R <= 120; R += 17) {
      auto res = lattice::center_projection_scan(f, R, 0.1);
      CHECK(res.c_estimate <= prev);
      prev = res.c_estimate;
      long l1 = 0, first = 0;
      for (long x : res.argmin) {
        l1 += std::labs(x);
        if (first == 0) first = x;
      }
      CHECK(l1 >= 1);
      CHECK(l1 <= R);
      CHECK(first > 0);
    }
    // Scalar and AVX2 screens lead to the same answer.
    simd::set_isa_override(simd::Isa::scalar);
    auto s = lattice::center_projection_scan(a, 300, 0.1);
    simd::clear_isa_override();
    auto v = lattice::center_projection_scan(a, 300, 0.1);
    CHECK(s.argmin == v.argmin);
    CHECK(s.c_estimate == v.c_estimate);
  }

  TEST_CASE("center scan: input checks") {
    lattice::ToralMatrix cat(std::vector<std::vector<long>>{{2, 1}, {1, 1}});
    CHECK_THROWS_AS(lattice::center_projection_scan(cat, 10, 0.1), InvalidInput);
    CHECK_THROWS_AS(lattice::center_projection_scan(lattice::ToralMatrix(kIntro), 10, 0.0), InvalidInput);
    CHECK_THROWS_AS(lattice::center_projection_scan(lattice::ToralMatrix(kIntro), 0, 0.1), InvalidInput);
  }
}
