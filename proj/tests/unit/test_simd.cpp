#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tpa/simd/kernels.hpp"

using namespace tpa::simd;

TEST_SUITE("simd") {
  TEST_CASE("fixed-point fractions") {
    CHECK(encode_fraction(0.5L) == 0x8000000000000000ULL);
    CHECK(encode_fraction(-0.25L) == 0xC000000000000000ULL);
    CHECK(encode_fraction(3.0L) == 0);
    CHECK(fraction_distance(encode_fraction(0.75L)) == 0.25);
    // n * alpha mod 1 by wrapping addition matches the long double value.
    const long double alpha = 0.6180339887498948482L;
    std::uint64_t a = encode_fraction(alpha), x = 0;
    for (int n = 1; n <= 5000; ++n) {
      x += a;
      long double t = n * alpha;
      long double d = std::fabs(t - std::round(t));
      CHECK(std::fabs(fraction_distance(x) - static_cast<double>(d)) < 1e-15);
    }
  }

  TEST_CASE("frac_screen scalar and avx2 agree exactly") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
      const size_t count = 1 + rng() % 300;
      std::vector<std::uint64_t> thr(count);
      for (auto& t : thr) t = rng() >> (1 + rng() % 20);
      std::uint64_t x0 = rng(), step = rng();
      std::vector<std::uint32_t> a(count), b(count);
      size_t na = scalar::frac_screen(x0, step, thr.data(), count, a.data());
      // Brute-force reference.
      size_t nref = 0;
      for (size_t j = 0; j < count; ++j) {
        std::uint64_t xj = x0 + j * step;
        std::uint64_t d = std::min(xj, 0 - xj);
        if (d < thr[j]) CHECK(a[nref++] == j);
      }
      CHECK(na == nref);
#if defined(TPA_HAVE_AVX2)
      if (avx2_available()) {
        size_t nb = avx2::frac_screen(x0, step, thr.data(), count, b.data());
        REQUIRE(na == nb);
        for (size_t i = 0; i < na; ++i) CHECK(a[i] == b[i]);
      }
#endif
    }
  }

  TEST_CASE("lattice_screen scalar and avx2 agree exactly") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int trial = 0; trial < 100; ++trial) {
      LatticeScreen p{u(rng), u(rng), u(rng) * 1e-2, u(rng) * 1e-2, 0.3, 1.3, 0.9, 1 / std::sqrt(0.9)};
      const size_t count = 1 + rng() % 200;
      std::vector<double> rho(count);
      for (auto& r : rho) r = std::exp(u(rng) / 8);
      std::vector<std::uint32_t> a(count), b(count);
      size_t na = scalar::lattice_screen(p, rho.data(), count, a.data());
      (void)na;
#if defined(TPA_HAVE_AVX2)
      if (avx2_available()) {
        size_t nb = avx2::lattice_screen(p, rho.data(), count, b.data());
        REQUIRE(na == nb);
        for (size_t i = 0; i < na; ++i) CHECK(a[i] == b[i]);
      }
#endif
    }
  }

  TEST_CASE("lattice_screen never drops a lattice point inside the radius") {
    // Lattice Z^2 with b1 = (1, 0), b2 = (0.3, 0.95): mu = 0.3, b2* = (0, 0.95).
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-20, 20);
    for (int trial = 0; trial < 2000; ++trial) {
      const double t1 = u(rng), t2 = u(rng);
      // Target point in the plane; tau are its reduced coordinates.
      const double tau2 = t2 / 0.95, tau1 = t1 - 0.3 * tau2;
      double best = 1e9;
      for (int k2 = static_cast<int>(std::floor(tau2)) - 2; k2 <= static_cast<int>(std::floor(tau2)) + 3; ++k2)
        for (int k1 = static_cast<int>(std::floor(tau1)) - 3; k1 <= static_cast<int>(std::floor(tau1)) + 4; ++k1) {
          double x = k1 + 0.3 * k2 - t1, y = 0.95 * k2 - t2;
          best = std::min(best, std::hypot(x, y));
        }
      LatticeScreen p{tau1, tau2, 0, 0, 0.3, 1.0, 0.95 * 0.95, 1 / 0.95};
      double rho = best * (1 + 1e-9);
      std::uint32_t out[1];
      CHECK(scalar::lattice_screen(p, &rho, 1, out) == 1);
    }
  }

  TEST_CASE("divisor_symbol: reference against direct formula, avx2 within tolerance") {
    const long double a11 = 0.5358983848622454L, a12 = 0.0L, a21 = 0.0L, a22 = 0.5358983848622454L;
    std::uint64_t e1[2] = {encode_fraction(a11), encode_fraction(a12)};
    std::uint64_t e2[2] = {encode_fraction(a21), encode_fraction(a22)};
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> pick(-3000, 3000);
    const size_t count = 1001;
    std::vector<std::int32_t> j1(count), j2(count);
    for (size_t i = 0; i < count; ++i) {
      j1[i] = pick(rng);
      j2[i] = pick(rng);
    }
    std::vector<double> a(count), b(count);
    scalar::divisor_symbol(e1, e2, j1.data(), j2.data(), count, a.data());
    for (size_t i = 0; i < count; ++i) {
      auto sinpi_reduced = [](long double t) {
        const long double pi = 3.14159265358979323846264338327950288L;
        return std::sin(pi * (t - std::round(t)));
      };
      long double s1 = sinpi_reduced(a11 * j1[i] + a12 * j2[i]);
      long double s2 = sinpi_reduced(a21 * j1[i] + a22 * j2[i]);
      double ref = static_cast<double>(4 * (s1 * s1 + s2 * s2));
      CHECK(std::fabs(a[i] - ref) <= 1e-12 * std::max(ref, 1e-3));
    }
#if defined(TPA_HAVE_AVX2)
    if (avx2_available()) {
      avx2::divisor_symbol(e1, e2, j1.data(), j2.data(), count, b.data());
      for (size_t i = 0; i < count; ++i) CHECK(std::fabs(a[i] - b[i]) <= 1e-14 * a[i] + 1e-300);
    }
#endif
  }

  TEST_CASE("dispatch override") {
    CHECK(set_isa_override(Isa::scalar));
    CHECK(active_isa() == Isa::scalar);
    clear_isa_override();
    CHECK(active_isa() == (avx2_available() ? Isa::avx2 : Isa::scalar));
  }
}
