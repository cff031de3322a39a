#include <cmath>

#include "tpa/simd/kernels.hpp"

namespace tpa::simd::scalar {

std::size_t frac_screen(std::uint64_t x0, std::uint64_t step, const std::uint64_t* thr, std::size_t count,
                        std::uint32_t* out) {
  std::size_t k = 0;
  std::uint64_t x = x0;
  for (std::size_t j = 0; j < count; ++j, x += step) {
    std::uint64_t d = x < (0 - x) ? x : (0 - x);
    if (d < thr[j]) out[k++] = static_cast<std::uint32_t>(j);
  }
  return k;
}

std::size_t lattice_screen(const LatticeScreen& p, const double* rho, std::size_t count, std::uint32_t* out) {
  std::size_t k = 0;
  for (std::size_t j = 0; j < count; ++j) {
    const double jd = static_cast<double>(j);
    const double tau1 = p.tau1_0 + jd * p.dtau1;
    const double tau2 = p.tau2_0 + jd * p.dtau2;
    const double r = rho[j];
    if (r * p.inv_b2s >= 0.5) {
      out[k++] = static_cast<std::uint32_t>(j);
      continue;
    }
    const double e2 = std::nearbyint(tau2) - tau2;
    const double rem = r * r - e2 * e2 * p.b2s_sq;
    if (rem < 0) continue;
    const double c = tau1 - p.mu * e2;
    const double e1 = std::nearbyint(c) - c;
    if (e1 * e1 * p.b1_sq <= rem) out[k++] = static_cast<std::uint32_t>(j);
  }
  return k;
}

namespace {

double signed_fraction(std::uint64_t x) { return std::ldexp(static_cast<double>(static_cast<std::int64_t>(x)), -64); }

}  // namespace

void divisor_symbol(const std::uint64_t a1[2], const std::uint64_t a2[2], const std::int32_t* j1, const std::int32_t* j2,
                    std::size_t count, double* out) {
  constexpr double kPi = 3.14159265358979323846;
  for (std::size_t i = 0; i < count; ++i) {
    const auto u1 = static_cast<std::uint64_t>(static_cast<std::int64_t>(j1[i]));
    const auto u2 = static_cast<std::uint64_t>(static_cast<std::int64_t>(j2[i]));
    const double t1 = signed_fraction(u1 * a1[0] + u2 * a1[1]);
    const double t2 = signed_fraction(u1 * a2[0] + u2 * a2[1]);
    const double s1 = std::sin(kPi * t1), s2 = std::sin(kPi * t2);
    out[i] = 4.0 * (s1 * s1 + s2 * s2);
  }
}

}  // namespace tpa::simd::scalar
