#include <atomic>
#include <cmath>

#include "tpa/simd/kernels.hpp"

namespace tpa::simd {

namespace {

// -1: no override; otherwise the forced Isa value.
std::atomic<int> g_override{-1};

}  // namespace

bool avx2_available() {
#if defined(TPA_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() {
  int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) return static_cast<Isa>(o);
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

std::string to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool set_isa_override(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available()) return false;
  g_override.store(static_cast<int>(isa), std::memory_order_relaxed);
  return true;
}

void clear_isa_override() { g_override.store(-1, std::memory_order_relaxed); }

std::uint64_t encode_fraction(long double alpha) {
  long double f = alpha - std::floor(alpha);
  long double scaled = std::ldexp(f, 64) + 0.5L;
  if (scaled >= 0x1p64L) return 0;
  if (scaled >= 0x1p63L) return static_cast<std::uint64_t>(scaled - 0x1p63L) + 0x8000000000000000ULL;
  return static_cast<std::uint64_t>(scaled);
}

double fraction_distance(std::uint64_t x) {
  std::uint64_t d = x < (0 - x) ? x : (0 - x);
  return std::ldexp(static_cast<double>(d), -64);
}

std::size_t frac_screen(std::uint64_t x0, std::uint64_t step, const std::uint64_t* thr, std::size_t count,
                        std::uint32_t* out) {
#if defined(TPA_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::frac_screen(x0, step, thr, count, out);
#endif
  return scalar::frac_screen(x0, step, thr, count, out);
}

std::size_t lattice_screen(const LatticeScreen& p, const double* rho, std::size_t count, std::uint32_t* out) {
#if defined(TPA_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::lattice_screen(p, rho, count, out);
#endif
  return scalar::lattice_screen(p, rho, count, out);
}

void divisor_symbol(const std::uint64_t a1[2], const std::uint64_t a2[2], const std::int32_t* j1, const std::int32_t* j2,
                    std::size_t count, double* out) {
#if defined(TPA_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::divisor_symbol(a1, a2, j1, j2, count, out);
#endif
  scalar::divisor_symbol(a1, a2, j1, j2, count, out);
}

}  // namespace tpa::simd
