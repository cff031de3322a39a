#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace tpa::simd {

enum class Isa { scalar, avx2 };

// Best ISA supported by both the build and the running CPU, unless overridden.
Isa active_isa();
std::string to_string(Isa isa);
// Force a variant (tests, benchmarks); passing scalar always succeeds.
// Returns false if the requested ISA is unavailable.
bool set_isa_override(Isa isa);
void clear_isa_override();
bool avx2_available();

// Fixed-point angle: x / 2^64 taken modulo 1. Sums of such values wrap
// exactly, so n.alpha mod 1 is computed without rounding once alpha is encoded.
std::uint64_t encode_fraction(long double alpha);
// Distance to the nearest integer of the encoded value, as a real number.
double fraction_distance(std::uint64_t x);

// Indices j in [0, count) with dist(x0 + j*step) < thr[j], where
// dist(x) = min(x, 2^64 - x) in fixed point. Returns the number written to out.
std::size_t frac_screen(std::uint64_t x0, std::uint64_t step, const std::uint64_t* thr, std::size_t count,
                        std::uint32_t* out);

// Screen for the 2-D Fincke-Pohst step of the center scan. The lattice has a
// Lagrange-reduced basis b1, b2 with b2 = b2* + mu b1; target j has reduced
// coordinates tau = tau0 + j*dtau, radius rho[j]. Flags j when a lattice point
// might lie within rho[j] of the target, or when the radius is large enough
// that more than one k2 row must be enumerated (the caller then enumerates
// exactly). Never drops a true candidate.
struct LatticeScreen {
  double tau1_0, tau2_0, dtau1, dtau2;
  double mu;
  double b1_sq;   // |b1|^2
  double b2s_sq;  // |b2*|^2
  double inv_b2s; // 1/|b2*|
};
std::size_t lattice_screen(const LatticeScreen& p, const double* rho, std::size_t count, std::uint32_t* out);

// mu_j = 4 [sin^2(pi a1.j) + sin^2(pi a2.j)] for integer pairs (j1[i], j2[i]);
// a1, a2 are encoded alphas for the two components: aK = (alpha_K1, alpha_K2).
void divisor_symbol(const std::uint64_t a1[2], const std::uint64_t a2[2], const std::int32_t* j1, const std::int32_t* j2,
                    std::size_t count, double* out);

namespace scalar {
std::size_t frac_screen(std::uint64_t x0, std::uint64_t step, const std::uint64_t* thr, std::size_t count,
                        std::uint32_t* out);
std::size_t lattice_screen(const LatticeScreen& p, const double* rho, std::size_t count, std::uint32_t* out);
void divisor_symbol(const std::uint64_t a1[2], const std::uint64_t a2[2], const std::int32_t* j1, const std::int32_t* j2,
                    std::size_t count, double* out);
}  // namespace scalar

#if defined(TPA_HAVE_AVX2)
namespace avx2 {
std::size_t frac_screen(std::uint64_t x0, std::uint64_t step, const std::uint64_t* thr, std::size_t count,
                        std::uint32_t* out);
std::size_t lattice_screen(const LatticeScreen& p, const double* rho, std::size_t count, std::uint32_t* out);
void divisor_symbol(const std::uint64_t a1[2], const std::uint64_t a2[2], const std::int32_t* j1, const std::int32_t* j2,
                    std::size_t count, double* out);
}  // namespace avx2
#endif

}  // namespace tpa::simd
