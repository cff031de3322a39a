// Built with -mavx2 only; never called unless the CPU reports AVX2.
#include <immintrin.h>

#include <array>

#include "tpa/simd/kernels.hpp"

namespace tpa::simd::avx2 {

namespace {

inline void emit(int mask, std::size_t base, std::uint32_t* out, std::size_t& k) {
  while (mask) {
    int b = __builtin_ctz(static_cast<unsigned>(mask));
    out[k++] = static_cast<std::uint32_t>(base + static_cast<std::size_t>(b));
    mask &= mask - 1;
  }
}

// Unsigned 64-bit a > b via the sign-flip trick.
inline __m256i cmpgt_u64(__m256i a, __m256i b) {
  const __m256i sign = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
  return _mm256_cmpgt_epi64(_mm256_xor_si256(a, sign), _mm256_xor_si256(b, sign));
}

// a * b mod 2^64 from 32x32->64 partial products.
inline __m256i mul_u64(__m256i a, __m256i b) {
  __m256i lo = _mm256_mul_epu32(a, b);
  __m256i c1 = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), b);
  __m256i c2 = _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(_mm256_add_epi64(c1, c2), 32));
}

// Signed x * 2^-64, correctly rounded (same value as the scalar conversion).
inline __m256d signed_fraction(__m256i x) {
  const __m256i pick = _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6);
  __m128i hi = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(_mm256_srli_epi64(x, 32), pick));
  __m128i lo = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(x, pick));
  lo = _mm_xor_si128(lo, _mm_set1_epi32(static_cast<int>(0x80000000u)));
  __m256d hid = _mm256_cvtepi32_pd(hi);
  __m256d lod = _mm256_add_pd(_mm256_cvtepi32_pd(lo), _mm256_set1_pd(2147483648.0));
  return _mm256_add_pd(_mm256_mul_pd(hid, _mm256_set1_pd(0x1p-32)), _mm256_mul_pd(lod, _mm256_set1_pd(0x1p-64)));
}

// Taylor coefficients of sin(pi t); on |t| <= 1/2 the degree-23 tail is below 1e-19.
constexpr int kTerms = 11;
constexpr std::array<double, kTerms> sinpi_coeffs() {
  std::array<double, kTerms> c{};
  long double pi = 3.14159265358979323846264338327950288L;
  long double term = pi;
  for (int k = 0; k < kTerms; ++k) {
    c[static_cast<size_t>(k)] = static_cast<double>(term);
    term = -term * pi * pi / ((2.0L * k + 2) * (2.0L * k + 3));
  }
  return c;
}
constexpr auto kSinPi = sinpi_coeffs();

inline __m256d sinpi(__m256d t) {
  __m256d t2 = _mm256_mul_pd(t, t);
  __m256d p = _mm256_set1_pd(kSinPi[kTerms - 1]);
  for (int k = kTerms - 2; k >= 0; --k) p = _mm256_add_pd(_mm256_mul_pd(p, t2), _mm256_set1_pd(kSinPi[static_cast<size_t>(k)]));
  return _mm256_mul_pd(p, t);
}

}  // namespace

std::size_t frac_screen(std::uint64_t x0, std::uint64_t step, const std::uint64_t* thr, std::size_t count,
                        std::uint32_t* out) {
  std::size_t k = 0, j = 0;
  __m256i x = _mm256_set_epi64x(static_cast<long long>(x0 + 3 * step), static_cast<long long>(x0 + 2 * step),
                                static_cast<long long>(x0 + step), static_cast<long long>(x0));
  const __m256i step4 = _mm256_set1_epi64x(static_cast<long long>(4 * step));
  const __m256i zero = _mm256_setzero_si256();
  for (; j + 4 <= count; j += 4) {
    __m256i neg = _mm256_sub_epi64(zero, x);
    __m256i d = _mm256_blendv_epi8(x, neg, cmpgt_u64(x, neg));
    __m256i t = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(thr + j));
    int mask = _mm256_movemask_pd(_mm256_castsi256_pd(cmpgt_u64(t, d)));
    emit(mask, j, out, k);
    x = _mm256_add_epi64(x, step4);
  }
  if (j < count) {
    std::size_t tail = scalar::frac_screen(x0 + j * step, step, thr + j, count - j, out + k);
    for (std::size_t i = 0; i < tail; ++i) out[k + i] += static_cast<std::uint32_t>(j);
    k += tail;
  }
  return k;
}

std::size_t lattice_screen(const LatticeScreen& p, const double* rho, std::size_t count, std::uint32_t* out) {
  std::size_t k = 0, j = 0;
  const __m256d t10 = _mm256_set1_pd(p.tau1_0), t20 = _mm256_set1_pd(p.tau2_0);
  const __m256d d1 = _mm256_set1_pd(p.dtau1), d2 = _mm256_set1_pd(p.dtau2);
  const __m256d mu = _mm256_set1_pd(p.mu), b1 = _mm256_set1_pd(p.b1_sq), b2 = _mm256_set1_pd(p.b2s_sq);
  const __m256d inv = _mm256_set1_pd(p.inv_b2s), half = _mm256_set1_pd(0.5), zero = _mm256_setzero_pd();
  __m256d jd = _mm256_setr_pd(0, 1, 2, 3);
  const __m256d four = _mm256_set1_pd(4);
  constexpr int kNearest = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;
  for (; j + 4 <= count; j += 4) {
    __m256d tau1 = _mm256_add_pd(t10, _mm256_mul_pd(jd, d1));
    __m256d tau2 = _mm256_add_pd(t20, _mm256_mul_pd(jd, d2));
    __m256d r = _mm256_loadu_pd(rho + j);
    __m256d big = _mm256_cmp_pd(_mm256_mul_pd(r, inv), half, _CMP_GE_OQ);
    __m256d e2 = _mm256_sub_pd(_mm256_round_pd(tau2, kNearest), tau2);
    __m256d rem = _mm256_sub_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(_mm256_mul_pd(e2, e2), b2));
    __m256d ok_rem = _mm256_cmp_pd(rem, zero, _CMP_GE_OQ);
    __m256d c = _mm256_sub_pd(tau1, _mm256_mul_pd(mu, e2));
    __m256d e1 = _mm256_sub_pd(_mm256_round_pd(c, kNearest), c);
    __m256d ok = _mm256_cmp_pd(_mm256_mul_pd(_mm256_mul_pd(e1, e1), b1), rem, _CMP_LE_OQ);
    int mask = _mm256_movemask_pd(_mm256_or_pd(big, _mm256_and_pd(ok_rem, ok)));
    emit(mask, j, out, k);
    jd = _mm256_add_pd(jd, four);
  }
  for (; j < count; ++j) {
    // Same arithmetic as the scalar reference, element by element.
    const double jd1 = static_cast<double>(j);
    const double tau1 = p.tau1_0 + jd1 * p.dtau1;
    const double tau2 = p.tau2_0 + jd1 * p.dtau2;
    const double r = rho[j];
    if (r * p.inv_b2s >= 0.5) {
      out[k++] = static_cast<std::uint32_t>(j);
      continue;
    }
    const double e2 = __builtin_nearbyint(tau2) - tau2;
    const double rem = r * r - e2 * e2 * p.b2s_sq;
    if (rem < 0) continue;
    const double c = tau1 - p.mu * e2;
    const double e1 = __builtin_nearbyint(c) - c;
    if (e1 * e1 * p.b1_sq <= rem) out[k++] = static_cast<std::uint32_t>(j);
  }
  return k;
}

void divisor_symbol(const std::uint64_t a1[2], const std::uint64_t a2[2], const std::int32_t* j1, const std::int32_t* j2,
                    std::size_t count, double* out) {
  const __m256i a10 = _mm256_set1_epi64x(static_cast<long long>(a1[0])), a11 = _mm256_set1_epi64x(static_cast<long long>(a1[1]));
  const __m256i a20 = _mm256_set1_epi64x(static_cast<long long>(a2[0])), a21 = _mm256_set1_epi64x(static_cast<long long>(a2[1]));
  const __m256d four = _mm256_set1_pd(4.0);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256i u1 = _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(j1 + i)));
    __m256i u2 = _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(j2 + i)));
    __m256d s1 = sinpi(signed_fraction(_mm256_add_epi64(mul_u64(u1, a10), mul_u64(u2, a11))));
    __m256d s2 = sinpi(signed_fraction(_mm256_add_epi64(mul_u64(u1, a20), mul_u64(u2, a21))));
    __m256d mu = _mm256_mul_pd(four, _mm256_add_pd(_mm256_mul_pd(s1, s1), _mm256_mul_pd(s2, s2)));
    _mm256_storeu_pd(out + i, mu);
  }
  if (i < count) scalar::divisor_symbol(a1, a2, j1 + i, j2 + i, count - i, out + i);
}

}  // namespace tpa::simd::avx2
