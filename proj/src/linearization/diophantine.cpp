#include "tpa/linearization/diophantine.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "tpa/dynamics/frame.hpp"
#include "tpa/errors.hpp"
#include "tpa/lattice/classify.hpp"
#include "tpa/simd/kernels.hpp"

namespace tpa::linearization {

namespace {

using ld = long double;

std::uint64_t dist(std::uint64_t x) { return std::min(x, 0 - x); }

ld weighted(std::uint64_t d, long l1, double exponent) {
  return std::ldexp(static_cast<ld>(d), -64) * std::pow(static_cast<ld>(l1), static_cast<ld>(exponent));
}

}  // namespace

DiophantineSpec diophantine_scan(const std::vector<double>& alpha, double exponent, long radius) {
  if (alpha.empty() || alpha.size() > 2) throw InvalidInput("diophantine_scan: alpha must have 1 or 2 components");
  if (radius < 1) throw InvalidInput("diophantine_scan: radius must be >= 1");
  DiophantineSpec out;
  out.alpha = alpha;
  out.exponent = exponent;
  out.radius = radius;

  if (alpha.size() == 1) {
    const std::uint64_t a = simd::encode_fraction(alpha[0]);
    ld best = std::numeric_limits<ld>::infinity();
    std::uint64_t best_d = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t x = 0;
    for (long n = 1; n <= radius; ++n) {
      x += a;
      const std::uint64_t d = dist(x);
      const ld v = weighted(d, n, exponent);
      if (v < best) {
        best = v;
        out.argmin = {n};
      }
      if (d < best_d) {
        best_d = d;
        out.best_q = n;
        out.best_q_value = static_cast<double>(weighted(d, n, exponent));
      }
    }
    out.c_est = static_cast<double>(best);
    out.candidates_checked = radius;
    return out;
  }

  const std::uint64_t a1 = simd::encode_fraction(alpha[0]), a2 = simd::encode_fraction(alpha[1]);
  ld best = std::numeric_limits<ld>::infinity();
  std::vector<long> best_n;
  auto consider = [&](long n1, long n2) {
    const long l1 = std::labs(n1) + std::labs(n2);
    if (l1 == 0 || l1 > radius) return;
    ++out.candidates_checked;
    const std::uint64_t x = static_cast<std::uint64_t>(n1) * a1 + static_cast<std::uint64_t>(n2) * a2;
    const ld v = weighted(dist(x), l1, exponent);
    std::vector<long> n{n1, n2};
    if (n1 < 0 || (n1 == 0 && n2 < 0)) n = {-n1, -n2};
    if (v < best || (v == best && n < best_n)) {
      best = v;
      best_n = std::move(n);
    }
  };
  consider(1, 0);

  // thr[k]: a point at l1-distance k can only beat the current bound if its
  // fixed-point distance is below thr[k].
  std::vector<std::uint64_t> thr(static_cast<size_t>(radius) + 2);
  ld thr_for = -1;
  auto rebuild = [&]() {
    thr_for = best;
    const ld b = best * (1 + 1e-12L);
    const ld cap = std::ldexp(1.0L, 63);
    for (size_t k = 0; k < thr.size(); ++k) {
      ld t = std::ldexp(b, 64) / std::pow(static_cast<ld>(std::max<size_t>(k, 1)), static_cast<ld>(exponent));
      thr[k] = t >= cap ? (std::uint64_t{1} << 63) + 1 : static_cast<std::uint64_t>(t) + 1;
    }
  };
  rebuild();

  std::vector<std::uint32_t> hits(static_cast<size_t>(radius) + 2);
  for (long n2 = 0; n2 <= radius; ++n2) {
    const std::uint64_t base = static_cast<std::uint64_t>(n2) * a2;
    const long len = radius - n2;
    // n1 >= 0 (n1 >= 1 when n2 = 0)
    {
      const long start = n2 == 0 ? 1 : 0;
      const size_t cnt = static_cast<size_t>(len - start + 1);
      if (len - start + 1 > 0) {
        size_t k = simd::frac_screen(base + static_cast<std::uint64_t>(start) * a1, a1, thr.data() + n2 + start, cnt,
                                     hits.data());
        for (size_t h = 0; h < k; ++h) consider(start + static_cast<long>(hits[h]), n2);
      }
    }
    if (n2 > 0 && len > 0) {
      size_t k = simd::frac_screen(base - a1, 0 - a1, thr.data() + n2 + 1, static_cast<size_t>(len), hits.data());
      for (size_t h = 0; h < k; ++h) consider(-1 - static_cast<long>(hits[h]), n2);
    }
    if (best < thr_for) rebuild();
  }
  out.c_est = static_cast<double>(best);
  out.argmin = best_n;
  return out;
}

DiophantineSpec diophantine_scan_rational(const std::vector<long>& numerators, long denominator, double exponent,
                                          long radius) {
  if (numerators.empty() || numerators.size() > 2) throw InvalidInput("diophantine_scan: alpha must have 1 or 2 components");
  if (denominator < 1 || radius < 1) throw InvalidInput("diophantine_scan: denominator and radius must be >= 1");
  DiophantineSpec out;
  for (long p : numerators) out.alpha.push_back(static_cast<double>(p) / static_cast<double>(denominator));
  out.exponent = exponent;
  out.radius = radius;
  const long q = denominator;
  auto mod = [q](long a) { return ((a % q) + q) % q; };
  ld best = std::numeric_limits<ld>::infinity();
  long best_res = std::numeric_limits<long>::max();
  auto consider = [&](std::vector<long> n) {
    long l1 = 0, s = 0;
    for (size_t i = 0; i < n.size(); ++i) {
      l1 += std::labs(n[i]);
      s = mod(s + mod(n[i]) * mod(numerators[i]));
    }
    const long res = std::min(s, q - s);
    const ld v = static_cast<ld>(res) / static_cast<ld>(q) * std::pow(static_cast<ld>(l1), static_cast<ld>(exponent));
    ++out.candidates_checked;
    if (v < best || (v == best && n < out.argmin)) {
      best = v;
      out.argmin = n;
    }
    if (n.size() == 1 && res < best_res) {
      best_res = res;
      out.best_q = n[0];
      out.best_q_value = static_cast<double>(v);
    }
  };
  if (numerators.size() == 1) {
    for (long n = 1; n <= radius; ++n) consider({n});
  } else {
    for (long n1 = 0; n1 <= radius; ++n1)
      for (long n2 = n1 == 0 ? 1 : -(radius - n1); n2 <= radius - n1; ++n2) consider({n1, n2});
  }
  out.c_est = static_cast<double>(best);
  return out;
}

SimultaneousScan simultaneous_scan(std::array<double, 2> alpha1, std::array<double, 2> alpha2, double exponent,
                                   long radius) {
  if (radius < 1) throw InvalidInput("simultaneous_scan: radius must be >= 1");
  const std::uint64_t e[2][2] = {{simd::encode_fraction(alpha1[0]), simd::encode_fraction(alpha1[1])},
                                 {simd::encode_fraction(alpha2[0]), simd::encode_fraction(alpha2[1])}};
  SimultaneousScan out;
  out.radius = radius;
  out.exponent = exponent;
  ld best = std::numeric_limits<ld>::infinity();
  for (long k2 = 0; k2 <= radius; ++k2)
    for (long k1 = k2 == 0 ? 1 : -(radius - k2); k1 <= radius - k2; ++k1) {
      const auto u1 = static_cast<std::uint64_t>(k1), u2 = static_cast<std::uint64_t>(k2);
      const std::uint64_t d = std::max(dist(u1 * e[0][0] + u2 * e[0][1]), dist(u1 * e[1][0] + u2 * e[1][1]));
      const ld v = weighted(d, std::labs(k1) + k2, exponent);
      std::array<long, 2> n = k1 < 0 || (k1 == 0 && k2 < 0) ? std::array<long, 2>{-k1, -k2} : std::array<long, 2>{k1, k2};
      if (v < best || (v == best && n < out.argmin)) {
        best = v;
        out.argmin = n;
      }
    }
  out.c_est = static_cast<double>(best);
  return out;
}

SpecialVectors special_vectors(const lattice::ToralMatrix& a) {
  const int n = a.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j + 1 < n; ++j)
      if (a(i, j) != (i == j + 1 ? 1 : 0)) throw InvalidInput("special_vectors: matrix is not in companion form");
  const auto cls = lattice::classify(a);
  if (!cls.pseudo_anosov || cls.center_dim != 2)
    throw InvalidInput("special_vectors: needs a pseudo-Anosov matrix with two-dimensional center");
  const auto frame = dynamics::build_splitting(a);
  SpecialVectors out;
  out.dim = n;
  out.c1 = *frame.c1();
  const double c1 = out.c1;
  if (n == 4) {
    const auto& p = cls.char_poly;
    const long p1 = p.coeff(3).get_si(), p2 = p.coeff(2).get_si();
    out.n = {{-p1, 1 - p2, -p1, -1}, {1, 0, 1, 0}};
    out.alpha = {{c1, 0.0}, {0.0, c1}};
  } else {
    std::vector<long> v(static_cast<size_t>(n), 0);
    v[1] = v[3] = 1;
    out.n = {v};
    out.alpha = {{-c1, c1 * c1}};
  }
  // L: E^c -> R^2 with e_1^c -> (1, 0), e_2^c -> (0, 1).
  auto center_of = [&](const std::vector<long>& v) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = static_cast<double>(v[static_cast<size_t>(i)]);
    return frame.coords(x, dynamics::Subspace::c);
  };
  std::vector<long> e1(static_cast<size_t>(n), 0), e2(static_cast<size_t>(n), 0);
  e1[0] = 1;
  e2[1] = 1;
  const auto w1 = center_of(e1), w2 = center_of(e2);
  const double det = w1[0] * w2[1] - w1[1] * w2[0];
  for (const auto& v : out.n) {
    const auto y = center_of(v);
    out.alpha_measured.push_back({(w2[1] * y[0] - w2[0] * y[1]) / det, (-w1[1] * y[0] + w1[0] * y[1]) / det});
  }
  return out;
}

}  // namespace tpa::linearization
