#include "tpa/lattice/cyclotomic.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "tpa/errors.hpp"

namespace tpa::lattice {

unsigned long euler_phi(unsigned long m) {
  if (m == 0) return 0;
  unsigned long r = m, n = m;
  for (unsigned long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    r -= r / p;
  }
  if (n > 1) r -= r / n;
  return r;
}

int moebius(unsigned long m) {
  if (m == 0) throw InvalidInput("moebius(0)");
  int sign = 1;
  for (unsigned long p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    m /= p;
    if (m % p == 0) return 0;
    sign = -sign;
  }
  if (m > 1) sign = -sign;
  return sign;
}

const IntPolynomial& cyclotomic(unsigned long m) {
  if (m == 0) throw InvalidInput("cyclotomic index must be positive");
  static std::mutex mu;
  static std::map<unsigned long, std::unique_ptr<IntPolynomial>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return *it->second;
  IntPolynomial num = IntPolynomial::constant(1), den = IntPolynomial::constant(1);
  for (unsigned long d = 1; d <= m; ++d) {
    if (m % d) continue;
    int mu_v = moebius(m / d);
    if (mu_v == 0) continue;
    IntPolynomial td = IntPolynomial::monomial(Int(1), static_cast<int>(d)) - IntPolynomial::constant(1);
    (mu_v > 0 ? num : den) = (mu_v > 0 ? num : den) * td;
  }
  auto q = exact_divide(num, den);
  if (!q) throw std::logic_error("cyclotomic construction failed");
  IntPolynomial phi = *q;
  if (phi.leading() < 0) phi = phi.negated();
  auto [pos, _] = cache.emplace(m, std::make_unique<IntPolynomial>(std::move(phi)));
  return *pos->second;
}

std::vector<unsigned long> cyclotomic_indices_up_to_degree(int n) {
  // phi(m) >= sqrt(m/2), so phi(m) <= n forces m <= 2 n^2.
  std::vector<unsigned long> out;
  const unsigned long bound = 2UL * static_cast<unsigned long>(n) * static_cast<unsigned long>(n) + 2;
  for (unsigned long m = 1; m <= bound; ++m)
    if (euler_phi(m) <= static_cast<unsigned long>(n)) out.push_back(m);
  return out;
}

std::vector<CyclotomicFactor> cyclotomic_factors(const IntPolynomial& p) {
  std::vector<CyclotomicFactor> out;
  if (p.degree() < 1) return out;
  for (unsigned long m : cyclotomic_indices_up_to_degree(p.degree())) {
    IntPolynomial rest = p;
    int mult = 0;
    while (rest.degree() >= cyclotomic(m).degree()) {
      auto q = exact_divide(rest, cyclotomic(m));
      if (!q) break;
      rest = *q;
      ++mult;
    }
    if (mult > 0) out.push_back({m, mult});
  }
  return out;
}

bool is_ergodic(const ToralMatrix& a) { return cyclotomic_factors(char_poly(a)).empty(); }

}  // namespace tpa::lattice
