#include "tpa/lattice/trace.hpp"

#include <numeric>

#include "tpa/errors.hpp"

namespace tpa::lattice {

TracePair trace_pair(int k_max) {
  if (k_max < 1) throw InvalidInput("trace_pair needs k_max >= 1");
  const IntPolynomial z{0, 1};
  TracePair tp;
  tp.I = {IntPolynomial{}, IntPolynomial{1}};
  tp.R = {IntPolynomial{2}};
  // c_k = z a_k - 2 a_{k-1};  a_{k+1} = c_k + a_{k-1}
  for (int k = 1; k <= k_max; ++k) {
    const auto& ak = tp.I[static_cast<size_t>(k)];
    const auto& akm1 = tp.I[static_cast<size_t>(k - 1)];
    tp.R.push_back(z * ak - IntPolynomial::constant(2) * akm1);
    if (k < k_max) tp.I.push_back(tp.R.back() + akm1);
  }
  return tp;
}

IntPolynomial trace_reduce(const IntPolynomial& p) {
  if (p.degree() < 0 || p.degree() % 2 != 0) throw InvalidInput("trace_reduce needs even degree");
  if (!p.is_palindromic()) throw InvalidInput("trace_reduce needs a palindromic polynomial");
  const int r = p.degree() / 2;
  if (r == 0) return p;
  TracePair tp = trace_pair(r);
  IntPolynomial q = IntPolynomial::constant(p.coeff(r));
  for (int k = 1; k <= r; ++k) q = q + p.coeff(r + k) * tp.R[static_cast<size_t>(k)];
  return q;
}

std::optional<PowerForm> is_power_polynomial(const IntPolynomial& p) {
  if (p.degree() < 2) return std::nullopt;
  int g = 0;
  for (int k = 1; k <= p.degree(); ++k)
    if (p.coeff(k) != 0) g = std::gcd(g, k);
  if (g < 2) return std::nullopt;
  std::vector<Int> q(static_cast<size_t>(p.degree() / g) + 1);
  for (int k = 0; k <= p.degree() / g; ++k) q[static_cast<size_t>(k)] = p.coeff(k * g);
  return PowerForm{g, IntPolynomial(std::move(q))};
}

}  // namespace tpa::lattice
