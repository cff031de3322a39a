#pragma once

#include <gmpxx.h>

#include <complex>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace tpa::lattice {

using Int = mpz_class;
using Rat = mpq_class;

// Dense univariate polynomial over Z, coeffs[k] multiplies t^k.
// Always trimmed: the zero polynomial has no coefficients.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Int> coeffs);
  IntPolynomial(std::initializer_list<long> coeffs);

  static IntPolynomial monomial(const Int& c, int k);
  static IntPolynomial constant(const Int& c) { return monomial(c, 0); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Int>& coeffs() const { return c_; }
  // Coefficient of t^k; zero outside the stored range.
  Int coeff(int k) const;
  const Int& leading() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  IntPolynomial derivative() const;
  IntPolynomial compose(const IntPolynomial& inner) const;
  Int content() const;
  IntPolynomial primitive_part() const;
  IntPolynomial negated() const;
  // p(-t)
  IntPolynomial reflected() const;
  // t^deg p(1/t)
  IntPolynomial reversed() const;
  bool is_palindromic() const;

  Int eval(const Int& x) const;
  Rat eval(const Rat& x) const;
  long double eval(long double x) const;
  // Exact value at the binary rational x, rounded once; immune to the
  // cancellation Horner suffers for large alternating coefficients.
  double eval_correctly_rounded(double x) const;
  std::complex<long double> eval(std::complex<long double> z) const;

  std::string to_string(char var = 't') const;

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(const Int& s, const IntPolynomial& a);
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.c_ == b.c_; }
  friend bool operator!=(const IntPolynomial& a, const IntPolynomial& b) { return !(a == b); }

 private:
  void trim();
  std::vector<Int> c_;
};

IntPolynomial pow(const IntPolynomial& p, int e);

// a = q*b exactly over Z, or nullopt.
std::optional<IntPolynomial> exact_divide(const IntPolynomial& a, const IntPolynomial& b);

// lc(b)^(deg a - deg b + 1) * a mod b.
IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b);

// Primitive gcd with positive leading coefficient (primitive PRS).
IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b);

// Square-free decomposition: p = c * prod f_i^i, returned as (f_i, i) with deg f_i > 0.
std::vector<std::pair<IntPolynomial, int>> squarefree_decomposition(const IntPolynomial& p);

}  // namespace tpa::lattice
