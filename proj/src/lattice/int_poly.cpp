#include "tpa/lattice/int_poly.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace tpa::lattice {

IntPolynomial::IntPolynomial(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
  c_.reserve(coeffs.size());
  for (long v : coeffs) c_.emplace_back(v);
  trim();
}

IntPolynomial IntPolynomial::monomial(const Int& c, int k) {
  if (c == 0) return {};
  std::vector<Int> v(static_cast<size_t>(k) + 1, Int(0));
  v[static_cast<size_t>(k)] = c;
  return IntPolynomial(std::move(v));
}

void IntPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Int IntPolynomial::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Int(0);
  return c_[static_cast<size_t>(k)];
}

IntPolynomial IntPolynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Int> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<unsigned long>(k);
  return IntPolynomial(std::move(d));
}

IntPolynomial IntPolynomial::compose(const IntPolynomial& inner) const {
  IntPolynomial out;
  for (int k = degree(); k >= 0; --k) out = out * inner + constant(c_[static_cast<size_t>(k)]);
  return out;
}

Int IntPolynomial::content() const {
  Int g = 0;
  for (const auto& c : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntPolynomial IntPolynomial::primitive_part() const {
  if (c_.empty()) return {};
  Int g = content();
  if (c_.back() < 0) g = -g;
  std::vector<Int> v(c_.size());
  for (size_t k = 0; k < c_.size(); ++k) mpz_divexact(v[k].get_mpz_t(), c_[k].get_mpz_t(), g.get_mpz_t());
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::negated() const {
  std::vector<Int> v(c_.size());
  for (size_t k = 0; k < c_.size(); ++k) v[k] = -c_[k];
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::reflected() const {
  std::vector<Int> v = c_;
  for (size_t k = 1; k < v.size(); k += 2) v[k] = -v[k];
  return IntPolynomial(std::move(v));
}

IntPolynomial IntPolynomial::reversed() const {
  std::vector<Int> v(c_.rbegin(), c_.rend());
  return IntPolynomial(std::move(v));
}

bool IntPolynomial::is_palindromic() const {
  if (c_.empty()) return false;
  for (size_t k = 0, j = c_.size() - 1; k < j; ++k, --j)
    if (c_[k] != c_[j]) return false;
  return true;
}

Int IntPolynomial::eval(const Int& x) const {
  Int acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Rat IntPolynomial::eval(const Rat& x) const {
  Rat acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Rat(*it);
  acc.canonicalize();
  return acc;
}

long double IntPolynomial::eval(long double x) const {
  long double acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + static_cast<long double>(it->get_d());
  return acc;
}

double IntPolynomial::eval_correctly_rounded(double x) const {
  Rat q(x);
  return eval(q).get_d();
}

std::complex<long double> IntPolynomial::eval(std::complex<long double> z) const {
  std::complex<long double> acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + static_cast<long double>(it->get_d());
  return acc;
}

std::string IntPolynomial::to_string(char var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Int& c = c_[static_cast<size_t>(k)];
    if (c == 0) continue;
    Int mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (mag != 1 || k == 0) os << mag.get_str();
    if (k >= 1) os << var;
    if (k >= 2) os << "^" << k;
  }
  return os.str();
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<Int> v(std::max(a.c_.size(), b.c_.size()), Int(0));
  for (size_t k = 0; k < a.c_.size(); ++k) v[k] += a.c_[k];
  for (size_t k = 0; k < b.c_.size(); ++k) v[k] += b.c_[k];
  return IntPolynomial(std::move(v));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
  std::vector<Int> v(std::max(a.c_.size(), b.c_.size()), Int(0));
  for (size_t k = 0; k < a.c_.size(); ++k) v[k] += a.c_[k];
  for (size_t k = 0; k < b.c_.size(); ++k) v[k] -= b.c_[k];
  return IntPolynomial(std::move(v));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.c_.empty() || b.c_.empty()) return {};
  std::vector<Int> v(a.c_.size() + b.c_.size() - 1, Int(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  }
  return IntPolynomial(std::move(v));
}

IntPolynomial operator*(const Int& s, const IntPolynomial& a) {
  std::vector<Int> v(a.c_.size());
  for (size_t k = 0; k < v.size(); ++k) v[k] = s * a.c_[k];
  return IntPolynomial(std::move(v));
}

IntPolynomial pow(const IntPolynomial& p, int e) {
  IntPolynomial out = IntPolynomial::constant(1), base = p;
  while (e > 0) {
    if (e & 1) out = out * base;
    base = base * base;
    e >>= 1;
  }
  return out;
}

std::optional<IntPolynomial> exact_divide(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return IntPolynomial{};
  if (a.degree() < b.degree()) return std::nullopt;
  std::vector<Int> r = a.coeffs();
  const auto& bc = b.coeffs();
  const int db = b.degree();
  std::vector<Int> q(static_cast<size_t>(a.degree() - db) + 1, Int(0));
  for (int k = a.degree(); k >= db; --k) {
    Int& top = r[static_cast<size_t>(k)];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), b.leading().get_mpz_t())) return std::nullopt;
    Int f;
    mpz_divexact(f.get_mpz_t(), top.get_mpz_t(), b.leading().get_mpz_t());
    q[static_cast<size_t>(k - db)] = f;
    for (int j = 0; j <= db; ++j) r[static_cast<size_t>(k - db + j)] -= f * bc[static_cast<size_t>(j)];
  }
  for (int k = 0; k < db; ++k)
    if (r[static_cast<size_t>(k)] != 0) return std::nullopt;
  return IntPolynomial(std::move(q));
}

IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) return a;
  const int db = b.degree();
  std::vector<Int> r = a.coeffs();
  const auto& bc = b.coeffs();
  const Int& lb = b.leading();
  int steps = std::max(0, a.degree() - db + 1);
  int dr = a.degree();
  while (dr >= db && dr >= 0) {
    Int top = r[static_cast<size_t>(dr)];
    for (auto& c : r) c *= lb;
    for (int j = 0; j <= db; ++j) r[static_cast<size_t>(dr - db + j)] -= top * bc[static_cast<size_t>(j)];
    --steps;
    while (dr >= 0 && r[static_cast<size_t>(dr)] == 0) --dr;
  }
  for (; steps > 0; --steps)
    for (auto& c : r) c *= lb;
  return IntPolynomial(std::move(r));
}

IntPolynomial gcd(const IntPolynomial& a0, const IntPolynomial& b0) {
  IntPolynomial a = a0.primitive_part(), b = b0.primitive_part();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    IntPolynomial r = pseudo_remainder(a, b);
    a = std::move(b);
    b = r.primitive_part();
  }
  if (a.degree() == 0) return IntPolynomial::constant(1);
  return a.primitive_part();
}

std::vector<std::pair<IntPolynomial, int>> squarefree_decomposition(const IntPolynomial& p) {
  std::vector<std::pair<IntPolynomial, int>> out;
  IntPolynomial f = p.primitive_part();
  if (f.degree() <= 0) return out;
  IntPolynomial fp = f.derivative();
  IntPolynomial a = gcd(f, fp);
  IntPolynomial b = *exact_divide(f, a);
  IntPolynomial c = *exact_divide(fp, a);
  IntPolynomial d = c - b.derivative();
  for (int i = 1; b.degree() > 0; ++i) {
    IntPolynomial g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = *exact_divide(b, g);
    d = *exact_divide(d, g) - b.derivative();
  }
  return out;
}

}  // namespace tpa::lattice
