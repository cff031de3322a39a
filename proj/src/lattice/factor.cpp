#include "tpa/lattice/factor.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>

#include "tpa/errors.hpp"

namespace tpa::lattice {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// ---- polynomials over F_p, p < 2^32 -------------------------------------

using Fp = std::vector<u64>;

struct Field {
  u64 p;
  u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= p ? s - p : s; }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p); }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  u64 inv(u64 a) const { return pow(a, p - 2); }
};

void trim(Fp& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const Fp& a) { return static_cast<int>(a.size()) - 1; }

Fp reduce(const IntPolynomial& f, u64 p) {
  Fp out(f.coeffs().size());
  for (size_t k = 0; k < out.size(); ++k) out[k] = mpz_fdiv_ui(f.coeffs()[k].get_mpz_t(), p);
  trim(out);
  return out;
}

Fp fp_sub(const Field& F, const Fp& a, const Fp& b) {
  Fp r(std::max(a.size(), b.size()), 0);
  for (size_t k = 0; k < a.size(); ++k) r[k] = a[k];
  for (size_t k = 0; k < b.size(); ++k) r[k] = F.sub(r[k], b[k]);
  trim(r);
  return r;
}

Fp fp_mul(const Field& F, const Fp& a, const Fp& b) {
  if (a.empty() || b.empty()) return {};
  Fp r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  trim(r);
  return r;
}

void fp_divmod(const Field& F, const Fp& a, const Fp& b, Fp* q, Fp* r) {
  Fp rem = a;
  const int db = deg(b);
  const u64 linv = F.inv(b.back());
  Fp quo(std::max(0, deg(a) - db + 1), 0);
  for (int k = deg(rem); k >= db; --k) {
    u64 c = F.mul(rem[static_cast<size_t>(k)], linv);
    if (c == 0) continue;
    quo[static_cast<size_t>(k - db)] = c;
    for (int j = 0; j <= db; ++j) rem[static_cast<size_t>(k - db + j)] = F.sub(rem[static_cast<size_t>(k - db + j)], F.mul(c, b[static_cast<size_t>(j)]));
  }
  trim(rem);
  trim(quo);
  if (q) *q = std::move(quo);
  if (r) *r = std::move(rem);
}

Fp fp_mod(const Field& F, const Fp& a, const Fp& b) {
  Fp r;
  fp_divmod(F, a, b, nullptr, &r);
  return r;
}

Fp fp_monic(const Field& F, Fp a) {
  if (a.empty()) return a;
  u64 li = F.inv(a.back());
  for (auto& c : a) c = F.mul(c, li);
  return a;
}

Fp fp_gcd(const Field& F, Fp a, Fp b) {
  while (!b.empty()) {
    Fp r = fp_mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(F, a);
}

// s*a + t*b = 1 (a, b coprime), deg s < deg b, deg t < deg a.
void fp_xgcd(const Field& F, const Fp& a, const Fp& b, Fp* s, Fp* t) {
  Fp r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
  while (!r1.empty()) {
    Fp q, r;
    fp_divmod(F, r0, r1, &q, &r);
    Fp s2 = fp_sub(F, s0, fp_mul(F, q, s1));
    Fp t2 = fp_sub(F, t0, fp_mul(F, q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  // r0 is a nonzero constant
  u64 ci = F.inv(r0[0]);
  for (auto& c : s0) c = F.mul(c, ci);
  for (auto& c : t0) c = F.mul(c, ci);
  *s = s0;
  *t = t0;
}

Fp fp_powmod(const Field& F, Fp base, const Int& e, const Fp& mod) {
  Fp r = {1};
  base = fp_mod(F, base, mod);
  const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = fp_mod(F, fp_mul(F, r, r), mod);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = fp_mod(F, fp_mul(F, r, base), mod);
  }
  return r;
}

Fp fp_derivative(const Field& F, const Fp& a) {
  if (a.size() <= 1) return {};
  Fp d(a.size() - 1);
  for (size_t k = 1; k < a.size(); ++k) d[k - 1] = F.mul(a[k], k % F.p);
  trim(d);
  return d;
}

// Distinct-degree factorization of a monic squarefree polynomial.
std::vector<std::pair<Fp, int>> ddf(const Field& F, Fp f) {
  std::vector<std::pair<Fp, int>> out;
  const Fp x = {0, 1};
  Fp h = x;
  int i = 0;
  while (deg(f) >= 2 * (i + 1)) {
    ++i;
    h = fp_powmod(F, h, Int(static_cast<unsigned long>(F.p)), f);
    Fp g = fp_gcd(F, fp_sub(F, h, x), f);
    if (deg(g) > 0) {
      out.emplace_back(g, i);
      Fp q;
      fp_divmod(F, f, g, &q, nullptr);
      f = std::move(q);
      h = fp_mod(F, h, f);
    }
  }
  if (deg(f) > 0) out.emplace_back(f, deg(f));
  return out;
}

// Cantor-Zassenhaus equal-degree splitting (p odd).
void edf(const Field& F, const Fp& g, int d, std::mt19937_64& rng, std::vector<Fp>& out) {
  if (deg(g) == d) {
    out.push_back(fp_monic(F, g));
    return;
  }
  Int e;
  mpz_ui_pow_ui(e.get_mpz_t(), F.p, static_cast<unsigned long>(d));
  e = (e - 1) / 2;
  std::uniform_int_distribution<u64> dist(0, F.p - 1);
  for (;;) {
    Fp a(static_cast<size_t>(deg(g)));
    for (auto& c : a) c = dist(rng);
    trim(a);
    if (deg(a) < 1) continue;
    Fp b = fp_powmod(F, a, e, g);
    b = fp_sub(F, b, Fp{1});
    Fp u = fp_gcd(F, b, g);
    if (deg(u) > 0 && deg(u) < deg(g)) {
      Fp q;
      fp_divmod(F, g, u, &q, nullptr);
      edf(F, u, d, rng, out);
      edf(F, q, d, rng, out);
      return;
    }
  }
}

// Prime is usable if it does not divide the leading coefficient and P stays squarefree.
bool usable_prime(const IntPolynomial& f, u64 p) {
  if (mpz_fdiv_ui(f.leading().get_mpz_t(), p) == 0) return false;
  Field F{p};
  Fp fp = fp_monic(F, reduce(f, p));
  Fp g = fp_gcd(F, fp, fp_derivative(F, fp));
  return deg(g) == 0;
}

std::vector<u64> small_primes(u64 limit) {
  std::vector<u64> out;
  for (u64 n = 3; n <= limit; n += 2) {
    bool prime = true;
    for (u64 d = 3; d * d <= n; d += 2)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (prime) out.push_back(n);
  }
  return out;
}

// ---- polynomials over Z/m (m = p^k), coefficients kept in [0, m) ----------

using Zm = std::vector<Int>;

void ztrim(Zm& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

void zreduce(Zm& a, const Int& m) {
  for (auto& c : a) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  ztrim(a);
}

Zm zadd(const Zm& a, const Zm& b, const Int& m) {
  Zm r(std::max(a.size(), b.size()), Int(0));
  for (size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (size_t k = 0; k < b.size(); ++k) r[k] += b[k];
  zreduce(r, m);
  return r;
}

Zm zsub(const Zm& a, const Zm& b, const Int& m) {
  Zm r(std::max(a.size(), b.size()), Int(0));
  for (size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (size_t k = 0; k < b.size(); ++k) r[k] -= b[k];
  zreduce(r, m);
  return r;
}

Zm zmul(const Zm& a, const Zm& b, const Int& m) {
  if (a.empty() || b.empty()) return {};
  Zm r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  zreduce(r, m);
  return r;
}

// b monic.
void zdivmod(const Zm& a, const Zm& b, const Int& m, Zm* q, Zm* r) {
  Zm rem = a;
  const int db = static_cast<int>(b.size()) - 1;
  const int da = static_cast<int>(a.size()) - 1;
  Zm quo(static_cast<size_t>(std::max(0, da - db + 1)), Int(0));
  for (int k = da; k >= db; --k) {
    Int c = rem[static_cast<size_t>(k)];
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (c == 0) continue;
    quo[static_cast<size_t>(k - db)] = c;
    for (int j = 0; j <= db; ++j) rem[static_cast<size_t>(k - db + j)] -= c * b[static_cast<size_t>(j)];
  }
  zreduce(rem, m);
  zreduce(quo, m);
  if (q) *q = std::move(quo);
  if (r) *r = std::move(rem);
}

Zm from_fp(const Fp& a) {
  Zm r(a.size());
  for (size_t k = 0; k < a.size(); ++k) r[k] = Int(static_cast<unsigned long>(a[k]));
  return r;
}

// One quadratic Hensel step: f = g h, s g + t h = 1 mod m  ->  same mod m2.
void hensel_step(const Zm& f, Zm& g, Zm& h, Zm& s, Zm& t, const Int& m2) {
  Zm e = zsub(f, zmul(g, h, m2), m2);
  Zm q, r;
  zdivmod(zmul(s, e, m2), h, m2, &q, &r);
  Zm g2 = zadd(g, zadd(zmul(t, e, m2), zmul(q, g, m2), m2), m2);
  Zm h2 = zadd(h, r, m2);
  Zm b = zsub(zadd(zmul(s, g2, m2), zmul(t, h2, m2), m2), Zm{Int(1)}, m2);
  Zm c, d;
  zdivmod(zmul(s, b, m2), h2, m2, &c, &d);
  s = zsub(s, d, m2);
  t = zsub(t, zadd(zmul(t, b, m2), zmul(c, g2, m2), m2), m2);
  g = std::move(g2);
  h = std::move(h2);
}

// Lift a factorization f = prod factors (mod p, all monic) to mod M = p^K.
void lift_tree(const Field& F, const Zm& f, const std::vector<Fp>& factors, const Int& M,
               std::vector<Zm>& out) {
  if (factors.size() == 1) {
    out.push_back(f);
    return;
  }
  const size_t half = factors.size() / 2;
  std::vector<Fp> left(factors.begin(), factors.begin() + static_cast<long>(half));
  std::vector<Fp> right(factors.begin() + static_cast<long>(half), factors.end());
  Fp g0 = {1}, h0 = {1};
  for (const auto& a : left) g0 = fp_mul(F, g0, a);
  for (const auto& a : right) h0 = fp_mul(F, h0, a);
  Fp s0, t0;
  fp_xgcd(F, g0, h0, &s0, &t0);
  Zm g = from_fp(g0), h = from_fp(h0), s = from_fp(s0), t = from_fp(t0);
  Int m = Int(static_cast<unsigned long>(F.p));
  while (m < M) {
    Int m2 = m * m;
    if (m2 > M) m2 = M;
    Zm fm = f;
    zreduce(fm, m2);
    hensel_step(fm, g, h, s, t, m2);
    m = m2;
  }
  lift_tree(F, g, left, M, out);
  lift_tree(F, h, right, M, out);
}

IntPolynomial symmetric(const Zm& a, const Int& m) {
  Int half = m / 2;
  std::vector<Int> v(a.size());
  for (size_t k = 0; k < a.size(); ++k) {
    Int c = a[k];
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (c > half) c -= m;
    v[k] = c;
  }
  return IntPolynomial(std::move(v));
}

Int coefficient_bound(const IntPolynomial& f) {
  Int s2 = 0;
  for (const auto& c : f.coeffs()) s2 += c * c;
  Int norm;
  mpz_sqrt(norm.get_mpz_t(), s2.get_mpz_t());
  norm += 1;
  Int two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, static_cast<unsigned long>(f.degree()));
  return abs(f.leading()) * two_n * norm;
}

std::vector<Int> small_divisors(const Int& n) {
  std::vector<Int> out;
  Int a = abs(n);
  if (a == 0 || a > Int("1000000000000")) return out;
  unsigned long v = a.get_ui();
  for (unsigned long d = 1; d * d <= v; ++d)
    if (v % d == 0) {
      out.emplace_back(d);
      if (d != v / d) out.emplace_back(v / d);
    }
  return out;
}

std::vector<int> subset_sums(const std::vector<int>& degs, int n) {
  std::vector<char> reach(static_cast<size_t>(n) + 1, 0);
  reach[0] = 1;
  for (int d : degs)
    for (int s = n; s >= d; --s)
      if (reach[static_cast<size_t>(s - d)]) reach[static_cast<size_t>(s)] = 1;
  std::vector<int> out;
  for (int s = 1; s < n; ++s)
    if (reach[static_cast<size_t>(s)]) out.push_back(s);
  return out;
}

struct ModularData {
  std::vector<DegreePattern> patterns;
  std::vector<int> surviving;
  u64 best_prime = 0;
};

ModularData modular_stage(const IntPolynomial& f) {
  ModularData md;
  const int n = f.degree();
  std::vector<char> alive(static_cast<size_t>(n) + 1, 1);
  size_t best_count = SIZE_MAX;
  int tested = 0;
  for (u64 p : small_primes(400)) {
    if (tested >= 8) break;
    if (!usable_prime(f, p)) continue;
    auto pat = modular_degree_pattern(f, p);
    if (!pat) continue;
    ++tested;
    md.patterns.push_back({p, *pat});
    std::vector<char> reach(static_cast<size_t>(n) + 1, 0);
    for (int s : subset_sums(*pat, n)) reach[static_cast<size_t>(s)] = 1;
    for (int s = 1; s < n; ++s) alive[static_cast<size_t>(s)] &= reach[static_cast<size_t>(s)];
    if (pat->size() < best_count) {
      best_count = pat->size();
      md.best_prime = p;
    }
    bool any = false;
    for (int s = 1; s < n; ++s) any |= alive[static_cast<size_t>(s)] != 0;
    if (!any) break;
  }
  for (int s = 1; s < n; ++s)
    if (alive[static_cast<size_t>(s)]) md.surviving.push_back(s);
  return md;
}

// Zassenhaus: lift the modular factorization past the coefficient bound and
// recombine. Returns the irreducible factors of a squarefree primitive f with
// f(0) != 0; stops after the first proper factor when first_only is set.
std::vector<IntPolynomial> lifted_recombination(const IntPolynomial& f, u64 p, bool first_only) {
  Field F{p};
  std::mt19937_64 rng(0x5eed0000ULL + p);
  Fp fm = fp_monic(F, reduce(f, p));
  std::vector<Fp> mod_factors;
  for (auto& [g, d] : ddf(F, fm)) edf(F, g, d, rng, mod_factors);
  std::sort(mod_factors.begin(), mod_factors.end());
  if (mod_factors.size() <= 1) return {f};

  const Int bound = 2 * coefficient_bound(f) + 1;
  Int M = Int(static_cast<unsigned long>(p));
  while (M <= bound) M *= Int(static_cast<unsigned long>(p));

  // Monic normalization of f modulo M.
  Int lc_inv;
  Int lc = f.leading();
  mpz_fdiv_r(lc.get_mpz_t(), lc.get_mpz_t(), M.get_mpz_t());
  mpz_invert(lc_inv.get_mpz_t(), lc.get_mpz_t(), M.get_mpz_t());
  Zm fM(f.coeffs().begin(), f.coeffs().end());
  for (auto& c : fM) c *= lc_inv;
  zreduce(fM, M);

  std::vector<Zm> lifted;
  lift_tree(F, fM, mod_factors, M, lifted);

  std::vector<IntPolynomial> found;
  IntPolynomial cur = f;
  size_t s = 1;
  while (2 * s <= lifted.size()) {
    bool hit = false;
    std::vector<size_t> idx(s);
    for (size_t i = 0; i < s; ++i) idx[i] = i;
    for (;;) {
      Zm prod = {cur.leading()};
      zreduce(prod, M);
      for (size_t i : idx) prod = zmul(prod, lifted[i], M);
      IntPolynomial cand = symmetric(prod, M).primitive_part();
      if (cand.degree() > 0 && cand.degree() < cur.degree()) {
        if (auto q = exact_divide(cur, cand)) {
          found.push_back(cand);
          if (first_only) return found;
          cur = *q;
          for (size_t i = s; i-- > 0;) lifted.erase(lifted.begin() + static_cast<long>(idx[i]));
          hit = true;
          break;
        }
      }
      // next combination
      size_t i = s;
      while (i > 0 && idx[i - 1] == lifted.size() - s + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!hit) ++s;
  }
  if (first_only) return {};
  found.push_back(cur.primitive_part());
  return found;
}

void require_primitive(const IntPolynomial& p) {
  if (p.degree() < 1) throw InvalidInput("irreducibility test needs a nonconstant polynomial");
  if (p.content() != 1) throw InvalidInput("irreducibility test needs a primitive polynomial");
}

}  // namespace

std::optional<std::vector<int>> modular_degree_pattern(const IntPolynomial& f, unsigned long prime) {
  if (!usable_prime(f, prime)) return std::nullopt;
  Field F{prime};
  Fp fm = fp_monic(F, reduce(f, prime));
  std::vector<int> degs;
  for (const auto& [g, d] : ddf(F, fm))
    for (int k = 0; k < deg(g) / d; ++k) degs.push_back(d);
  std::sort(degs.begin(), degs.end());
  return degs;
}

IrreducibilityCertificate irreducibility_certificate(const IntPolynomial& p) {
  require_primitive(p);
  IrreducibilityCertificate cert;
  const int n = p.degree();
  if (n == 1) {
    cert.irreducible = true;
    cert.decided_by = "linear";
    return cert;
  }
  if (p.coeff(0) == 0) {
    cert.decided_by = "zero-root";
    cert.factor = IntPolynomial{0, 1};
    return cert;
  }
  IntPolynomial g = gcd(p, p.derivative());
  if (g.degree() > 0) {
    cert.decided_by = "square-factor";
    cert.factor = g;
    return cert;
  }
  // Rational roots a/b with a | p_0, b | lc.
  auto num = small_divisors(p.coeff(0));
  auto den = small_divisors(p.leading());
  if (num.empty() || den.empty()) {
    cert.rational_root_test_skipped = true;
  } else {
    for (const auto& a : num)
      for (const auto& b : den)
        for (int sgn : {1, -1}) {
          Rat x(sgn * a, b);
          x.canonicalize();
          if (x.get_den() != b) continue;  // visit each reduced fraction once
          if (p.eval(x) == 0) {
            cert.decided_by = "rational-root";
            cert.factor = IntPolynomial(std::vector<Int>{-x.get_num(), x.get_den()});
            return cert;
          }
        }
  }
  ModularData md = modular_stage(p);
  cert.patterns = md.patterns;
  cert.surviving_degrees = md.surviving;
  if (md.surviving.empty()) {
    cert.irreducible = true;
    cert.decided_by = "degree-pattern";
    return cert;
  }
  if (md.best_prime == 0) throw Inconclusive("no usable prime for modular factorization");
  auto fs = lifted_recombination(p, md.best_prime, true);
  cert.decided_by = "lifted-recombination";
  if (fs.empty()) {
    cert.irreducible = true;
  } else {
    cert.factor = fs.front();
  }
  return cert;
}

bool is_irreducible(const IntPolynomial& p) { return irreducibility_certificate(p).irreducible; }

Factorization factor(const IntPolynomial& p) {
  if (p.is_zero()) throw InvalidInput("cannot factor the zero polynomial");
  Factorization out;
  out.content = p.content();
  if (p.leading() < 0) out.content = -out.content;
  IntPolynomial pp = p.primitive_part();
  std::vector<std::pair<IntPolynomial, int>> fs;
  for (auto& [f, e] : squarefree_decomposition(pp)) {
    IntPolynomial rest = f;
    if (rest.coeff(0) == 0) {
      fs.emplace_back(IntPolynomial{0, 1}, e);
      rest = *exact_divide(rest, IntPolynomial{0, 1});
    }
    if (rest.degree() < 1) continue;
    if (rest.degree() == 1) {
      fs.emplace_back(rest, e);
      continue;
    }
    ModularData md = modular_stage(rest);
    if (md.surviving.empty()) {
      fs.emplace_back(rest, e);
      continue;
    }
    for (auto& g : lifted_recombination(rest, md.best_prime, false)) fs.emplace_back(g, e);
  }
  std::sort(fs.begin(), fs.end(), [](const auto& a, const auto& b) {
    if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
    if (a.first.coeffs() != b.first.coeffs()) return a.first.coeffs() < b.first.coeffs();
    return a.second < b.second;
  });
  out.factors = std::move(fs);
  return out;
}

}  // namespace tpa::lattice
