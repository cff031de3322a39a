#include "tpa/lattice/sturm.hpp"

#include "tpa/errors.hpp"

namespace tpa::lattice {

std::vector<IntPolynomial> sturm_sequence(const IntPolynomial& q) {
  std::vector<IntPolynomial> seq;
  if (q.is_zero()) return seq;
  seq.push_back(q);
  IntPolynomial d = q.derivative();
  if (d.is_zero()) return seq;
  seq.push_back(d);
  while (seq.back().degree() > 0) {
    const IntPolynomial& a = seq[seq.size() - 2];
    const IntPolynomial& b = seq.back();
    // prem = lc(b)^(delta+1) * rem; the chain needs -rem up to a positive factor.
    IntPolynomial r = pseudo_remainder(a, b);
    if (r.is_zero()) break;
    const int delta = a.degree() - b.degree();
    const bool flip = b.leading() > 0 || (delta + 1) % 2 == 0;
    IntPolynomial next = flip ? r.negated() : r;
    Int c = next.content();
    std::vector<Int> v(next.coeffs().size());
    for (size_t k = 0; k < v.size(); ++k) mpz_divexact(v[k].get_mpz_t(), next.coeffs()[k].get_mpz_t(), c.get_mpz_t());
    seq.emplace_back(std::move(v));
  }
  return seq;
}

int sign_variations(const std::vector<IntPolynomial>& seq, const Rat& x) {
  int changes = 0, last = 0;
  for (const auto& p : seq) {
    int s = sgn(p.eval(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int count_roots_between(const IntPolynomial& q, const Rat& a, const Rat& b) {
  if (q.eval(a) == 0 || q.eval(b) == 0) throw InvalidInput("Sturm interval endpoint is a root");
  auto seq = sturm_sequence(q);
  return sign_variations(seq, a) - sign_variations(seq, b);
}

TraceIntervalCount count_in_trace_interval(const IntPolynomial& q) {
  TraceIntervalCount out;
  const IntPolynomial zm2{-2, 1}, zp2{2, 1};
  for (auto [f, mult] : squarefree_decomposition(q)) {
    if (auto d = exact_divide(f, zm2)) {
      out.at_plus_two += mult;
      f = *d;
    }
    if (auto d = exact_divide(f, zp2)) {
      out.at_minus_two += mult;
      f = *d;
    }
    if (f.degree() < 1) continue;
    auto seq = sturm_sequence(f);
    TraceIntervalCount::Part part{f, mult, sign_variations(seq, Rat(-2)), sign_variations(seq, Rat(2))};
    const int n = part.variations_at_minus_two - part.variations_at_plus_two;
    out.inside_distinct += n;
    out.inside += n * mult;
    out.parts.push_back(std::move(part));
  }
  return out;
}

}  // namespace tpa::lattice
