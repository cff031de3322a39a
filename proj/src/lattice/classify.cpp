#include "tpa/lattice/classify.hpp"

#include <algorithm>
#include <cmath>

#include "tpa/errors.hpp"
#include "tpa/lattice/numeric_roots.hpp"

namespace tpa::lattice {
namespace {

bool is_cyclotomic_poly(const IntPolynomial& f) {
  for (unsigned long m : cyclotomic_indices_up_to_degree(f.degree()))
    if (cyclotomic(m) == f) return true;
  return false;
}

// Unit-modulus roots of an irreducible factor: all of them for a cyclotomic
// factor; for any other factor they exist only if it is palindromic, and then
// the trace polynomial counts them exactly.
int unit_roots_of_irreducible(const IntPolynomial& f) {
  if (is_cyclotomic_poly(f)) return f.degree();
  if (f.degree() % 2 != 0 || !f.is_palindromic()) return 0;
  auto cnt = count_in_trace_interval(trace_reduce(f));
  return 2 * (cnt.inside + cnt.at_plus_two + cnt.at_minus_two);
}

}  // namespace

SpectralClassification classify_polynomial(const IntPolynomial& p) {
  if (p.degree() < 1 || !p.is_monic()) throw InvalidInput("classification needs a monic polynomial of degree >= 1");
  SpectralClassification c;
  const int n = p.degree();
  c.char_poly = p;
  c.palindromic = p.is_palindromic();
  c.cyclotomic = cyclotomic_factors(p);
  c.ergodic = c.cyclotomic.empty();
  c.power = is_power_polynomial(p);
  c.irreducibility = irreducibility_certificate(p);
  c.irreducible = c.irreducibility.irreducible;

  auto roots = numerical_roots(p);
  auto gap = [](const std::complex<long double>& z) { return std::fabs(static_cast<double>(std::abs(z)) - 1.0); };

  if (c.palindromic && n % 2 == 0) {
    c.trace_q = trace_reduce(p);
    c.trace_count = count_in_trace_interval(*c.trace_q);
    c.center_dim = 2 * (c.trace_count->inside + c.trace_count->at_plus_two + c.trace_count->at_minus_two);
    c.center_route = "trace-sturm";
  } else {
    int cyc_deg = 0;
    for (const auto& f : c.cyclotomic) cyc_deg += static_cast<int>(euler_phi(f.m)) * f.multiplicity;
    int near = 0;
    for (const auto& z : roots) near += gap(z) <= kUnitModulusTolerance;
    if (near == cyc_deg) {
      c.center_dim = cyc_deg;
      c.center_route = "numerical";
    } else {
      Factorization fz = factor(p);
      int dim = 0;
      for (const auto& [f, e] : fz.factors) dim += e * unit_roots_of_irreducible(f);
      c.center_dim = dim;
      c.center_route = "factor-sturm";
    }
  }
  c.unit_circle_pairs = c.center_dim / 2;

  // The center_dim roots nearest the circle are the center; the rest split by modulus.
  std::vector<size_t> order(roots.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return gap(roots[a]) < gap(roots[b]); });
  c.closest_noncyclotomic_modulus_gap = 0.0;
  bool first = true;
  for (size_t k = static_cast<size_t>(c.center_dim); k < order.size(); ++k) {
    const auto& z = roots[order[k]];
    if (first) {
      c.closest_noncyclotomic_modulus_gap = gap(z);
      first = false;
    }
    if (std::abs(z) < 1.0L)
      ++c.stable_dim;
    else
      ++c.unstable_dim;
  }
  c.anosov = c.ergodic && c.center_dim == 0;
  c.pseudo_anosov = c.ergodic && c.irreducible && !c.power.has_value();
  return c;
}

SpectralClassification classify(const ToralMatrix& a) { return classify_polynomial(char_poly(a)); }

}  // namespace tpa::lattice
