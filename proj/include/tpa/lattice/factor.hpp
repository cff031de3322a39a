#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tpa/lattice/int_poly.hpp"

namespace tpa::lattice {

struct DegreePattern {
  unsigned long prime = 0;
  std::vector<int> degrees;  // degrees of the irreducible factors mod prime, sorted
};

struct IrreducibilityCertificate {
  bool irreducible = false;
  // Stage that settled the verdict: "linear", "zero-root", "square-factor",
  // "rational-root", "degree-pattern", "lifted-recombination".
  std::string decided_by;
  std::vector<DegreePattern> patterns;
  std::vector<int> surviving_degrees;  // possible proper factor degrees after pruning
  std::optional<IntPolynomial> factor;  // a proper factor when reducible
  bool rational_root_test_skipped = false;
};

IrreducibilityCertificate irreducibility_certificate(const IntPolynomial& p);

// Throws InvalidInput on constant or non-primitive input.
bool is_irreducible(const IntPolynomial& p);

// Complete factorization over Z of a nonzero polynomial: p = unit * content * prod f_i^{e_i}.
struct Factorization {
  Int content;  // signed so that the product identity is exact
  std::vector<std::pair<IntPolynomial, int>> factors;  // primitive, positive leading coefficient
};
Factorization factor(const IntPolynomial& p);

// Exposed for tests: degree multiset of P mod prime (P squarefree mod prime, prime odd or 2).
std::optional<std::vector<int>> modular_degree_pattern(const IntPolynomial& p, unsigned long prime);

}  // namespace tpa::lattice
