#pragma once

#include <vector>

#include "tpa/lattice/int_poly.hpp"

namespace tpa::lattice {

// Sturm chain with integer coefficients (each term rescaled by a positive constant).
std::vector<IntPolynomial> sturm_sequence(const IntPolynomial& q);

int sign_variations(const std::vector<IntPolynomial>& seq, const Rat& x);

// Distinct real roots of q in the open interval (a, b); q(a), q(b) must be nonzero.
int count_roots_between(const IntPolynomial& q, const Rat& a, const Rat& b);

// Roots of Q inside (-2, 2) counted with multiplicity, plus the multiplicities at
// the endpoints. Each root c in (-2, 2) is 2Re(lambda) for a conjugate pair of
// unit-modulus roots lambda of the palindromic P that reduces to Q.
struct TraceIntervalCount {
  int inside = 0;       // with multiplicity
  int inside_distinct = 0;
  int at_plus_two = 0;  // multiplicity of z = 2
  int at_minus_two = 0;
  struct Part {
    IntPolynomial factor;  // squarefree part, endpoint roots removed
    int multiplicity;
    int variations_at_minus_two;
    int variations_at_plus_two;
  };
  std::vector<Part> parts;
};

TraceIntervalCount count_in_trace_interval(const IntPolynomial& q);

}  // namespace tpa::lattice
