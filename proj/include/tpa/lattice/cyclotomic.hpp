#pragma once

#include <vector>

#include "tpa/lattice/int_matrix.hpp"
#include "tpa/lattice/int_poly.hpp"

namespace tpa::lattice {

unsigned long euler_phi(unsigned long m);
int moebius(unsigned long m);

// Phi_m built as prod_{d | m} (t^d - 1)^{mu(m/d)}; cached, thread-safe.
const IntPolynomial& cyclotomic(unsigned long m);

// All m with phi(m) <= n, ascending.
std::vector<unsigned long> cyclotomic_indices_up_to_degree(int n);

struct CyclotomicFactor {
  unsigned long m;
  int multiplicity;
};

// Exact list of Phi_m dividing P (with multiplicity).
std::vector<CyclotomicFactor> cyclotomic_factors(const IntPolynomial& p);

bool is_ergodic(const ToralMatrix& a);

}  // namespace tpa::lattice
