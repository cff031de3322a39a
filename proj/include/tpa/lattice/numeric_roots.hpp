#pragma once

#include <complex>
#include <vector>

#include "tpa/lattice/int_poly.hpp"

namespace tpa::lattice {

// All complex roots (with multiplicity) via the companion eigenproblem, each
// polished by long-double Newton steps on P. Sorted by modulus, then argument.
std::vector<std::complex<long double>> numerical_roots(const IntPolynomial& p);

}  // namespace tpa::lattice
