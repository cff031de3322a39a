#pragma once

#include <optional>
#include <vector>

#include "tpa/lattice/int_poly.hpp"

namespace tpa::lattice {

// R_k(2cos t) = 2cos(kt), I_k(2cos t) sin t = sin(kt).
struct TracePair {
  std::vector<IntPolynomial> R;  // R_0 .. R_k
  std::vector<IntPolynomial> I;  // I_0 .. I_k (I_0 = 0 kept for indexing)
};

TracePair trace_pair(int k_max);

// Q = p_r + sum_{k=1..r} p_{r+k} R_k for palindromic P of degree 2r.
IntPolynomial trace_reduce(const IntPolynomial& p);

struct PowerForm {
  int n;
  IntPolynomial q;  // P(t) = q(t^n)
};

// Largest n >= 2 with P(t) = Q(t^n), if any.
std::optional<PowerForm> is_power_polynomial(const IntPolynomial& p);

}  // namespace tpa::lattice
