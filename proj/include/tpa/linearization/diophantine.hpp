#pragma once

#include <array>
#include <optional>
#include <vector>

#include "tpa/lattice/int_matrix.hpp"

namespace tpa::linearization {

struct DiophantineSpec {
  std::vector<double> alpha;  // one or two components
  double exponent = 0;
  long radius = 0;
  // min over 0 < |n|_1 <= radius of ||n.alpha|| |n|_1^exponent, with its argmin
  // (canonical sign, lexicographic tie-break).
  double c_est = 0;
  std::vector<long> argmin;
  // One component only: the best approximation denominator q <= radius (the
  // n minimizing ||n alpha||) and q^exponent ||q alpha||. For quadratic
  // irrationals this tracks the limiting constant along convergents.
  std::optional<long> best_q;
  std::optional<double> best_q_value;
  long candidates_checked = 0;
};

// Exhaustive scan; alpha is reduced to fixed point so n.alpha mod 1 is exact
// for the encoded value.
DiophantineSpec diophantine_scan(const std::vector<double>& alpha, double exponent, long radius);

// Exact variant for rational alpha = (p_1, ..., p_c) / q: ||n.alpha|| is taken
// from the residue of n.p mod q, so it vanishes exactly at |n|_1 = q.
DiophantineSpec diophantine_scan_rational(const std::vector<long>& numerators, long denominator, double exponent,
                                          long radius);

// Simultaneous condition max_nu ||k.alpha_nu|| |k|_1^exponent over 0 < |k|_1 <= radius.
struct SimultaneousScan {
  double c_est = 0;
  std::array<long, 2> argmin{0, 0};
  long radius = 0;
  double exponent = 0;
};
SimultaneousScan simultaneous_scan(std::array<double, 2> alpha1, std::array<double, 2> alpha2, double exponent,
                                   long radius);

struct SpecialVectors {
  int dim = 0;
  double c1 = 0;                               // 2 cos(theta_c), the root of Q in (-2, 2)
  std::vector<std::vector<long>> n;            // one vector (N >= 6) or two (N = 4)
  std::vector<std::array<double, 2>> alpha;    // closed forms in c1
  std::vector<std::array<double, 2>> alpha_measured;  // L(n^c) from the splitting frame
};

// The lattice vectors whose center components carry a Diophantine rotation,
// for A in companion form (A e_i = e_{i+1}) with a two-dimensional center.
SpecialVectors special_vectors(const lattice::ToralMatrix& a);

}  // namespace tpa::linearization
