#pragma once

#include <vector>

#include "tpa/lattice/int_matrix.hpp"

namespace tpa::lattice {

struct ConstructedAutomorphism {
  int d;
  ToralMatrix A;  // companion matrix of P, size 2d
  IntPolynomial P;
  IntPolynomial Q;
};

// Q = z^d - 2 (d odd) or z^d - d 2^{d-1} z + 2 (d even); P is the palindromic
// degree-2d polynomial reducing to Q.
ConstructedAutomorphism construct_pseudo_anosov(int d);

// Inverse of trace_reduce: the palindromic P of degree 2r with trace polynomial Q (deg r).
IntPolynomial palindromic_from_trace(const IntPolynomial& q);

struct CompanionNormalization {
  ToralMatrix B;  // L^{-1} A L, the companion matrix of P_A
  IntMatrix L;    // columns n, An, ..., A^{N-1} n
  Int det_L;
};

CompanionNormalization companion_normalize(const ToralMatrix& a, const IntVector& n);

struct LatticeRank {
  bool maximal;
  Int det;
};

// det[n, A^l n, ..., A^{(N-1)l} n]
LatticeRank lattice_rank_check(const ToralMatrix& a, const IntVector& n, long l);

struct PowerIrreducibility {
  long l;
  bool irreducible;
  IntPolynomial char_poly;
};

std::vector<PowerIrreducibility> power_irreducibility_check(const ToralMatrix& a, long l_max);

}  // namespace tpa::lattice
