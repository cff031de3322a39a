#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpa/lattice/cyclotomic.hpp"
#include "tpa/lattice/factor.hpp"
#include "tpa/lattice/int_matrix.hpp"
#include "tpa/lattice/sturm.hpp"
#include "tpa/lattice/trace.hpp"

namespace tpa::lattice {

struct SpectralClassification {
  bool ergodic = false;
  bool anosov = false;
  bool pseudo_anosov = false;
  int center_dim = 0;
  IntPolynomial char_poly;
  bool palindromic = false;
  int unit_circle_pairs = 0;

  // Eigenvalue counts by modulus (< 1, > 1), from polished numerical roots.
  int stable_dim = 0;
  int unstable_dim = 0;

  // Certificates.
  bool irreducible = false;
  IrreducibilityCertificate irreducibility;
  std::optional<PowerForm> power;
  std::vector<CyclotomicFactor> cyclotomic;
  std::optional<IntPolynomial> trace_q;
  std::optional<TraceIntervalCount> trace_count;
  // "trace-sturm" (palindromic P), "numerical" (no root within tolerance of the
  // circle beyond the cyclotomic ones), "factor-sturm" (exact per-factor fallback).
  std::string center_route;
  double closest_noncyclotomic_modulus_gap = 0.0;
};

inline constexpr double kUnitModulusTolerance = 1e-9;

SpectralClassification classify(const ToralMatrix& a);
SpectralClassification classify_polynomial(const IntPolynomial& p);

}  // namespace tpa::lattice
