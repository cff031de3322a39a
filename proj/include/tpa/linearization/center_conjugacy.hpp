#pragma once

#include <functional>

#include "tpa/holonomy/holonomy.hpp"

namespace tpa::linearization {

using dynamics::TorusMapLift;
using manifolds::ManifoldEvalConfig;

// A plane conjugacy on adapted center coordinates of W^c(0). The Moser
// iteration that would produce it is not implemented; it is supplied.
using CenterChart = std::function<Vec(const Vec&)>;

struct CenterConjugacyOptions {
  int lattice_points = 32;   // sampled n with |n|_inf <= lattice_radius for the conjugacy audit
  long lattice_radius = 5;
  int equivariance_checks = 32;
  int lipschitz_pairs = 64;
  double pair_box = 1.5;     // pairs drawn from [-pair_box, pair_box]^N
  int accessibility_points = 3;
  double accessibility_range = 0.5;
  unsigned long seed = 1;
  int workers = 1;
};

struct CenterConjugacyAudit {
  holonomy::AccessibilityReport accessibility;
  double conjugacy_residual = 0;     // max |h^c(F p) - A^c h^c(p)| over p = pi^su(n)
  double equivariance_residual = 0;  // max |h^c(x + n) - h^c(x) - n^c|
  double lip_min = 0, lip_max = 0;   // |H2(x) - H2(y)| / |x - y| over sampled pairs
  double C0 = 0;                     // max(lip_max, 1 / lip_min)
  double max_residual = 0;           // worst manifold residual met on the way
};

// H2(x) = x^s + x^u + h^c(x) with h^c = h2 o (j_0^c)^{-1} o pi^su.
class CenterConjugacy {
 public:
  // Runs the accessibility probe at the origin first; throws
  // PreconditionFailed unless the verdict is trivial-within-tolerance.
  CenterConjugacy(const TorusMapLift& map, CenterChart h2, const ManifoldEvalConfig& cfg = {},
                  const CenterConjugacyOptions& opt = {});

  Vec hc(const Vec& x) const;  // adapted center coordinates
  Vec H2(const Vec& x) const;  // in R^N
  const holonomy::AccessibilityReport& accessibility() const { return access_; }

  CenterConjugacyAudit audit() const;

 private:
  const TorusMapLift* map_;
  CenterChart h2_;
  ManifoldEvalConfig cfg_;
  CenterConjugacyOptions opt_;
  holonomy::AccessibilityReport access_;
};

// Identity chart (the right h2 for the unperturbed map).
CenterChart identity_chart();

// For a conjugate-kind map F = H A H^{-1}: h2(w) = (H^{-1}(j_0^c(w)))^c,
// which conjugates every T_n to the translation by n^c exactly.
CenterChart exact_chart(const TorusMapLift& map, const ManifoldEvalConfig& cfg = {});

}  // namespace tpa::linearization
