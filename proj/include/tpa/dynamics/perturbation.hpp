#pragma once

#include <string>
#include <vector>

#include "tpa/dynamics/linalg.hpp"

namespace tpa::dynamics {

struct Mode {
  std::vector<long> m;  // integer frequency
  Vec amp;
  double phase = 0;
};

// additive:  F = A + phi with phi(x) = sum amp sin(2 pi m.x + phase).
// conjugate: F = H A H^{-1} with H = id + xi and xi given by the modes; F - A
//            is periodic but not a finite trigonometric sum. Used where an
//            exact answer is known: W^sigma(x) = H(H^{-1}x + E^sigma).
enum class PerturbationKind { additive, conjugate };

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::additive;
  std::vector<Mode> modes;

  bool empty() const { return modes.empty(); }
  // The trigonometric sum itself (phi for additive, xi for conjugate).
  Vec eval(const Vec& x) const;
  Mat jacobian(const Vec& x) const;
  // eval(x + d) - eval(x) without cancellation for small d.
  Vec eval_delta(const Vec& x, const Vec& d) const;
  // sum |amp|_2 (2 pi |m|_2)^r
  double cr_bound(int r) const;
  PerturbationSpec scaled(double factor) const;
};

// "zero", "single", "double" (additive) and "conjugate". All modes have
// phase 0 so the origin stays fixed, and amplitudes are set so that the
// C^1 bound of the trigonometric sum equals eps.
PerturbationSpec perturbation_preset(const std::string& name, int dim, double eps);
std::vector<std::string> perturbation_preset_names();

}  // namespace tpa::dynamics
