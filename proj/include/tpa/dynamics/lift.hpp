#pragma once

#include <memory>

#include "tpa/dynamics/frame.hpp"
#include "tpa/dynamics/perturbation.hpp"
#include "tpa/lattice/int_matrix.hpp"

namespace tpa::dynamics {

struct InverseOptions {
  int max_iter = 50;
  double tol = 1e-12;  // on |F(x) - y|_inf, scaled by max(1, |y|_inf)
};

// The lift F of a perturbed toral automorphism. Immutable; evaluation is pure.
// The perturbation is called phi throughout (the text also uses psi for it).
class TorusMapLift {
 public:
  TorusMapLift(lattice::ToralMatrix a, PerturbationSpec phi);
  TorusMapLift(lattice::ToralMatrix a, std::shared_ptr<const SplittingFrame> frame, PerturbationSpec phi);

  int dim() const { return frame_->dim(); }
  const lattice::ToralMatrix& matrix() const { return a_; }
  const SplittingFrame& frame() const { return *frame_; }
  std::shared_ptr<const SplittingFrame> frame_ptr() const { return frame_; }
  const PerturbationSpec& perturbation() const { return phi_; }
  bool is_linear() const { return phi_.empty(); }
  // Analytic C^1 bound of F - A in the adapted norm.
  double kappa() const { return kappa_; }

  Vec F(const Vec& x) const;
  Mat DF(const Vec& x) const;
  Vec F_inv(const Vec& y, const InverseOptions& opt = {}) const;
  Mat DF_inv(const Vec& y) const;  // derivative of F^{-1} at y
  // F(x + d) - F(x), accurate for tiny d (deviation dynamics along an orbit).
  Vec dF(const Vec& x, const Vec& d) const;
  // The e with F(x + e) - F(x) = d, i.e. F^{-1}(F(x) + d) - x.
  Vec dF_inv(const Vec& x, const Vec& d) const;
  // x mod Z^N in [0, 1)^N. F commutes with it up to the lattice action.
  static Vec reduce(const Vec& x);
  // F(x) - Ax.
  Vec phi(const Vec& x) const { return F(x) - frame_->A() * x; }

  // The conjugacy H = id + xi of the conjugate kind; identity otherwise.
  Vec H(const Vec& x) const;
  Vec H_inv(const Vec& y) const;

 private:
  lattice::ToralMatrix a_;
  std::shared_ptr<const SplittingFrame> frame_;
  PerturbationSpec phi_;
  double kappa_ = 0;
};

// sum over modes of 2 pi |amp|_ad |m|_*: Lipschitz bound of the trigonometric
// sum in the adapted norm of the frame.
double trig_lipschitz(const PerturbationSpec& p, const SplittingFrame& frame);

// Analytic C^1 size of F - A (kappa budget used downstream).
double estimate_kappa(const TorusMapLift& map);

// G = L^{-1} F L. The transported perturbation is again a trigonometric sum
// with frequencies L^t m and amplitudes L^{-1} amp, so periodicity is exact.
// Requires B = L^{-1} A L to be an integer matrix.
TorusMapLift transport_map(const TorusMapLift& map, const lattice::IntMatrix& L);

}  // namespace tpa::dynamics
