#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace tpa::linearization {

struct FourierCoeff {
  std::array<long, 2> j{0, 0};
  std::vector<std::complex<double>> value;  // one entry per component
};

// Finite Fourier table of a real, zero-mean field on T^2. Both j and -j are
// stored; real-valuedness means value(-j) = conj(value(j)).
struct SmallDivisorField {
  int components = 1;
  std::vector<FourierCoeff> modes;

  // Adds the conjugate partner of every mode; rejects j = 0.
  static SmallDivisorField from_half(int components, const std::vector<FourierCoeff>& half);
  // Random field with the given number of independent modes, |j|_1 <= max_j.
  static SmallDivisorField random(int components, int half_modes, long max_j, std::uint64_t seed);

  bool real_valued(double tol = 0) const;
  std::vector<double> eval(std::array<double, 2> x) const;
  // |u|_r = sum_j |u_j| |j|_1^r  (|u_j| Euclidean over components)
  double norm(double r) const;
  long max_j() const;
};

// Symbol of the Moser operator: mu_j = 4 [sin^2(pi alpha1.j) + sin^2(pi alpha2.j)].
std::vector<double> divisor_symbols(std::array<double, 2> alpha1, std::array<double, 2> alpha2,
                                    const SmallDivisorField& field);

SmallDivisorField apply_divisor_operator(std::array<double, 2> alpha1, std::array<double, 2> alpha2,
                                         const SmallDivisorField& u);

inline constexpr double kTameSigma = 4.0 + 1.0 / 30.0;

struct SmallDivisorResult {
  SmallDivisorField u;
  double mu_min = 0;
  double divisor_floor = 0;  // min mu_j |j|_1^2 over the support
  double sigma = kTameSigma;
  double r = 0;
  double u_norm_r = 0;             // |u|_r
  double v_norm_sigma_plus_r = 0;  // |v|_{sigma + r}
  double tame_ratio = 0;           // |u|_r / |v|_{sigma + r}
};

// u = M^{-1} v coefficientwise. Throws NumericalFailure when some mu_j < guard
// (a resonance inside the support).
SmallDivisorResult small_divisor_solve(std::array<double, 2> alpha1, std::array<double, 2> alpha2,
                                       const SmallDivisorField& v, double r, double guard = 1e-13);

}  // namespace tpa::linearization
