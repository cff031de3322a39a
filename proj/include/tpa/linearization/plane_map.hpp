#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace tpa::linearization {

using P2 = std::array<double, 2>;

inline P2 operator+(P2 a, P2 b) { return {a[0] + b[0], a[1] + b[1]}; }
inline P2 operator-(P2 a, P2 b) { return {a[0] - b[0], a[1] - b[1]}; }
inline P2 operator*(double s, P2 a) { return {s * a[0], s * a[1]}; }
double norm(P2 a);

// A diffeomorphism of the plane with its inverse. translation is set only
// when the map is exactly z -> z + t.
struct PlaneMap {
  std::function<P2(P2)> fwd;
  std::function<P2(P2)> inv;
  std::optional<P2> translation;

  P2 operator()(P2 z) const { return fwd(z); }
  // k-th iterate, k of either sign.
  P2 iterate(P2 z, long k) const;
};

// amp * sin(2 pi k.z + phase); sums of these are Z^2-periodic.
struct PlaneMode {
  std::array<long, 2> k;
  P2 amp;
  double phase = 0;
};

P2 eval_modes(const std::vector<PlaneMode>& modes, P2 z);
// Jacobian as {d/dx, d/dy} columns: J[i][j] = d out_i / d z_j.
std::array<P2, 2> jacobian_modes(const std::vector<PlaneMode>& modes, P2 z);
// sup |D(sum of modes)| bound: sum |amp| 2 pi |k|.
double c1_bound(const std::vector<PlaneMode>& modes);

PlaneMap translation_map(P2 t);
// z -> z + t + sum of modes. The inverse is Newton; requires c1_bound < 1.
PlaneMap perturbed_translation(P2 t, std::vector<PlaneMode> modes);
// a after b.
PlaneMap compose(const PlaneMap& a, const PlaneMap& b);
PlaneMap inverse(const PlaneMap& a);
// g o p o g^{-1}.
PlaneMap conjugate(const PlaneMap& p, const PlaneMap& g);

}  // namespace tpa::linearization
