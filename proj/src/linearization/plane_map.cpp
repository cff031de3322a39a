#include "tpa/linearization/plane_map.hpp"

#include <cmath>
#include <numbers>

#include "tpa/errors.hpp"

namespace tpa::linearization {

double norm(P2 a) { return std::hypot(a[0], a[1]); }

P2 PlaneMap::iterate(P2 z, long k) const {
  if (translation) {
    const double kd = static_cast<double>(k);
    return {z[0] + kd * (*translation)[0], z[1] + kd * (*translation)[1]};
  }
  for (; k > 0; --k) z = fwd(z);
  for (; k < 0; ++k) z = inv(z);
  return z;
}

P2 eval_modes(const std::vector<PlaneMode>& modes, P2 z) {
  P2 out{0, 0};
  for (const auto& m : modes) {
    const double s = std::sin(2 * std::numbers::pi * (m.k[0] * z[0] + m.k[1] * z[1]) + m.phase);
    out[0] += m.amp[0] * s;
    out[1] += m.amp[1] * s;
  }
  return out;
}

std::array<P2, 2> jacobian_modes(const std::vector<PlaneMode>& modes, P2 z) {
  std::array<P2, 2> j{P2{0, 0}, P2{0, 0}};
  for (const auto& m : modes) {
    const double c = 2 * std::numbers::pi * std::cos(2 * std::numbers::pi * (m.k[0] * z[0] + m.k[1] * z[1]) + m.phase);
    for (int i = 0; i < 2; ++i)
      for (int l = 0; l < 2; ++l) j[static_cast<size_t>(i)][static_cast<size_t>(l)] += m.amp[static_cast<size_t>(i)] * c * static_cast<double>(m.k[static_cast<size_t>(l)]);
  }
  return j;
}

double c1_bound(const std::vector<PlaneMode>& modes) {
  double s = 0;
  for (const auto& m : modes)
    s += norm(m.amp) * 2 * std::numbers::pi * std::hypot(static_cast<double>(m.k[0]), static_cast<double>(m.k[1]));
  return s;
}

PlaneMap translation_map(P2 t) {
  PlaneMap p;
  p.fwd = [t](P2 z) { return z + t; };
  p.inv = [t](P2 z) { return z - t; };
  p.translation = t;
  return p;
}

PlaneMap perturbed_translation(P2 t, std::vector<PlaneMode> modes) {
  if (modes.empty()) return translation_map(t);
  if (c1_bound(modes) >= 1) throw InvalidInput("perturbed_translation: modes too large to invert");
  PlaneMap p;
  p.fwd = [t, modes](P2 z) { return z + t + eval_modes(modes, z); };
  p.inv = [t, modes](P2 y) {
    // Solve u + phi(u) = y - t by Newton from the fixed-point guess.
    const P2 target = y - t;
    P2 u = target - eval_modes(modes, target);
    for (int it = 0; it < 60; ++it) {
      const P2 r = u + eval_modes(modes, u) - target;
      const auto J = jacobian_modes(modes, u);
      const double a = 1 + J[0][0], b = J[0][1], c = J[1][0], d = 1 + J[1][1];
      const double det = a * d - b * c;
      const P2 du{(d * r[0] - b * r[1]) / det, (-c * r[0] + a * r[1]) / det};
      u = u - du;
      if (std::fabs(du[0]) + std::fabs(du[1]) <= 1e-16 * (1 + std::fabs(u[0]) + std::fabs(u[1]))) break;
    }
    return u;
  };
  return p;
}

PlaneMap compose(const PlaneMap& a, const PlaneMap& b) {
  PlaneMap p;
  p.fwd = [a, b](P2 z) { return a.fwd(b.fwd(z)); };
  p.inv = [a, b](P2 z) { return b.inv(a.inv(z)); };
  if (a.translation && b.translation) p.translation = *a.translation + *b.translation;
  return p;
}

PlaneMap inverse(const PlaneMap& a) {
  PlaneMap p;
  p.fwd = a.inv;
  p.inv = a.fwd;
  if (a.translation) p.translation = P2{-(*a.translation)[0], -(*a.translation)[1]};
  return p;
}

PlaneMap conjugate(const PlaneMap& p, const PlaneMap& g) { return compose(g, compose(p, inverse(g))); }

}  // namespace tpa::linearization
