#pragma once

#include "tpa/linearization/plane_map.hpp"

namespace tpa::linearization {

// Odd-symmetric polynomial smoothstep: psi = 0 for x <= eps, 1 for x >= 1 - eps,
// C^order at the joins. psi(1 - x) = 1 - psi(x).
struct BumpProfile {
  double eps = 0.125;
  int order = 3;

  double operator()(double x) const;
  double derivative(double x) const;
  // max_{k <= r} sup |psi^(k)|, from the explicit polynomial.
  double cr_norm(int r) const;
};

struct ConjugacyOptions {
  double eps_bump = 0.125;
  int r = 3;
  double commute_tol = 1e-9;
  int audit_grid = 64;          // audit_grid x audit_grid points on [0,1)^2
  double growth_radius = 1e3;   // log-growth audit on |z| <= growth_radius
  int growth_rings = 16;
  int growth_angles = 16;
};

struct ConjugacyBundle {
  PlaneMap h;  // h.fwd = h, h.inv = h^{-1}
  BumpProfile bump;
  double bump_cr_norm = 0;
  bool identity = false;

  P2 eta(P2 z) const { return h.fwd(z) - z; }

  // Audits.
  double h_at_zero = 0;           // |h(0)|
  double residual_p1 = 0;         // max |h^{-1} P1 h (z) - z - (1,0)| on the grid
  double residual_p2 = 0;         // same for P2 and (0,1)
  double inverse_residual = 0;    // max |h^{-1} h (z) - z| on the grid
  double eta_sup_grid = 0;        // max |eta| on the grid
  double growth_constant = 0;     // max |eta(z)| / (log+|z| + 1) over the growth sample
  double growth_max_eta = 0;
};

// h with h^{-1} P1 h = R_(1,0) and h^{-1} P2 h = R_(0,1), h(0) = 0, built by
// gluing a bump-interpolated fundamental domain along the P1 orbit, then
// repeating the construction for the induced cylinder map in y.
// Throws InvalidInput if P1, P2 do not commute or the displacement is too
// large for the glued map to be invertible.
ConjugacyBundle fundamental_conjugacy(const PlaneMap& p1, const PlaneMap& p2, const ConjugacyOptions& opt = {});

}  // namespace tpa::linearization
