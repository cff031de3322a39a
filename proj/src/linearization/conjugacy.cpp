#include "tpa/linearization/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "tpa/errors.hpp"

namespace tpa::linearization {

namespace {

// S(t) = t^{m+1} sum_{k<=m} C(m+k, k) (1-t)^k, expanded into monomials.
std::vector<double> smoothstep_coeffs(int m) {
  std::vector<double> c(static_cast<size_t>(2 * m + 2), 0.0);
  for (int k = 0; k <= m; ++k) {
    double binom = 1;
    for (int i = 1; i <= k; ++i) binom = binom * (m + i) / i;
    // (1-t)^k = sum_i C(k,i) (-1)^i t^i
    double bki = 1;
    for (int i = 0; i <= k; ++i) {
      c[static_cast<size_t>(m + 1 + i)] += binom * bki * ((i % 2) ? -1 : 1);
      bki = bki * (k - i) / (i + 1);
    }
  }
  return c;
}

double poly_eval(const std::vector<double>& c, double t, int deriv) {
  double s = 0;
  for (size_t i = c.size(); i-- > static_cast<size_t>(deriv);) {
    double f = c[i];
    for (int d = 0; d < deriv; ++d) f *= static_cast<double>(i - static_cast<size_t>(d));
    s = s * t + f;
  }
  return s;
}

long floor_l(double x) { return static_cast<long>(std::floor(x)); }

struct Glue {
  // One direction of the construction: axis 0 glues along x with P, axis 1 along y.
  int axis;
  BumpProfile psi;
  PlaneMap p;   // the map translating by e_axis (approximately)
  P2 e;

  P2 phi(P2 z) const { return p.fwd(z) - z - e; }
  P2 h1(P2 z) const { return z + psi(z[static_cast<size_t>(axis)]) * phi(z); }
  P2 h1_inv(P2 q) const {
    P2 u = q;
    for (int it = 0; it < 200; ++it) {
      const P2 next = q - psi(u[static_cast<size_t>(axis)]) * phi(u);
      const double d = norm(next - u);
      u = next;
      if (d <= 1e-16 * (1 + norm(u))) break;
    }
    return u;
  }
  P2 fwd(P2 z) const {
    const long k = floor_l(z[static_cast<size_t>(axis)]);
    P2 w = z;
    w[static_cast<size_t>(axis)] -= static_cast<double>(k);
    return p.iterate(h1(w), k);
  }
  P2 inv(P2 w) const {
    long k = floor_l(w[static_cast<size_t>(axis)]);
    P2 q = p.iterate(w, -k);
    for (int tries = 0; tries < 64; ++tries) {
      const P2 u = h1_inv(q);
      // The glued map agrees with h1 on (-eps, 1 + eps), so any u in a slightly
      // widened unit interval is a valid preimage; this stops boundary flip-flop.
      const double c = u[static_cast<size_t>(axis)], slack = psi.eps / 4;
      if (c < -slack) {
        --k;
        q = p.fwd(q);
      } else if (c >= 1 + slack) {
        ++k;
        q = p.inv(q);
      } else {
        P2 out = u;
        out[static_cast<size_t>(axis)] += static_cast<double>(k);
        return out;
      }
    }
    throw NumericalFailure("fundamental_conjugacy: fundamental domain search did not settle");
  }
};

}  // namespace

double BumpProfile::operator()(double x) const {
  if (x <= eps) return 0;
  if (x >= 1 - eps) return 1;
  static thread_local int cached = -1;
  static thread_local std::vector<double> c;
  if (cached != order) {
    c = smoothstep_coeffs(order);
    cached = order;
  }
  return poly_eval(c, (x - eps) / (1 - 2 * eps), 0);
}

double BumpProfile::derivative(double x) const {
  if (x <= eps || x >= 1 - eps) return 0;
  const auto c = smoothstep_coeffs(order);
  return poly_eval(c, (x - eps) / (1 - 2 * eps), 1) / (1 - 2 * eps);
}

double BumpProfile::cr_norm(int r) const {
  const auto c = smoothstep_coeffs(order);
  double best = 1;
  for (int k = 1; k <= r; ++k) {
    double sup = 0;
    for (int i = 0; i <= 4096; ++i) sup = std::max(sup, std::fabs(poly_eval(c, i / 4096.0, k)));
    best = std::max(best, sup / std::pow(1 - 2 * eps, k));
  }
  return best;
}

ConjugacyBundle fundamental_conjugacy(const PlaneMap& p1, const PlaneMap& p2, const ConjugacyOptions& opt) {
  if (!(opt.eps_bump > 0 && opt.eps_bump < 0.25)) throw InvalidInput("fundamental_conjugacy: eps_bump must lie in (0, 1/4)");
  if (opt.r < 1) throw InvalidInput("fundamental_conjugacy: r must be >= 1");
  ConjugacyBundle b;
  b.bump = BumpProfile{opt.eps_bump, opt.r};
  b.bump_cr_norm = b.bump.cr_norm(opt.r);

  if (p1.translation && p2.translation) {
    const P2 t1 = *p1.translation, t2 = *p2.translation;
    if (!(t1 == P2{1, 0} && t2 == P2{0, 1}))
      throw InvalidInput("fundamental_conjugacy: translations must be by (1,0) and (0,1)");
    b.identity = true;
    b.h.fwd = [](P2 z) { return z; };
    b.h.inv = [](P2 z) { return z; };
    b.h.translation = P2{0, 0};
    return b;
  }

  // Commutation and smallness checks on the unit square.
  double comm = 0, lip = 0;
  const int g = 16;
  const double step = 1e-6;
  const double psi1 = b.bump.cr_norm(1);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      const P2 z{(i + 0.5) / g, (j + 0.5) / g};
      comm = std::max(comm, norm(p1.fwd(p2.fwd(z)) - p2.fwd(p1.fwd(z))));
      for (const auto* p : {&p1, &p2}) {
        const P2 e = p == &p1 ? P2{1, 0} : P2{0, 1};
        auto phi = [&](P2 w) { return p->fwd(w) - w - e; };
        const P2 dx = (1 / (2 * step)) * (phi(z + P2{step, 0}) - phi(z - P2{step, 0}));
        const P2 dy = (1 / (2 * step)) * (phi(z + P2{0, step}) - phi(z - P2{0, step}));
        const double bound = std::fabs(dx[0]) + std::fabs(dx[1]) + std::fabs(dy[0]) + std::fabs(dy[1]) +
                             psi1 * norm(phi(z));
        lip = std::max(lip, bound);
      }
    }
  if (comm > opt.commute_tol) throw InvalidInput("fundamental_conjugacy: P1 and P2 do not commute");
  if (lip >= 0.5) throw InvalidInput("fundamental_conjugacy: displacement too large for an invertible glue");

  auto hat = std::make_shared<Glue>(Glue{0, b.bump, p1, {1, 0}});
  // P2' = hat^{-1} P2 hat, a map of the cylinder commuting with R_(1,0).
  PlaneMap p2p;
  p2p.fwd = [hat, p2](P2 z) { return hat->inv(p2.fwd(hat->fwd(z))); };
  p2p.inv = [hat, p2](P2 z) { return hat->inv(p2.inv(hat->fwd(z))); };
  auto prime = std::make_shared<Glue>(Glue{1, b.bump, p2p, {0, 1}});

  // h = hat o h', and hat o P2'^k = P2^k o hat avoids repeated round trips.
  b.h.fwd = [hat, prime, p2](P2 z) {
    const long k = floor_l(z[1]);
    const P2 w{z[0], z[1] - static_cast<double>(k)};
    return p2.iterate(hat->fwd(prime->h1(w)), k);
  };
  b.h.inv = [hat, prime, p2](P2 w) {
    long k = floor_l(hat->inv(w)[1]);
    P2 q = hat->inv(p2.iterate(w, -k));
    for (int tries = 0; tries < 64; ++tries) {
      const P2 u = prime->h1_inv(q);
      const double slack = prime->psi.eps / 4;
      if (u[1] < -slack) {
        --k;
        q = hat->inv(p2.iterate(w, -k));
      } else if (u[1] >= 1 + slack) {
        ++k;
        q = hat->inv(p2.iterate(w, -k));
      } else {
        return P2{u[0], u[1] + static_cast<double>(k)};
      }
    }
    throw NumericalFailure("fundamental_conjugacy: fundamental domain search did not settle");
  };

  // Audits.
  b.h_at_zero = norm(b.h.fwd({0, 0}));
  const int n = opt.audit_grid;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const P2 z{static_cast<double>(i) / n, static_cast<double>(j) / n};
      const P2 hz = b.h.fwd(z);
      b.residual_p1 = std::max(b.residual_p1, norm(b.h.inv(p1.fwd(hz)) - (z + P2{1, 0})));
      b.residual_p2 = std::max(b.residual_p2, norm(b.h.inv(p2.fwd(hz)) - (z + P2{0, 1})));
      b.inverse_residual = std::max(b.inverse_residual, norm(b.h.inv(hz) - z));
      b.eta_sup_grid = std::max(b.eta_sup_grid, norm(hz - z));
    }
  for (int ring = 0; ring < opt.growth_rings; ++ring) {
    const double rad = std::pow(opt.growth_radius, static_cast<double>(ring) / std::max(1, opt.growth_rings - 1));
    for (int a = 0; a < opt.growth_angles; ++a) {
      const double t = 2 * std::numbers::pi * (a + 0.5) / opt.growth_angles;
      const P2 z{rad * std::cos(t), rad * std::sin(t)};
      const double e = norm(b.eta(z));
      b.growth_max_eta = std::max(b.growth_max_eta, e);
      b.growth_constant = std::max(b.growth_constant, e / (std::max(0.0, std::log(norm(z))) + 1));
    }
  }
  return b;
}

}  // namespace tpa::linearization
