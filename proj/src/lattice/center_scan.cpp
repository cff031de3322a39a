#include "tpa/lattice/center_scan.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "tpa/dynamics/frame.hpp"
#include "tpa/errors.hpp"
#include "tpa/lattice/classify.hpp"
#include "tpa/simd/kernels.hpp"

namespace tpa::lattice {

namespace {

using ld = long double;

struct Scan {
  int N = 0;
  long R = 0;
  ld expo = 0;
  std::vector<ld> c0, c1;  // the two center rows of T^{-1}
  ld best = std::numeric_limits<ld>::infinity();
  ld best_cn = 0;
  std::vector<long> best_n;
  long checked = 0;

  void consider(const std::vector<long>& n) {
    long l1 = 0;
    for (long v : n) l1 += std::labs(v);
    if (l1 == 0 || l1 > R) return;
    ++checked;
    ld y0 = 0, y1 = 0;
    for (int i = 0; i < N; ++i) {
      y0 += c0[static_cast<size_t>(i)] * n[static_cast<size_t>(i)];
      y1 += c1[static_cast<size_t>(i)] * n[static_cast<size_t>(i)];
    }
    ld cn = std::sqrt(y0 * y0 + y1 * y1);
    ld v = cn * std::pow(static_cast<ld>(l1), expo);
    std::vector<long> canon = n;
    for (long x : canon) {
      if (x == 0) continue;
      if (x < 0)
        for (auto& y : canon) y = -y;
      break;
    }
    if (v < best || (v == best && canon < best_n)) {
      best = v;
      best_cn = cn;
      best_n = std::move(canon);
    }
  }

  // Every n with |n|_1 <= radius (radius <= R).
  void brute(long radius) {
    std::vector<long> n(static_cast<size_t>(N), 0);
    auto rec = [&](auto&& self, int i, long left) -> void {
      if (i == N) {
        consider(n);
        return;
      }
      for (long v = -left; v <= left; ++v) {
        n[static_cast<size_t>(i)] = v;
        self(self, i + 1, left - std::labs(v));
      }
      n[static_cast<size_t>(i)] = 0;
    };
    rec(rec, 0, radius);
  }
};

// Number of integer points in the l1 ball of the given radius in dimension n.
double l1_ball_size(int n, long r) {
  double total = 0;
  for (int k = 0; k <= n && k <= r; ++k) {
    double binom_nk = 1, binom_rk = 1;
    for (int i = 0; i < k; ++i) {
      binom_nk = binom_nk * (n - i) / (i + 1);
      binom_rk = binom_rk * static_cast<double>(r - i) / (i + 1);
    }
    total += std::ldexp(binom_nk * binom_rk, k);
  }
  return total;
}

CenterScanResult finish(const Scan& s, double r, double delta, long radius) {
  CenterScanResult out;
  out.c_estimate = static_cast<double>(s.best);
  out.argmin = s.best_n;
  out.center_norm = static_cast<double>(s.best_cn);
  out.r = r;
  out.delta = delta;
  out.radius = radius;
  out.candidates_checked = s.checked;
  return out;
}

Scan setup(const dynamics::SplittingFrame& frame, long radius, double delta, std::optional<double> r, double& r_used) {
  if (frame.c_dim() != 2) throw InvalidInput("center_projection_scan needs a two-dimensional center");
  if (radius < 1) throw InvalidInput("radius must be >= 1");
  if (!(delta > 0)) throw InvalidInput("delta must be positive");
  Scan s;
  s.N = frame.dim();
  s.R = radius;
  r_used = r ? *r : s.N / 2.0 - 1.0;
  s.expo = static_cast<ld>(r_used) + static_cast<ld>(delta);
  const int row = frame.s_dim() + frame.u_dim();
  for (int i = 0; i < s.N; ++i) {
    s.c0.push_back(frame.T_inv()(row, i));
    s.c1.push_back(frame.T_inv()(row + 1, i));
  }
  return s;
}

}  // namespace

CenterScanResult center_projection_scan_bruteforce(const dynamics::SplittingFrame& frame, long radius, double delta,
                                                   std::optional<double> r) {
  double r_used = 0;
  Scan s = setup(frame, radius, delta, r, r_used);
  s.brute(radius);
  return finish(s, r_used, delta, radius);
}

CenterScanResult center_projection_scan(const ToralMatrix& a, long radius, double delta, std::optional<double> r) {
  if (!classify(a).pseudo_anosov) throw InvalidInput("center_projection_scan needs a pseudo-Anosov matrix");
  return center_projection_scan(dynamics::build_splitting(a), radius, delta, r);
}

CenterScanResult center_projection_scan(const dynamics::SplittingFrame& frame, long radius, double delta,
                                        std::optional<double> r) {
  double r_used = 0;
  Scan s = setup(frame, radius, delta, r, r_used);
  const int N = s.N;

  // Seed the bound exhaustively on a small ball.
  long seed = 1;
  while (seed < radius && l1_ball_size(N, seed + 1) <= 2e5) ++seed;
  s.brute(std::min(seed, radius));
  if (seed >= radius) return finish(s, r_used, delta, radius);

  // Inner pair: the best-conditioned 2x2 minor of the center rows.
  int pi = 0, pj = 1;
  double best_det = -1;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      double d = std::fabs(static_cast<double>(s.c0[static_cast<size_t>(i)] * s.c1[static_cast<size_t>(j)] -
                                               s.c0[static_cast<size_t>(j)] * s.c1[static_cast<size_t>(i)]));
      if (d > best_det) {
        best_det = d;
        pi = i;
        pj = j;
      }
    }
  std::vector<int> outer;
  for (int i = 0; i < N; ++i)
    if (i != pi && i != pj) outer.push_back(i);

  auto col = [&](int i) {
    return std::array<double, 2>{static_cast<double>(s.c0[static_cast<size_t>(i)]),
                                 static_cast<double>(s.c1[static_cast<size_t>(i)])};
  };
  // Lagrange-reduce the inner lattice, tracking the unimodular change U.
  std::array<double, 2> u = col(pi), v = col(pj);
  long U[2][2] = {{1, 0}, {0, 1}};  // columns: coefficients of u and v in (e_pi, e_pj)
  auto dot = [](const std::array<double, 2>& a, const std::array<double, 2>& b) { return a[0] * b[0] + a[1] * b[1]; };
  for (int it = 0; it < 200; ++it) {
    if (dot(u, u) > dot(v, v)) {
      std::swap(u, v);
      std::swap(U[0][0], U[0][1]);
      std::swap(U[1][0], U[1][1]);
    }
    double m = std::nearbyint(dot(u, v) / dot(u, u));
    if (m == 0) break;
    long mi = static_cast<long>(m);
    v = {v[0] - m * u[0], v[1] - m * u[1]};
    U[0][1] -= mi * U[0][0];
    U[1][1] -= mi * U[1][0];
  }
  const double b1sq = dot(u, u);
  const double mu = dot(u, v) / b1sq;
  const std::array<double, 2> b2s = {v[0] - mu * u[0], v[1] - mu * u[1]};
  const double b2ssq = dot(b2s, b2s);
  const double det = u[0] * v[1] - u[1] * v[0];
  // tau = [u v]^{-1} t
  auto to_tau = [&](double t0, double t1) {
    return std::array<double, 2>{(v[1] * t0 - v[0] * t1) / det, (-u[1] * t0 + u[0] * t1) / det};
  };

  simd::LatticeScreen scr{};
  scr.mu = mu;
  scr.b1_sq = b1sq;
  scr.b2s_sq = b2ssq;
  scr.inv_b2s = 1.0 / std::sqrt(b2ssq);

  std::vector<double> rho_tab(static_cast<size_t>(radius) + 2);
  ld tab_for = -1;
  auto rebuild = [&]() {
    tab_for = s.best;
    const double b = static_cast<double>(s.best) * (1 + 1e-9);
    for (size_t k = 0; k < rho_tab.size(); ++k)
      rho_tab[k] = b / std::pow(std::max<double>(1.0, static_cast<double>(k)), static_cast<double>(s.expo)) + 1e-10;
  };
  rebuild();

  std::vector<long> n(static_cast<size_t>(N), 0);
  std::vector<std::uint32_t> hits(static_cast<size_t>(radius) + 2);

  // Exact 2-D enumeration of lattice points within rho of the target tau.
  auto enumerate = [&](double tau1, double tau2, double rho) {
    const double w2 = rho * scr.inv_b2s;
    for (long k2 = static_cast<long>(std::ceil(tau2 - w2)); k2 <= static_cast<long>(std::floor(tau2 + w2)); ++k2) {
      const double e2 = static_cast<double>(k2) - tau2;
      const double rem = rho * rho - e2 * e2 * b2ssq;
      if (rem < 0) continue;
      const double c = tau1 - mu * e2, w1 = std::sqrt(rem / b1sq);
      for (long k1 = static_cast<long>(std::ceil(c - w1)); k1 <= static_cast<long>(std::floor(c + w1)); ++k1) {
        n[static_cast<size_t>(pi)] = U[0][0] * k1 + U[0][1] * k2;
        n[static_cast<size_t>(pj)] = U[1][0] * k1 + U[1][1] * k2;
        s.consider(n);
      }
    }
    n[static_cast<size_t>(pi)] = 0;
    n[static_cast<size_t>(pj)] = 0;
  };

  if (outer.empty()) {
    enumerate(0.0, 0.0, rho_tab[1]);
    return finish(s, r_used, delta, radius);
  }

  const int last = outer.back();
  const auto clast = col(last);
  const auto dtau = to_tau(-clast[0], -clast[1]);

  auto row = [&](long base1) {
    const long rem = radius - base1;
    double t0 = 0, t1 = 0;
    for (int i : outer) {
      t0 -= static_cast<double>(s.c0[static_cast<size_t>(i)]) * static_cast<double>(n[static_cast<size_t>(i)]);
      t1 -= static_cast<double>(s.c1[static_cast<size_t>(i)]) * static_cast<double>(n[static_cast<size_t>(i)]);
    }
    const auto tau0 = to_tau(t0, t1);
    for (int dir : {1, -1}) {
      const long start = dir > 0 ? 0 : 1;
      const long count = rem + 1 - start;
      if (count <= 0) continue;
      scr.tau1_0 = tau0[0] + dir * start * dtau[0];
      scr.tau2_0 = tau0[1] + dir * start * dtau[1];
      scr.dtau1 = dir * dtau[0];
      scr.dtau2 = dir * dtau[1];
      const double* rho = rho_tab.data() + base1 + start;
      size_t k = simd::lattice_screen(scr, rho, static_cast<size_t>(count), hits.data());
      for (size_t h = 0; h < k; ++h) {
        const long j = hits[h];
        n[static_cast<size_t>(last)] = dir * (start + j);
        const double jd = static_cast<double>(j);
        enumerate(scr.tau1_0 + jd * scr.dtau1, scr.tau2_0 + jd * scr.dtau2, rho[j]);
      }
      n[static_cast<size_t>(last)] = 0;
    }
    if (s.best < tab_for) rebuild();
  };

  auto prefix = [&](auto&& self, size_t idx, long used) -> void {
    if (idx + 1 == outer.size()) {
      row(used);
      return;
    }
    const int coord = outer[idx];
    const long left = radius - used;
    for (long val = -left; val <= left; ++val) {
      n[static_cast<size_t>(coord)] = val;
      self(self, idx + 1, used + std::labs(val));
    }
    n[static_cast<size_t>(coord)] = 0;
  };
  prefix(prefix, 0, 0);
  return finish(s, r_used, delta, radius);
}

}  // namespace tpa::lattice
