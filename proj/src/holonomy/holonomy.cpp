#include "tpa/holonomy/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "tpa/errors.hpp"
#include "tpa/util/parallel.hpp"

namespace tpa::holonomy {

using dynamics::Subspace;
using manifolds::GraphPoint;
using manifolds::IntersectionResult;
using manifolds::intersect;
using manifolds::manifold_point;

namespace {

Vec to_vec(const std::vector<long>& n) {
  Vec v(static_cast<int>(n.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = static_cast<double>(n[static_cast<size_t>(i)]);
  return v;
}

void check_n(const TorusMapLift& map, const std::vector<long>& n) {
  if (static_cast<int>(n.size()) != map.dim()) throw InvalidInput("lattice vector has the wrong dimension");
}

double log_plus(double t) { return t > 1 ? std::log(t) : 0.0; }

}  // namespace

SuProjection project_su(const TorusMapLift& map, const Vec& x, const ManifoldEvalConfig& cfg) {
  const Vec zero = Vec::Zero(map.dim());
  const IntersectionResult pu = intersect(map, Subspace::u, x, Subspace::cs, zero, cfg);
  const IntersectionResult ps = intersect(map, Subspace::s, pu.point, Subspace::cu, zero, cfg);
  SuProjection out;
  out.via = pu.point;
  out.point = ps.point;
  out.center = map.frame().coords(ps.point, Subspace::c);
  out.residual = std::max(pu.residual(), ps.residual());
  return out;
}

HolonomyValue holonomy_T(const TorusMapLift& map, const std::vector<long>& n, const Vec& z,
                         const ManifoldEvalConfig& cfg) {
  check_n(map, n);
  const auto& fr = map.frame();
  const GraphPoint q = manifold_point(map, Subspace::c, Vec::Zero(map.dim()), z, cfg);
  const SuProjection p = project_su(map, q.point + to_vec(n), cfg);
  HolonomyValue out;
  out.value = p.center;
  out.remainder = p.center - z - fr.coords(to_vec(n), Subspace::c);
  out.residual = std::max(q.residual, p.residual);
  return out;
}

Vec center_return(const TorusMapLift& map, const Vec& z, const ManifoldEvalConfig& cfg) {
  const GraphPoint q = manifold_point(map, Subspace::c, Vec::Zero(map.dim()), z, cfg);
  return project_su(map, map.F(q.point), cfg).center;
}

double group_law_defect(const TorusMapLift& map, const std::vector<long>& n, const std::vector<long>& m, const Vec& z,
                        const ManifoldEvalConfig& cfg) {
  check_n(map, n);
  check_n(map, m);
  std::vector<long> nm(n.size());
  for (size_t i = 0; i < n.size(); ++i) nm[i] = n[i] + m[i];
  const Vec a = holonomy_T(map, n, holonomy_T(map, m, z, cfg).value, cfg).value;
  const Vec b = holonomy_T(map, nm, z, cfg).value;
  return map.frame().coords_norm(a - b, Subspace::c);
}

DriftAudit drift_audit(const TorusMapLift& map, const DriftAuditOptions& opt, const ManifoldEvalConfig& cfg) {
  if (opt.radius < 1) throw InvalidInput("drift audit radius must be >= 1");
  const auto& fr = map.frame();
  const int N = map.dim(), c = fr.c_dim();
  if (c == 0) throw InvalidInput("drift audit needs a center direction");

  // Lattice vectors: the whole ball when small, else |n|_1 <= 1 plus a seeded sample.
  std::set<std::vector<long>> pick;
  std::vector<long> n(static_cast<size_t>(N), 0);
  auto ball = [&](auto&& self, int i, long left, long cap) -> void {
    if (pick.size() > static_cast<size_t>(opt.max_vectors) * 4) return;
    if (i == N) {
      if (std::any_of(n.begin(), n.end(), [](long v) { return v != 0; })) pick.insert(n);
      return;
    }
    for (long v = -std::min(left, cap); v <= std::min(left, cap); ++v) {
      n[static_cast<size_t>(i)] = v;
      self(self, i + 1, left - std::labs(v), cap);
    }
    n[static_cast<size_t>(i)] = 0;
  };
  ball(ball, 0, opt.radius, opt.radius);
  if (pick.size() > static_cast<size_t>(opt.max_vectors)) {
    pick.clear();
    ball(ball, 0, 1, 1);
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<long> coord(-opt.radius, opt.radius);
    int guard = 0;
    while (pick.size() < static_cast<size_t>(opt.max_vectors) && guard++ < 1000000) {
      long l1 = 0;
      for (auto& v : n) {
        v = coord(rng);
        l1 += std::labs(v);
      }
      if (l1 > 0 && l1 <= opt.radius) pick.insert(n);
    }
    std::fill(n.begin(), n.end(), 0);
  }
  const std::vector<std::vector<long>> vectors(pick.begin(), pick.end());

  // Center probes and their Lipschitz partners.
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unif(-1, 1);
  std::vector<Vec> probes, partners;
  for (int j = 0; j < std::max(1, opt.probes); ++j) {
    Vec z = Vec::Zero(c);
    if (j > 0)
      for (int k = 0; k < c; ++k) z[k] = unif(rng);
    Vec dz(c);
    for (int k = 0; k < c; ++k) dz[k] = unif(rng);
    dz *= 0.05 / fr.coords_norm(dz, Subspace::c);
    probes.push_back(z);
    partners.push_back(z + dz);
  }

  DriftAudit out;
  out.samples.resize(vectors.size());
  util::parallel_for(vectors.size(), opt.workers, [&](size_t i) {
    DriftSample& s = out.samples[i];
    s.n = vectors[i];
    const Vec nv = to_vec(s.n);
    s.ns = fr.norm(nv, Subspace::s);
    s.nu = fr.norm(nv, Subspace::u);
    s.nc = fr.norm(nv, Subspace::c);
    for (size_t j = 0; j < probes.size(); ++j) {
      const HolonomyValue a = holonomy_T(map, s.n, probes[j], cfg);
      const HolonomyValue b = holonomy_T(map, s.n, partners[j], cfg);
      s.drift = std::max(s.drift, fr.coords_norm(a.remainder, Subspace::c));
      s.lip_ratio = std::max(s.lip_ratio, fr.coords_norm(a.value - b.value, Subspace::c) /
                                              fr.coords_norm(probes[j] - partners[j], Subspace::c));
      s.residual = std::max({s.residual, a.residual, b.residual});
    }
  });

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (const auto& s : out.samples) {
    const double prod = s.ns * s.nu;
    out.fitted_C = std::max(out.fitted_C, s.drift / (log_plus(prod) + 1));
    out.max_drift = std::max(out.max_drift, s.drift);
    out.max_lip = std::max(out.max_lip, s.lip_ratio);
    out.max_residual = std::max(out.max_residual, s.residual);
    if (s.ns <= 3 && s.nu <= 3) out.case4_max_drift = std::max(out.case4_max_drift, s.drift);
    if (prod >= 2 && s.lip_ratio > 0) {
      const double x = std::log(prod), y = std::log(s.lip_ratio);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++cnt;
    }
  }
  out.case4_within_C = out.case4_max_drift <= out.fitted_C;
  if (cnt >= 2 && cnt * sxx - sx * sx > 0) out.beta_fit = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

  // gamma: largest |log| singular value of the induced center map's derivative.
  const double h = 1e-5;
  for (const Vec& z : probes) {
    Mat J(c, c);
    for (int k = 0; k < c; ++k) {
      const Vec e = Vec::Unit(c, k) * h;
      J.col(k) = (center_return(map, z + e, cfg) - center_return(map, z - e, cfg)) / (2 * h);
    }
    // Singular values in the adapted (Euclidean per block) center coordinates.
    Eigen::JacobiSVD<Mat> svd(J);
    for (int k = 0; k < svd.singularValues().size(); ++k)
      out.center_rate_gamma = std::max(out.center_rate_gamma, std::fabs(std::log(svd.singularValues()[k])));
  }
  out.beta_analytic = -2 * out.center_rate_gamma / std::log(fr.lambda_s());
  return out;
}

std::vector<Vec> parameter_grid(int dim, double range, int points) {
  if (dim < 1 || points < 1) throw InvalidInput("parameter grid needs dim >= 1 and points >= 1");
  std::vector<Vec> out;
  std::vector<int> idx(static_cast<size_t>(dim), 0);
  auto value = [&](int i) { return points == 1 ? 0.0 : -range + 2 * range * i / (points - 1); };
  for (;;) {
    Vec v(dim);
    for (int k = 0; k < dim; ++k) v[k] = value(idx[static_cast<size_t>(k)]);
    out.push_back(v);
    int k = 0;
    while (k < dim && ++idx[static_cast<size_t>(k)] == points) idx[static_cast<size_t>(k++)] = 0;
    if (k == dim) break;
  }
  return out;
}

AccessibilityReport accessibility_probe(const TorusMapLift& map, const Vec& base, const std::vector<Vec>& a_values,
                                        const std::vector<Vec>& b_values, const ManifoldEvalConfig& cfg,
                                        int workers) {
  const auto& fr = map.frame();
  const Vec zero = Vec::Zero(map.dim());
  struct Leg {
    Vec e;
    double res = 0, size = 0;
  };
  auto loop = [&](const Vec& a, const Vec& b) {
    const GraphPoint x1 = manifold_point(map, Subspace::s, base, a, cfg);
    const GraphPoint x2 = manifold_point(map, Subspace::u, x1.point, b, cfg);
    const IntersectionResult x3 = intersect(map, Subspace::s, x2.point, Subspace::cu, zero, cfg);
    const IntersectionResult x4 = intersect(map, Subspace::u, x3.point, Subspace::cs, zero, cfg);
    Leg l;
    l.e = fr.coords(x4.point, Subspace::c);
    l.res = x1.residual + x2.residual + x3.residual() + x4.residual();
    l.size = std::max({fr.norm(x1.point), fr.norm(x2.point), fr.norm(x3.point), fr.norm(x4.point)});
    return l;
  };
  const int s = fr.count(Subspace::s), u = fr.count(Subspace::u);
  for (const auto& a : a_values)
    if (a.size() != s) throw InvalidInput("stable loop parameter has the wrong dimension");
  for (const auto& b : b_values)
    if (b.size() != u) throw InvalidInput("unstable loop parameter has the wrong dimension");

  const Leg ref = loop(Vec::Zero(s), Vec::Zero(u));
  std::vector<Leg> legs(a_values.size() * b_values.size());
  util::parallel_for(legs.size(), workers, [&](size_t i) {
    legs[i] = loop(a_values[i / b_values.size()], b_values[i % b_values.size()]);
  });

  AccessibilityReport out;
  out.base = base;
  double res = ref.res, size = ref.size;
  std::vector<Vec> pts{Vec::Zero(fr.c_dim())};
  for (size_t i = 0; i < legs.size(); ++i) {
    LoopEndpoint ep;
    ep.a = a_values[i / b_values.size()];
    ep.b = b_values[i % b_values.size()];
    ep.e = legs[i].e - ref.e;
    ep.residual = legs[i].res + ref.res;
    res = std::max(res, ep.residual);
    size = std::max(size, legs[i].size);
    pts.push_back(ep.e);
    out.endpoints.push_back(std::move(ep));
  }
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      out.diameter = std::max(out.diameter, fr.coords_norm(pts[i] - pts[j], Subspace::c));
  // Rounding floor: coordinates of size |x| carry ~ulp(|x|) error through each leg.
  out.accumulated_residual = std::max(res, 64 * std::numeric_limits<double>::epsilon() * (1 + size));
  out.verdict = out.diameter < 10 * out.accumulated_residual ? "trivial-within-tolerance" : "open-evidence";
  return out;
}

RecurrenceSearchResult recurrence_search(const TorusMapLift& map, double eps, std::optional<double> b,
                                         const std::optional<lattice::IntMatrix>& generators,
                                         const ManifoldEvalConfig& cfg, double beta, int max_evaluated) {
  const auto& fr = map.frame();
  const int N = map.dim(), u = fr.u_dim(), cs = fr.count(Subspace::cs);
  if (!(eps > 0)) throw InvalidInput("eps must be positive");
  RecurrenceSearchResult out;
  out.eps = eps;
  out.b = b ? *b : static_cast<double>(N) / u;
  out.L = std::pow(eps, -out.b);
  out.beta_used = beta;
  out.gamma_implied = out.b * (u - beta * (N - u)) - (N - u);
  if (!(out.L >= 1)) throw InvalidInput("eps too large: L(eps) = eps^-b < 1");
  if (3 * out.L > manifolds::window_range(map, Subspace::u, cfg))
    throw WindowOverflow("3 L(eps) exceeds the evaluation window; increase the window or eps");
  if (generators && (generators->rows() != N || generators->cols() != N))
    throw InvalidInput("sublattice generators must be an N x N matrix of columns");

  const double kappa = dynamics::estimate_kappa(map);
  const double U = 3 * out.L, Sb = 4 * kappa + 2 * eps, Cb = 2 * eps + 4 * kappa + 0.25;

  // Free coordinates J (size u) and the best-conditioned complementary minor of the cs rows.
  Mat Mcs(cs, N);
  for (int j = 0; j < N; ++j) Mcs.col(j) = fr.coords(Vec::Unit(N, j), Subspace::cs);
  std::vector<int> best_I;
  double best_det = -1;
  std::vector<bool> sel(static_cast<size_t>(N), false);
  std::fill(sel.begin(), sel.begin() + cs, true);
  do {
    std::vector<int> I;
    for (int j = 0; j < N; ++j)
      if (sel[static_cast<size_t>(j)]) I.push_back(j);
    Mat M(cs, cs);
    for (int k = 0; k < cs; ++k) M.col(k) = Mcs.col(I[static_cast<size_t>(k)]);
    const double d = std::fabs(M.determinant());
    if (d > best_det) {
      best_det = d;
      best_I = I;
    }
  } while (std::prev_permutation(sel.begin(), sel.end()));
  std::vector<int> J;
  for (int j = 0; j < N; ++j)
    if (std::find(best_I.begin(), best_I.end(), j) == best_I.end()) J.push_back(j);
  Mat MI(cs, cs), MJ(cs, u);
  for (int k = 0; k < cs; ++k) MI.col(k) = Mcs.col(best_I[static_cast<size_t>(k)]);
  for (int k = 0; k < u; ++k) MJ.col(k) = Mcs.col(J[static_cast<size_t>(k)]);
  const Mat MIinv = MI.inverse();
  Eigen::JacobiSVD<Mat> svd(MIinv);
  const double rho = svd.singularValues()[0] * (Sb + Cb) * std::sqrt(2.0) + 1e-9;

  double ymax = std::max({U, Sb, Cb});
  long R = 0;
  for (int i = 0; i < N; ++i) R = std::max(R, static_cast<long>(std::ceil(fr.T().row(i).cwiseAbs().sum() * ymax)));
  const double box = std::pow(2.0 * static_cast<double>(R) + 1, u) * std::pow(2 * rho + 1, cs);
  if (box > 5e8) throw WindowOverflow("recurrence search box too large; increase eps or decrease b");

  struct Cand {
    double defect;
    std::vector<long> n;
    bool operator<(const Cand& o) const { return defect < o.defect || (defect == o.defect && n < o.n); }
  };
  std::vector<Cand> cands;
  auto linear_defect = [&](const Vec& nv, double center) {
    return std::max(0.0, fr.norm(nv, Subspace::s) - 2 * eps) + std::max(0.0, fr.norm(nv, Subspace::u) - 2 * out.L) +
           std::max(0.0, center - 2 * eps);
  };
  auto in_sublattice = [&](const std::vector<long>& n) {
    if (!generators) return true;
    lattice::IntMatrix col(N, 1);
    for (int i = 0; i < N; ++i) col(i, 0) = n[static_cast<size_t>(i)];
    for (const auto& row : lattice::rational_solve(*generators, col))
      if (row[0].get_den() != 1) return false;
    return true;
  };

  std::vector<long> n(static_cast<size_t>(N), 0);
  std::vector<long> nJ(static_cast<size_t>(u), -R);
  for (;;) {
    Vec vJ(u);
    for (int k = 0; k < u; ++k) vJ[k] = static_cast<double>(nJ[static_cast<size_t>(k)]);
    const Vec t = -MIinv * (MJ * vJ);
    // Integer box around t.
    std::vector<long> lo(static_cast<size_t>(cs)), hi(static_cast<size_t>(cs)), cur(static_cast<size_t>(cs));
    for (int k = 0; k < cs; ++k) {
      lo[static_cast<size_t>(k)] = static_cast<long>(std::ceil(t[k] - rho));
      hi[static_cast<size_t>(k)] = static_cast<long>(std::floor(t[k] + rho));
    }
    bool empty = false;
    for (int k = 0; k < cs; ++k) empty |= lo[static_cast<size_t>(k)] > hi[static_cast<size_t>(k)];
    if (!empty) {
      cur = lo;
      for (;;) {
        for (int k = 0; k < u; ++k) n[static_cast<size_t>(J[static_cast<size_t>(k)])] = nJ[static_cast<size_t>(k)];
        for (int k = 0; k < cs; ++k) n[static_cast<size_t>(best_I[static_cast<size_t>(k)])] = cur[static_cast<size_t>(k)];
        const Vec nv = to_vec(n);
        const double ns = fr.norm(nv, Subspace::s), nu = fr.norm(nv, Subspace::u), nc = fr.norm(nv, Subspace::c);
        if (std::any_of(n.begin(), n.end(), [](long v) { return v != 0; }) && ns <= Sb && nc <= Cb && nu <= U &&
            in_sublattice(n)) {
          ++out.candidates;
          cands.push_back({linear_defect(nv, nc), n});
        }
        int k = 0;
        while (k < cs && ++cur[static_cast<size_t>(k)] > hi[static_cast<size_t>(k)]) {
          cur[static_cast<size_t>(k)] = lo[static_cast<size_t>(k)];
          ++k;
        }
        if (k == cs) break;
      }
    }
    int k = 0;
    while (k < u && ++nJ[static_cast<size_t>(k)] > R) nJ[static_cast<size_t>(k++)] = -R;
    if (k == u) break;
  }
  std::sort(cands.begin(), cands.end());
  // Canonical sign: n and -n give mirror boxes; keep the first nonzero entry positive.
  if (cands.empty()) return out;

  // Re-measure the best few through the holonomy (center displacement |T_n(0)|).
  const Vec z0 = Vec::Zero(fr.c_dim());
  std::vector<Cand> measured;
  for (const auto& cd : cands) {
    if (static_cast<int>(measured.size()) >= max_evaluated) break;
    const Vec nv = to_vec(cd.n);
    const double dc =
        map.is_linear() ? fr.norm(nv, Subspace::c) : fr.coords_norm(holonomy_T(map, cd.n, z0, cfg).value, Subspace::c);
    measured.push_back({linear_defect(nv, dc), cd.n});
  }
  out.evaluated = static_cast<long>(measured.size());
  const Cand best = *std::min_element(measured.begin(), measured.end());
  out.n = best.n;
  out.defect = best.defect;
  out.found = true;
  return out;
}

}  // namespace tpa::holonomy
