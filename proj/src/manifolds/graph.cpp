#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SparseCore>
#include <Eigen/SparseQR>
#include <Eigen/OrderingMethods>

#include "tpa/errors.hpp"
#include "tpa/manifolds/manifolds.hpp"

namespace tpa::manifolds {

namespace {

bool is_forward(Subspace s) { return s == Subspace::u || s == Subspace::cu; }

void check_flavor(const TorusMapLift& map, Subspace sigma, const Vec& x, const Vec& v) {
  if (sigma == Subspace::su) throw InvalidInput("manifold flavor must be one of s, u, c, cs, cu");
  if (x.size() != map.dim()) throw InvalidInput("base point has the wrong dimension");
  if (v.size() != map.frame().count(sigma)) throw InvalidInput("manifold parameter has the wrong dimension");
  if (map.frame().count(sigma) == 0) throw InvalidInput("empty subspace for " + dynamics::to_string(sigma));
}

// Matrix of coords for a subspace.
Mat coords_matrix(const dynamics::SplittingFrame& fr, Subspace s) {
  const int n = fr.dim();
  Mat P(fr.count(s), n);
  for (int j = 0; j < n; ++j) P.col(j) = fr.coords(Vec::Unit(n, j), s);
  return P;
}

// Per-step growth of a seed error along the shooting: the complementary
// directions relative to the scaled parameter direction.
double truncation_estimate(const TorusMapLift& map, Subspace sigma, double vnorm, int K) {
  const auto& fr = map.frame();
  const double kap = map.kappa();
  double rate = 0;
  switch (sigma) {
    case Subspace::u:
    case Subspace::cs: rate = (1 + kap) / fr.lambda_u(); break;
    case Subspace::s:
    case Subspace::cu: rate = (1 + kap) * fr.lambda_s(); break;
    default: rate = std::max((1 + kap) / fr.lambda_u(), (1 + kap) * fr.lambda_s());
  }
  return kap * std::max(1.0, vnorm) * std::pow(rate, K);
}

// Boundary conditions of the orbit problem for each flavor: the E^sigma
// coordinate is pinned at x (index 0); the listed components are set flat at
// the far past (index -Kb) and far future (index Kf).
struct OrbitProblem {
  int Kb = 0, Kf = 0;
  std::optional<Subspace> past, future;
};

OrbitProblem orbit_problem(Subspace sigma, int K) {
  switch (sigma) {
    case Subspace::u: return {K, 0, Subspace::cs, std::nullopt};
    case Subspace::cu: return {K, 0, Subspace::s, std::nullopt};
    case Subspace::s: return {0, K, std::nullopt, Subspace::cu};
    case Subspace::cs: return {0, K, std::nullopt, Subspace::u};
    default: return {K, K, Subspace::s, Subspace::u};
  }
}

// Doubly asymptotic orbit problem: deviations d_k from the base orbit b_k,
// k in [-Kb, Kf], with d_{k+1} = F(b_k + d_k) - F(b_k). Newton on the whole
// sequence; the linear solves use sparse QR, which is backward stable, so the
// exponential dichotomy never amplifies rounding.
GraphPoint shoot(const TorusMapLift& map, Subspace sigma, const Vec& x, const Vec& v, const ManifoldEvalConfig& cfg) {
  const auto& fr = map.frame();
  const int N = map.dim();
  const OrbitProblem pb = orbit_problem(sigma, cfg.window);
  const int L = pb.Kb + pb.Kf + 1;  // orbit length; slot i is time i - Kb
  auto slot = [&](int i) { return static_cast<size_t>(i); };

  std::vector<Vec> base(slot(L));
  base[slot(pb.Kb)] = TorusMapLift::reduce(x);
  for (int i = pb.Kb - 1; i >= 0; --i) base[slot(i)] = TorusMapLift::reduce(map.F_inv(base[slot(i + 1)]));
  for (int i = pb.Kb + 1; i < L; ++i) base[slot(i)] = TorusMapLift::reduce(map.F(base[slot(i - 1)]));

  const Mat Pq = coords_matrix(fr, sigma);
  const Mat Pp = pb.past ? coords_matrix(fr, *pb.past) : Mat(0, N);
  const Mat Pf = pb.future ? coords_matrix(fr, *pb.future) : Mat(0, N);
  const int rows = N * (L - 1) + static_cast<int>(Pq.rows() + Pp.rows() + Pf.rows());
  const int cols = N * L;

  // Linear solution as the starting guess.
  std::vector<Vec> d(slot(L));
  for (int i = 0; i < L; ++i) d[slot(i)] = fr.embed(fr.apply_power(v, sigma, i - pb.Kb), sigma);

  auto residual = [&](Eigen::VectorXd& R) {
    R.resize(rows);
    int r = 0;
    for (int i = 0; i + 1 < L; ++i, r += N) R.segment(r, N) = d[slot(i + 1)] - map.dF(base[slot(i)], d[slot(i)]);
    R.segment(r, Pq.rows()) = Pq * d[slot(pb.Kb)] - v;
    r += static_cast<int>(Pq.rows());
    if (Pp.rows()) R.segment(r, Pp.rows()) = Pp * d[0];
    r += static_cast<int>(Pp.rows());
    if (Pf.rows()) R.segment(r, Pf.rows()) = Pf * d[slot(L - 1)];
  };

  const double scale = std::max(1.0, fr.coords_norm(v, sigma));
  Eigen::VectorXd R;
  residual(R);
  double res = R.cwiseAbs().maxCoeff();
  int it = 0;
  // One Newton step; returns false when the linear solve breaks down.
  auto newton_step = [&]() -> bool {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>((L - 1) * (N * N + N) + N * N));
    int r = 0;
    for (int i = 0; i + 1 < L; ++i, r += N) {
      const Mat J = map.DF(base[slot(i)] + d[slot(i)]);
      for (int a = 0; a < N; ++a) {
        trip.emplace_back(r + a, N * (i + 1) + a, 1.0);
        for (int b = 0; b < N; ++b) trip.emplace_back(r + a, N * i + b, -J(a, b));
      }
    }
    auto put = [&](const Mat& P, int col0) {
      for (int a = 0; a < P.rows(); ++a, ++r)
        for (int b = 0; b < N; ++b)
          if (P(a, b) != 0) trip.emplace_back(r, col0 + b, P(a, b));
    };
    put(Pq, N * pb.Kb);
    put(Pp, 0);
    put(Pf, N * (L - 1));
    Eigen::SparseMatrix<double> Jm(rows, cols);
    Jm.setFromTriplets(trip.begin(), trip.end());
    Jm.makeCompressed();
    Eigen::SparseQR<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> qr(Jm);
    if (qr.info() != Eigen::Success) return false;
    const Eigen::VectorXd delta = qr.solve(R);
    if (!delta.allFinite()) return false;
    const std::vector<Vec> keep = d;
    for (int i = 0; i < L; ++i) d[slot(i)] -= delta.segment(N * i, N);
    residual(R);
    const double nres = R.cwiseAbs().maxCoeff();
    if (!(nres < INFINITY)) return false;
    if (nres > res && res <= cfg.newton_tol * scale) {
      d = keep;  // polishing step made it worse
      residual(R);
      return false;
    }
    res = nres;
    return true;
  };
  for (; it < cfg.max_newton && res > cfg.newton_tol * scale; ++it)
    if (!newton_step()) break;
  // The stopping test sees the orbit equations, not the section itself; one
  // more step takes a quadratically convergent iterate to rounding level.
  if (it > 0 && it < cfg.max_newton && res <= cfg.newton_tol * scale && newton_step()) ++it;
  if (!(res <= 1e3 * cfg.newton_tol * scale))
    throw NumericalFailure("manifold orbit problem did not converge for " + dynamics::to_string(sigma) +
                           " (perturbation outside the kappa budget?)");

  GraphPoint gp;
  gp.base = x;
  gp.sigma = sigma;
  gp.v = v;
  gp.gamma = fr.project(d[slot(pb.Kb)], complement(sigma));
  gp.point = x + fr.embed(v, sigma) + gp.gamma;
  gp.residual = res + truncation_estimate(map, sigma, fr.coords_norm(v, sigma), cfg.window);
  gp.iterations = it;
  return gp;
}

}  // namespace

Subspace complement(Subspace s) {
  switch (s) {
    case Subspace::s: return Subspace::cu;
    case Subspace::u: return Subspace::cs;
    case Subspace::c: return Subspace::su;
    case Subspace::cs: return Subspace::u;
    case Subspace::cu: return Subspace::s;
    case Subspace::su: return Subspace::c;
  }
  return Subspace::c;
}

double window_range(const TorusMapLift& map, Subspace sigma, const ManifoldEvalConfig& cfg) {
  const auto& fr = map.frame();
  const double rate = sigma == Subspace::s ? 1.0 / fr.lambda_s() : fr.lambda_u();
  return std::pow(rate, 0.5 * cfg.window);
}

int suggested_window(const TorusMapLift& map, double tol) {
  const auto& fr = map.frame();
  const double rate = std::max(fr.lambda_s(), 1.0 / fr.lambda_u());
  return static_cast<int>(std::ceil(std::log(tol) / std::log(rate))) + 4;
}

GraphPoint manifold_point(const TorusMapLift& map, Subspace sigma, const Vec& x, const Vec& v,
                          const ManifoldEvalConfig& cfg) {
  check_flavor(map, sigma, x, v);
  if (cfg.window < 1) throw InvalidInput("window must be positive");
  const auto& fr = map.frame();
  if ((sigma == Subspace::s || sigma == Subspace::u) && fr.coords_norm(v, sigma) > window_range(map, sigma, cfg))
    throw WindowOverflow("|v| exceeds the evaluation window for " + dynamics::to_string(sigma) +
                         "; increase the window");
  if (map.is_linear()) {
    GraphPoint gp;
    gp.base = x;
    gp.sigma = sigma;
    gp.v = v;
    gp.gamma = Vec::Zero(map.dim());
    gp.point = x + fr.embed(v, sigma);
    return gp;
  }
  return shoot(map, sigma, x, v, cfg);
}

double invariance_residual(const TorusMapLift& map, Subspace sigma, const Vec& x, const Vec& v,
                           const ManifoldEvalConfig& cfg) {
  const auto& fr = map.frame();
  const GraphPoint gp = manifold_point(map, sigma, x, v, cfg);
  const Vec dz = map.dF(x, gp.point - x);
  const Vec vt = fr.coords(dz, sigma);
  const GraphPoint img = manifold_point(map, sigma, map.F(x), vt, cfg);
  return fr.norm(dz - fr.embed(vt, sigma) - img.gamma);
}

Vec graph_transform_apply(const TorusMapLift& map, Subspace sigma, const Vec& x, const Vec& v,
                          const ManifoldEvalConfig& cfg) {
  check_flavor(map, sigma, x, v);
  if (sigma == Subspace::c) throw InvalidInput("graph transform is defined for s, u, cs, cu");
  const auto& fr = map.frame();
  const bool fwd = is_forward(sigma);
  const Vec xp = fwd ? map.F_inv(x) : map.F(x);
  // Deviation from x under F (resp. F^{-1}) of a deviation from xp.
  auto push = [&](const Vec& d) { return fwd ? map.dF(xp, d) : map.dF_inv(x, d); };
  const int pre = fwd ? -1 : 1;
  Vec w = fr.apply_power(v, sigma, pre);
  const double scale = std::max(1.0, fr.coords_norm(v, sigma));
  Vec image;
  for (int it = 0; it < 200; ++it) {
    const GraphPoint g = manifold_point(map, sigma, xp, w, cfg);
    image = push(g.point - xp);
    const Vec r = fr.coords(image, sigma) - v;
    if (fr.coords_norm(r, sigma) <= 1e-14 * scale) break;
    w -= fr.apply_power(r, sigma, pre);
  }
  return fr.project(image, complement(sigma));
}

double membership_residual(const TorusMapLift& map, Subspace sigma, const Vec& x, const Vec& p,
                           const ManifoldEvalConfig& cfg) {
  const auto& fr = map.frame();
  const Vec dv = p - x;
  const Vec vc = fr.coords(dv, sigma);
  const GraphPoint gp = manifold_point(map, sigma, x, vc, cfg);
  return fr.norm(dv - fr.embed(vc, sigma) - gp.gamma);
}

IntersectionResult intersect(const TorusMapLift& map, Subspace sigma_a, const Vec& x, Subspace sigma_b, const Vec& y,
                             const ManifoldEvalConfig& cfg, const std::optional<Vec>& seed) {
  const bool direct = (sigma_a == Subspace::s && sigma_b == Subspace::cu) ||
                      (sigma_a == Subspace::u && sigma_b == Subspace::cs);
  const bool swapped = (sigma_a == Subspace::cu && sigma_b == Subspace::s) ||
                       (sigma_a == Subspace::cs && sigma_b == Subspace::u);
  if (!direct && !swapped) throw InvalidInput("intersect supports the pairs (s, cu), (u, cs) and their swaps");
  if (swapped) {
    IntersectionResult r = intersect(map, sigma_b, y, sigma_a, x, cfg, seed);
    std::swap(r.sigma_a, r.sigma_b);
    std::swap(r.offset_a, r.offset_b);
    std::swap(r.residual_a, r.residual_b);
    return r;
  }
  const auto& fr = map.frame();
  const Subspace thin = sigma_a, thick = sigma_b;
  const Vec xy_thick = fr.project(x - y, thick);
  const Vec yx_thin = fr.project(y - x, thin);

  Vec w = seed ? fr.project(*seed, thick) : xy_thick;
  IntersectionResult out;
  out.sigma_a = thin;
  out.sigma_b = thick;
  double prev_step = -1, rate = 0;
  int it = 0;
  bool done = false;
  for (; it < cfg.max_intersect; ++it) {
    const Vec vs = yx_thin + manifold_point(map, thick, y, fr.coords(w, thick), cfg).gamma;
    const Vec wn = xy_thick + manifold_point(map, thin, x, fr.coords(vs, thin), cfg).gamma;
    const double step = fr.norm(wn - w);
    const double scale = std::max(1.0, fr.norm(wn));
    if (prev_step > 1e-11 * scale) rate = std::max(rate, step / prev_step);
    w = wn;
    prev_step = step;
    if (step <= cfg.intersect_tol * scale) {
      done = true;
      break;
    }
    if (it >= 8 && rate >= 1.0) throw NumericalFailure("intersection iteration is not contracting (kappa budget exceeded)");
  }
  if (!done) throw NumericalFailure("intersection iteration hit the cap");
  const GraphPoint gb = manifold_point(map, thick, y, fr.coords(w, thick), cfg);
  out.point = gb.point;
  out.offset_b = w;
  out.offset_a = fr.project(out.point - x, thin);
  out.iterations = it + 1;
  out.contraction_rate = rate;
  out.residual_a = membership_residual(map, thin, x, out.point, cfg);
  out.residual_b = membership_residual(map, thick, y, out.point, cfg);
  return out;
}

BoundsAudit bounds_audit(const TorusMapLift& map, const ManifoldEvalConfig& cfg, int samples, unsigned long seed,
                         double range) {
  const auto& fr = map.frame();
  BoundsAudit out;
  out.samples = samples;
  out.kappa_budget = dynamics::estimate_kappa(map);
  out.range = std::min({range, window_range(map, Subspace::s, cfg), window_range(map, Subspace::u, cfg)});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Subspace flavors[] = {Subspace::s, Subspace::u, Subspace::c, Subspace::cs, Subspace::cu};
  for (int i = 0; i < samples; ++i) {
    Vec x(map.dim());
    for (int k = 0; k < x.size(); ++k) x[k] = unif(rng);
    for (Subspace sg : flavors) {
      const int m = fr.count(sg);
      if (m == 0) continue;
      Vec dir(m);
      for (int k = 0; k < m; ++k) dir[k] = gauss(rng);
      dir /= fr.coords_norm(dir, sg);
      const double small = 0.05 + 1.95 * unif(rng);
      const double large = std::exp(std::log(2.0) + unif(rng) * (std::log(out.range) - std::log(2.0)));
      for (double t : {small, large}) {
        const Vec v = t * dir;
        const GraphPoint gp = manifold_point(map, sg, x, v, cfg);
        const double ng = fr.norm(gp.gamma);
        out.max_residual = std::max(out.max_residual, gp.residual);
        out.item5_ratio = std::max(out.item5_ratio, ng / t);
        if (sg == Subspace::c || sg == Subspace::cs || sg == Subspace::cu) out.item2_sup = std::max(out.item2_sup, ng);
        if (sg == Subspace::u) out.item3_sup = std::max(out.item3_sup, fr.norm(gp.gamma, Subspace::s));
        if (sg == Subspace::s) out.item4_sup = std::max(out.item4_sup, fr.norm(gp.gamma, Subspace::u));
        if ((sg == Subspace::s || sg == Subspace::u) && t >= 2) out.item1_C = std::max(out.item1_C, ng / std::log(t));
      }
    }
  }
  out.measured_kappa = std::max(out.item2_sup, out.item5_ratio);
  return out;
}

LocalHolonomy::LocalHolonomy(const TorusMapLift& map, const Vec& x, const Vec& y, const ManifoldEvalConfig& cfg)
    : map_(&map), x_(x), y_(y), cfg_(cfg) {
  if (map.frame().c_dim() == 0) throw InvalidInput("local holonomy needs a center direction");
  const double r = membership_residual(map, Subspace::cu, y, x, cfg);
  if (r > 1e-8 * std::max(1.0, map.frame().norm(x - y)))
    throw InvalidInput("local holonomy needs x on W^cu(y) (transversality failure)");
  residual_ = r;
}

Vec LocalHolonomy::operator()(const Vec& z) const {
  const auto& fr = map_->frame();
  const GraphPoint q = manifold_point(*map_, Subspace::c, x_, z, cfg_);
  const IntersectionResult p = intersect(*map_, Subspace::u, q.point, Subspace::cs, y_, cfg_);
  residual_ = std::max({residual_, q.residual, p.residual()});
  return fr.coords(p.point - y_, Subspace::c);
}

Vec LocalHolonomy::remainder(const Vec& z) const {
  const auto& fr = map_->frame();
  return (*this)(z) - z - fr.coords(x_ - y_, Subspace::c);
}

Mat LocalHolonomy::remainder_jacobian(const Vec& z, double h) const {
  const int m = static_cast<int>(z.size());
  Mat J(m, m);
  for (int i = 0; i < m; ++i) {
    const Vec e = Vec::Unit(m, i) * h;
    J.col(i) = (remainder(z + e) - remainder(z - e)) / (2 * h);
  }
  return J;
}

std::string manifold_trace_csv(const TorusMapLift& map, Subspace sigma, const Vec& x, const Vec& dir, double t_max,
                               int points, const ManifoldEvalConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "t";
  for (int i = 0; i < map.dim(); ++i) os << ",x" << i;
  os << ",residual\n";
  for (int k = 0; k < points; ++k) {
    const double t = points > 1 ? t_max * k / (points - 1) : 0.0;
    const GraphPoint gp = manifold_point(map, sigma, x, t * dir, cfg);
    os << t;
    for (int i = 0; i < map.dim(); ++i) os << ',' << gp.point[i];
    os << ',' << gp.residual << '\n';
  }
  return os.str();
}

}  // namespace tpa::manifolds
