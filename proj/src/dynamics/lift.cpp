#include "tpa/dynamics/lift.hpp"

#include <cmath>

#include "tpa/errors.hpp"

namespace tpa::dynamics {

namespace {

double inf_norm(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

double trig_lipschitz(const PerturbationSpec& p, const SplittingFrame& frame) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  double total = 0;
  for (const auto& md : p.modes) {
    Vec m(static_cast<int>(md.m.size()));
    for (int i = 0; i < m.size(); ++i) m[i] = static_cast<double>(md.m[static_cast<size_t>(i)]);
    total += kTwoPi * frame.norm(md.amp) * frame.dual_norm(m);
  }
  return total;
}

TorusMapLift::TorusMapLift(lattice::ToralMatrix a, PerturbationSpec phi)
    : TorusMapLift(a, std::make_shared<const SplittingFrame>(build_splitting(a)), std::move(phi)) {}

TorusMapLift::TorusMapLift(lattice::ToralMatrix a, std::shared_ptr<const SplittingFrame> frame, PerturbationSpec phi)
    : a_(std::move(a)), frame_(std::move(frame)), phi_(std::move(phi)) {
  if (frame_->dim() != a_.dim()) throw InvalidInput("frame dimension does not match the matrix");
  for (const auto& md : phi_.modes)
    if (static_cast<int>(md.m.size()) != a_.dim() || md.amp.size() != a_.dim())
      throw InvalidInput("perturbation mode dimension does not match the matrix");
  const double lip = trig_lipschitz(phi_, *frame_);
  if (phi_.kind == PerturbationKind::conjugate) {
    if (lip >= 1.0) throw InvalidInput("conjugacy H = id + xi must have Lip(xi) < 1");
    kappa_ = 2.0 * frame_->A_norm() * lip / (1.0 - lip);
  } else {
    kappa_ = lip;
    if (kappa_ * frame_->A_inv_norm() >= 1.0)
      throw InvalidInput("perturbation too large: Lip(phi) |A^{-1}| >= 1, F may not be invertible");
  }
}

Vec TorusMapLift::H(const Vec& x) const {
  if (phi_.kind != PerturbationKind::conjugate || phi_.empty()) return x;
  return x + phi_.eval(x);
}

Vec TorusMapLift::H_inv(const Vec& y) const {
  if (phi_.kind != PerturbationKind::conjugate || phi_.empty()) return y;
  // Fixed point x = y - xi(x) is a contraction (Lip xi < 1); finish with Newton.
  Vec x = y - phi_.eval(y);
  for (int it = 0; it < 60; ++it) {
    Vec r = x + phi_.eval(x) - y;
    if (inf_norm(r) <= 1e-15 * std::max(1.0, inf_norm(y))) break;
    Mat J = Mat::Identity(dim(), dim()) + phi_.jacobian(x);
    x -= J.partialPivLu().solve(r);
  }
  return x;
}

Vec TorusMapLift::F(const Vec& x) const {
  const Mat& A = frame_->A();
  if (phi_.empty()) return A * x;
  if (phi_.kind == PerturbationKind::conjugate) return H(A * H_inv(x));
  return A * x + phi_.eval(x);
}

Mat TorusMapLift::DF(const Vec& x) const {
  const Mat& A = frame_->A();
  if (phi_.empty()) return A;
  if (phi_.kind == PerturbationKind::conjugate) {
    Vec z = H_inv(x);
    Mat I = Mat::Identity(dim(), dim());
    Mat DHz = I + phi_.jacobian(z);
    Mat DHw = I + phi_.jacobian(A * z);
    return DHw * A * DHz.partialPivLu().inverse();
  }
  return A + phi_.jacobian(x);
}

Vec TorusMapLift::F_inv(const Vec& y, const InverseOptions& opt) const {
  const Mat& Ai = frame_->A_inv();
  if (phi_.empty()) return Ai * y;
  if (phi_.kind == PerturbationKind::conjugate) return H(Ai * H_inv(y));
  Vec x = Ai * (y - phi_.eval(Ai * y));
  const double scale = std::max(1.0, inf_norm(y));
  Vec best_x = x;
  double best = INFINITY;
  for (int it = 0; it <= opt.max_iter; ++it) {
    Vec r = F(x) - y;
    double res = inf_norm(r);
    if (res < best) {
      best = res;
      best_x = x;
    }
    // Stop once at the rounding floor; the iteration only jitters below it.
    if (res <= 0.1 * opt.tol * scale || it == opt.max_iter) break;
    x -= DF(x).partialPivLu().solve(r);
  }
  x = best_x;
  if (!(best <= opt.tol * scale)) throw NumericalFailure("F^{-1}: Newton did not converge (perturbation too large?)");
  return x;
}

Mat TorusMapLift::DF_inv(const Vec& y) const { return DF(F_inv(y)).partialPivLu().inverse(); }

namespace {

// g with H(u + g) - H(u) = d for H = id + xi, xi = p.
Vec h_delta_inv(const PerturbationSpec& p, const Vec& u, const Vec& d) {
  Vec g = d;
  const int n = static_cast<int>(u.size());
  for (int it = 0; it < 60; ++it) {
    Vec r = g + p.eval_delta(u, g) - d;
    if (inf_norm(r) <= 1e-16 * inf_norm(d)) break;
    Vec step = (Mat::Identity(n, n) + p.jacobian(u + g)).partialPivLu().solve(r);
    g -= step;
    if (inf_norm(step) <= 1e-17 * inf_norm(g)) break;
  }
  return g;
}

}  // namespace

Vec TorusMapLift::dF(const Vec& x, const Vec& d) const {
  const Mat& A = frame_->A();
  if (phi_.empty()) return A * d;
  if (phi_.kind == PerturbationKind::conjugate) {
    const Vec u = H_inv(x);
    const Vec f = A * h_delta_inv(phi_, u, d);
    return f + phi_.eval_delta(A * u, f);
  }
  return A * d + phi_.eval_delta(x, d);
}

Vec TorusMapLift::dF_inv(const Vec& x, const Vec& d) const {
  const Mat& Ai = frame_->A_inv();
  if (phi_.empty()) return Ai * d;
  if (phi_.kind == PerturbationKind::conjugate) {
    const Vec u = H_inv(x);
    const Vec h = Ai * h_delta_inv(phi_, frame_->A() * u, d);
    return h + phi_.eval_delta(u, h);
  }
  Vec e = Ai * d;
  double best = INFINITY;
  Vec best_e = e;
  for (int it = 0; it < 60; ++it) {
    Vec r = dF(x, e) - d;
    const double res = inf_norm(r);
    if (res < best) {
      best = res;
      best_e = e;
    }
    if (res <= 1e-16 * inf_norm(d)) break;
    Vec step = DF(x + e).partialPivLu().solve(r);
    e -= step;
    if (inf_norm(step) <= 1e-17 * inf_norm(e)) break;
  }
  return best < INFINITY ? best_e : e;
}

Vec TorusMapLift::reduce(const Vec& x) {
  Vec out = x;
  for (int i = 0; i < out.size(); ++i) out[i] -= std::floor(out[i]);
  return out;
}

double estimate_kappa(const TorusMapLift& map) { return map.kappa(); }

TorusMapLift transport_map(const TorusMapLift& map, const lattice::IntMatrix& L) {
  const int n = map.dim();
  if (L.rows() != n || L.cols() != n) throw InvalidInput("transport matrix has the wrong shape");
  if (lattice::determinant(L) == 0) throw InvalidInput("transport matrix is singular");
  auto x = lattice::rational_solve(L, map.matrix().matrix() * L);
  lattice::IntMatrix B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& v = x[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (v.get_den() != 1) throw InvalidInput("L^{-1} A L is not an integer matrix");
      B(i, j) = v.get_num();
    }
  const Mat Ld = to_mat(L);
  const Mat Linv = Ld.fullPivLu().inverse();
  PerturbationSpec p = map.perturbation();
  for (auto& md : p.modes) {
    std::vector<long> m2(static_cast<size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
      lattice::Int acc = 0;
      for (int i = 0; i < n; ++i) acc += L(i, j) * md.m[static_cast<size_t>(i)];
      m2[static_cast<size_t>(j)] = acc.get_si();
    }
    md.m = std::move(m2);
    md.amp = Linv * md.amp;
  }
  return TorusMapLift(lattice::ToralMatrix(std::move(B)), std::move(p));
}

}  // namespace tpa::dynamics
