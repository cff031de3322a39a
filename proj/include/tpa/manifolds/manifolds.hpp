#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpa/dynamics/lift.hpp"

namespace tpa::manifolds {

using dynamics::Subspace;
using dynamics::TorusMapLift;

struct ManifoldEvalConfig {
  int window = 40;  // K: shooting depth
  double newton_tol = 1e-12;
  int max_newton = 50;
  double intersect_tol = 1e-13;  // on successive iterates, adapted norm
  int max_intersect = 200;
};

// Complementary subspace of a flavor: s -> cu, u -> cs, c -> su, cs -> u, cu -> s.
Subspace complement(Subspace s);

// j_x^sigma(v) = x + v + gamma_x^sigma(v). v holds the adapted coordinates of
// the E^sigma component (length frame.count(sigma)); gamma is a vector of R^N
// lying in the complementary subspace.
struct GraphPoint {
  Vec base;
  Subspace sigma = Subspace::u;
  Vec v;
  Vec gamma;
  Vec point;
  double residual = 0;  // Newton residual plus truncation estimate
  int iterations = 0;
};

// Doubly asymptotic shooting. For u and cu a flat disc at the K-step preimage
// of x is pushed forward and its parameter Newton-adjusted until the E^sigma
// coordinate of the endpoint equals v; s and cs mirror this under F^{-1}.
// c is W^cs(x) and W^cu(x) intersected with the center coordinate pinned.
// Throws WindowOverflow for sigma = s, u when |v| exceeds the window.
GraphPoint manifold_point(const TorusMapLift& map, Subspace sigma, const Vec& x, const Vec& v,
                          const ManifoldEvalConfig& cfg = {});

// Smallest window whose truncation factor max(lambda_s, 1/lambda_u)^K is
// below tol, plus a small margin. Much cheaper than the default 40 for
// strongly hyperbolic matrices.
int suggested_window(const TorusMapLift& map, double tol = 1e-16);

// Largest |v| accepted for sigma = s, u at this window.
double window_range(const TorusMapLift& map, Subspace sigma, const ManifoldEvalConfig& cfg);

// |F(j_x(v)) - j_{F(x)}(v')| with v' the E^sigma coordinate of F(j_x(v)) - F(x).
double invariance_residual(const TorusMapLift& map, Subspace sigma, const Vec& x, const Vec& v,
                           const ManifoldEvalConfig& cfg = {});

// One explicit graph-transform step applied to the computed section: the
// fiber over the preimage base (F^{-1}(x) for u, cu; F(x) for s, cs) is pushed
// through F (resp. F^{-1}) and read back as a graph over E^sigma at x.
// Returns gamma in R^N; a fixed point reproduces manifold_point.
Vec graph_transform_apply(const TorusMapLift& map, Subspace sigma, const Vec& x, const Vec& v,
                          const ManifoldEvalConfig& cfg = {});

struct IntersectionResult {
  Vec point;
  Subspace sigma_a = Subspace::s, sigma_b = Subspace::cu;
  Vec offset_a;  // R^N, in E^{sigma_a}: point = x + offset_a + gamma_x(offset_a)
  Vec offset_b;  // R^N, in E^{sigma_b}: point = y + offset_b + gamma_y(offset_b)
  double residual_a = 0;  // membership residual in W^{sigma_a}(x)
  double residual_b = 0;  // membership residual in W^{sigma_b}(y)
  double contraction_rate = 0;  // largest measured ratio of successive steps
  int iterations = 0;
  double residual() const { return std::max(residual_a, residual_b); }
};

// W^{sigma_a}(x) intersected with W^{sigma_b}(y) for the transversal pairs
// (s, cu), (cu, s), (u, cs), (cs, u). Solved by the contraction
// w <- (x - y)^{sigma_b} + gamma_x(v(w)); seed is the initial w (R^N).
IntersectionResult intersect(const TorusMapLift& map, Subspace sigma_a, const Vec& x, Subspace sigma_b, const Vec& y,
                             const ManifoldEvalConfig& cfg = {}, const std::optional<Vec>& seed = std::nullopt);

// Distance of p from W^sigma(x), measured along the complementary direction.
double membership_residual(const TorusMapLift& map, Subspace sigma, const Vec& x, const Vec& p,
                           const ManifoldEvalConfig& cfg = {});

struct BoundsAudit {
  int samples = 0;
  double range = 0;          // largest |v| used for sigma = s, u
  double item2_sup = 0;      // max |gamma| for c, cs, cu
  double item3_sup = 0;      // max |(gamma^u)^s|
  double item4_sup = 0;      // max |(gamma^s)^u|
  double item1_C = 0;        // max |gamma|/log|v| over sigma = s, u with |v| >= 2
  double item5_ratio = 0;    // max |gamma|/|v| over all flavors
  double measured_kappa = 0; // max(item2_sup, item5_ratio)
  double kappa_budget = 0;   // estimate_kappa(map)
  double max_residual = 0;
};

BoundsAudit bounds_audit(const TorusMapLift& map, const ManifoldEvalConfig& cfg, int samples, unsigned long seed = 1,
                         double range = 1e3);

// P^u_{xy}: center coordinates at x mapped along unstable leaves to center
// coordinates at y. Needs x on W^cu(y) to tolerance (InvalidInput otherwise).
class LocalHolonomy {
 public:
  LocalHolonomy(const TorusMapLift& map, const Vec& x, const Vec& y, const ManifoldEvalConfig& cfg = {});

  // z, result: adapted center coordinates (length c_dim).
  Vec operator()(const Vec& z) const;
  // phi_xy(z) = P(z) - z - (x - y)^c
  Vec remainder(const Vec& z) const;
  // Central-difference derivative of phi_xy at z.
  Mat remainder_jacobian(const Vec& z, double h = 1e-5) const;
  double residual() const { return residual_; }

 private:
  const TorusMapLift* map_;
  Vec x_, y_;
  ManifoldEvalConfig cfg_;
  mutable double residual_ = 0;
};

// Samples of j_x^sigma along a parameter segment t * dir, t in [0, t_max],
// as CSV rows: t, point coordinates, residual.
std::string manifold_trace_csv(const TorusMapLift& map, Subspace sigma, const Vec& x, const Vec& dir, double t_max,
                               int points, const ManifoldEvalConfig& cfg = {});

}  // namespace tpa::manifolds
