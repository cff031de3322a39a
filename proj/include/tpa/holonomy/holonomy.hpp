#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpa/lattice/int_matrix.hpp"
#include "tpa/manifolds/manifolds.hpp"

namespace tpa::holonomy {

using dynamics::TorusMapLift;
using manifolds::ManifoldEvalConfig;

// pi^su(x) = pi^s(pi^u(x)): along W^u to W^cs(0), then along W^s to W^c(0).
struct SuProjection {
  Vec point;     // on W^c(0)
  Vec center;    // its adapted center coordinates, i.e. (j_0^c)^{-1}(point)
  Vec via;       // pi^u(x), on W^cs(0)
  double residual = 0;
};

SuProjection project_su(const TorusMapLift& map, const Vec& x, const ManifoldEvalConfig& cfg = {});

// T_n = (j_0^c)^{-1} o pi^su o L_n o j_0^c on adapted center coordinates.
struct HolonomyValue {
  Vec value;
  Vec remainder;  // T_n(z) - z - n^c
  double residual = 0;
};

HolonomyValue holonomy_T(const TorusMapLift& map, const std::vector<long>& n, const Vec& z,
                         const ManifoldEvalConfig& cfg = {});

// The center map induced on W^c(0) (F fixes 0): z -> (j_0^c)^{-1}(F(j_0^c(z))).
Vec center_return(const TorusMapLift& map, const Vec& z, const ManifoldEvalConfig& cfg = {});

// |T_n(T_m(z)) - T_{n+m}(z)| in the adapted center norm.
double group_law_defect(const TorusMapLift& map, const std::vector<long>& n, const std::vector<long>& m, const Vec& z,
                        const ManifoldEvalConfig& cfg = {});

struct DriftSample {
  std::vector<long> n;
  double ns = 0, nu = 0, nc = 0;  // adapted norms of n^s, n^u, n^c
  double drift = 0;               // max over probes of |T_n(x) - x - n^c|
  double lip_ratio = 0;           // max over probe pairs |T_n(x) - T_n(y)| / |x - y|
  double residual = 0;
};

struct DriftAuditOptions {
  long radius = 5;          // |n|_1 <= radius
  int probes = 3;           // center probe points
  int max_vectors = 200;    // the whole ball if it is smaller; else |n|_1 <= 1 plus a seeded sample
  unsigned long seed = 1;
  int workers = 1;
};

struct DriftAudit {
  std::vector<DriftSample> samples;
  double fitted_C = 0;           // max drift / (log+(|n^s||n^u|) + 1)
  double max_drift = 0;
  double case4_max_drift = 0;    // over |n^s|, |n^u| <= 3
  bool case4_within_C = true;
  double max_lip = 0;
  double beta_fit = 0;           // slope of log Lip(T_n) against log(|n^s||n^u|)
  double beta_analytic = 0;      // -2 gamma / log lambda from measured center rates
  double center_rate_gamma = 0;  // max |log| of the singular values of DF on E^c
  double max_residual = 0;
};

DriftAudit drift_audit(const TorusMapLift& map, const DriftAuditOptions& opt, const ManifoldEvalConfig& cfg = {});

// Four-leg su loop from a base point: x1 = j^s_base(a), x2 = j^u_{x1}(b),
// x3 = W^s(x2) cap W^cu(0), x4 = W^u(x3) cap W^cs(0) (a point of W^c(0)).
// e(a, b) is the center coordinate of x4 relative to the degenerate loop.
struct LoopEndpoint {
  Vec a, b, e;
  double residual = 0;
};

struct AccessibilityReport {
  Vec base;
  std::vector<LoopEndpoint> endpoints;
  double diameter = 0;
  double accumulated_residual = 0;
  std::string verdict;  // "trivial-within-tolerance" or "open-evidence"
  bool trivial() const { return verdict == "trivial-within-tolerance"; }
};

// a_values: E^s adapted coordinates, b_values: E^u adapted coordinates; the
// loop is run on the full grid a_values x b_values.
AccessibilityReport accessibility_probe(const TorusMapLift& map, const Vec& base, const std::vector<Vec>& a_values,
                                        const std::vector<Vec>& b_values, const ManifoldEvalConfig& cfg = {},
                                        int workers = 1);

// Evenly spaced grid of parameters in [-range, range] along a fixed direction
// of each E^s / E^u coordinate axis (points per axis, cartesian product).
std::vector<Vec> parameter_grid(int dim, double range, int points);

struct RecurrenceSearchResult {
  double eps = 0;
  double b = 0;
  double L = 0;  // eps^-b
  std::vector<long> n;
  bool found = false;
  double defect = 0;
  double gamma_implied = 0;  // b(u - beta(N - u)) - (N - u)
  double beta_used = 0;
  long candidates = 0;       // lattice vectors in the search box
  long evaluated = 0;        // of which measured through the holonomy
};

// Looks for n in S (all of Z^N, or the span of the generator columns) with
// |n^u| <= 3L, |n^s| <= 4 kappa + 2 eps, |n^c| <= 2 eps + C0 and minimal
// defect: the gap between the box W^s_eps(W^u_L(W^c_eps(0))) and its n-translate,
// measured in coordinates where the center part is the holonomy displacement
// |T_n(0)|. Ties: lexicographically smallest n.
RecurrenceSearchResult recurrence_search(const TorusMapLift& map, double eps, std::optional<double> b,
                                         const std::optional<lattice::IntMatrix>& generators,
                                         const ManifoldEvalConfig& cfg = {}, double beta = 0,
                                         int max_evaluated = 32);

}  // namespace tpa::holonomy
