#pragma once

#include <optional>
#include <vector>

#include "tpa/linearization/plane_map.hpp"

namespace tpa::linearization {

struct DriftOptions {
  std::optional<P2> alpha_ref;  // drift is |Q^k(0) - k alpha_ref|; default: the estimate
  // Lower-bound check |Q^k(0) - k alpha| >= k|lambda|(1 - delta) + delta(|lambda| - 2).
  std::optional<double> lambda_norm;
  std::optional<double> delta;
  double fit_fraction = 0.1;  // C is fitted on k <= fit_fraction * k_max, then checked up to k_max
  int table_points = 64;
};

struct DriftPoint {
  long k = 0;
  double drift = 0;
};

struct RotationDriftReport {
  long k_max = 0;
  P2 alpha_estimate{0, 0};  // Q^{k_max}(0) / k_max
  P2 alpha_ref{0, 0};
  std::vector<DriftPoint> table;  // log-spaced samples

  double fitted_c = 0;          // max drift / (log k + 1) on the calibration window
  bool log_bound_holds = true;  // drift_k <= C log k + C for every k <= k_max
  double max_log_ratio = 0;     // max drift / (log k + 1) over all k
  double slope = 0;             // least squares d(drift)/dk over k in [k_max/2, k_max]

  std::optional<bool> lower_bound_holds;
  std::optional<bool> upper_bound_holds;  // |Q^k(0)| <= k(|lambda| + |alpha| + 2 delta)
  // First k where the linear lower bound exceeds C log k + C: past it both
  // bounds cannot hold unless lambda = 0.
  std::optional<long> incompatibility_k;
};

RotationDriftReport rotation_drift(const PlaneMap& q, long k_max, const DriftOptions& opt = {});

// Q = R_lambda o h1^{-1} o R_alpha o h1 with h1 = id + sum of modes.
PlaneMap synthetic_q(P2 lambda, P2 alpha, const std::vector<PlaneMode>& h1_modes);

}  // namespace tpa::linearization
