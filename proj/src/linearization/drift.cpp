#include "tpa/linearization/drift.hpp"

#include <cmath>

#include "tpa/errors.hpp"

namespace tpa::linearization {

RotationDriftReport rotation_drift(const PlaneMap& q, long k_max, const DriftOptions& opt) {
  if (k_max < 1) throw InvalidInput("rotation_drift: k_max must be >= 1");
  std::vector<P2> orbit(static_cast<size_t>(k_max) + 1);
  orbit[0] = {0, 0};
  for (long k = 1; k <= k_max; ++k)
    orbit[static_cast<size_t>(k)] = q.translation ? q.iterate({0, 0}, k) : q.fwd(orbit[static_cast<size_t>(k - 1)]);

  RotationDriftReport rep;
  rep.k_max = k_max;
  const double km = static_cast<double>(k_max);
  rep.alpha_estimate = {orbit.back()[0] / km, orbit.back()[1] / km};
  rep.alpha_ref = opt.alpha_ref.value_or(rep.alpha_estimate);
  auto drift = [&](long k) {
    const double kd = static_cast<double>(k);
    return norm(orbit[static_cast<size_t>(k)] - P2{kd * rep.alpha_ref[0], kd * rep.alpha_ref[1]});
  };

  const long fit_end = std::max<long>(1, static_cast<long>(opt.fit_fraction * km));
  for (long k = 1; k <= k_max; ++k) {
    const double ratio = drift(k) / (std::log(static_cast<double>(k)) + 1);
    rep.max_log_ratio = std::max(rep.max_log_ratio, ratio);
    if (k <= fit_end) rep.fitted_c = std::max(rep.fitted_c, ratio);
  }
  for (long k = 1; k <= k_max; ++k)
    if (drift(k) > rep.fitted_c * (std::log(static_cast<double>(k)) + 1) * (1 + 1e-12) + 1e-15) {
      rep.log_bound_holds = false;
      break;
    }

  // Least squares slope on the second half.
  {
    const long a = std::max<long>(1, k_max / 2);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (long k = a; k <= k_max; ++k) {
      const double x = static_cast<double>(k), y = drift(k);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      n += 1;
    }
    const double den = n * sxx - sx * sx;
    rep.slope = den > 0 ? (n * sxy - sx * sy) / den : 0.0;
  }

  const int pts = std::max(2, opt.table_points);
  long last = 0;
  for (int i = 0; i < pts; ++i) {
    const long k = std::max<long>(1, std::lround(std::pow(km, static_cast<double>(i) / (pts - 1))));
    if (k == last) continue;
    last = k;
    rep.table.push_back({k, drift(k)});
  }

  if (opt.lambda_norm && opt.delta) {
    const double lam = *opt.lambda_norm, del = *opt.delta;
    const double anorm = norm(rep.alpha_ref);
    bool lower = true, upper = true;
    for (long k = 1; k <= k_max; ++k) {
      const double kd = static_cast<double>(k);
      if (drift(k) < kd * lam * (1 - del) + del * (lam - 2) - 1e-12) lower = false;
      if (norm(orbit[static_cast<size_t>(k)]) > kd * (lam + anorm + 2 * del) + 1e-12) upper = false;
    }
    rep.lower_bound_holds = lower;
    rep.upper_bound_holds = upper;
    if (lam > 0) {
      const double c = std::max(rep.fitted_c, 1e-300);
      for (long k = 1; k <= 1L << 40; k = k < 16 ? k + 1 : k + k / 16) {
        const double kd = static_cast<double>(k);
        if (kd * lam * (1 - del) + del * (lam - 2) > c * (std::log(kd) + 1)) {
          rep.incompatibility_k = k;
          break;
        }
      }
    }
  }
  return rep;
}

PlaneMap synthetic_q(P2 lambda, P2 alpha, const std::vector<PlaneMode>& h1_modes) {
  const PlaneMap h1 = perturbed_translation({0, 0}, h1_modes);
  return compose(translation_map(lambda), compose(inverse(h1), compose(translation_map(alpha), h1)));
}

}  // namespace tpa::linearization
