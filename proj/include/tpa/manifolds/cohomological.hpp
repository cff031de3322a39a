#pragma once

#include "tpa/dynamics/lift.hpp"

namespace tpa::manifolds {

// Bounded periodic solution of A^sigma phi - phi o F = psi^sigma, where
// psi = F - A and sigma is s or u:
//   phi^s = -sum_{k>=0} (A^s)^k psi^s o F^{-(k+1)}
//   phi^u = +sum_{k>=0} (A^u)^{-(k+1)} psi^u o F^k
// truncated after K terms. Values are vectors of R^N lying in E^sigma.
class CohomologicalSolution {
 public:
  CohomologicalSolution(const dynamics::TorusMapLift& map, dynamics::Subspace which, int terms);

  // Smallest K with rate^K < tol (rate = lambda_s, or 1/lambda_u).
  static int terms_for(const dynamics::TorusMapLift& map, dynamics::Subspace which, double tol);

  Vec operator()(const Vec& x) const;
  Vec psi(const Vec& x) const;
  double equation_residual(const Vec& x) const;

  dynamics::Subspace which() const { return which_; }
  int terms() const { return K_; }
  double rate() const;         // |A^s| or |(A^u)^{-1}| in the adapted norm
  double psi_sup_bound() const;  // analytic upper bound for |psi^sigma|_0
  // |phi|_0 <= |psi|_0 / (1 - |A^s|)  (s),  |psi|_0 |(A^u)^{-1}| / (1 - |(A^u)^{-1}|)  (u)
  double sup_bound() const;
  // Neglected tail: rate^K times sup_bound.
  double tail_bound() const;

 private:
  const dynamics::TorusMapLift* map_;
  dynamics::Subspace which_;
  int K_;
};

}  // namespace tpa::manifolds
