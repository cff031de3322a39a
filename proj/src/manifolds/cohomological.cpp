#include "tpa/manifolds/cohomological.hpp"

#include <cmath>

#include "tpa/errors.hpp"

namespace tpa::manifolds {

using dynamics::Subspace;
using dynamics::TorusMapLift;

CohomologicalSolution::CohomologicalSolution(const TorusMapLift& map, Subspace which, int terms)
    : map_(&map), which_(which), K_(terms) {
  if (which != Subspace::s && which != Subspace::u) throw InvalidInput("cohomological_solve needs s or u");
  if (terms < 1) throw InvalidInput("truncation must keep at least one term");
}

int CohomologicalSolution::terms_for(const TorusMapLift& map, Subspace which, double tol) {
  const auto& fr = map.frame();
  const double rate = which == Subspace::s ? fr.lambda_s() : 1.0 / fr.lambda_u();
  return std::max(1, static_cast<int>(std::ceil(std::log(tol) / std::log(rate))));
}

double CohomologicalSolution::rate() const {
  const auto& fr = map_->frame();
  return which_ == Subspace::s ? fr.lambda_s() : 1.0 / fr.lambda_u();
}

Vec CohomologicalSolution::psi(const Vec& x) const {
  const Vec r = TorusMapLift::reduce(x);
  return map_->frame().project(map_->F(r) - map_->frame().A() * r, which_);
}

Vec CohomologicalSolution::operator()(const Vec& x) const {
  const auto& fr = map_->frame();
  Vec acc = Vec::Zero(fr.count(which_));
  if (map_->is_linear()) return Vec::Zero(map_->dim());
  Vec y = TorusMapLift::reduce(x);
  for (int k = 0; k < K_; ++k) {
    if (which_ == Subspace::s) {
      y = TorusMapLift::reduce(map_->F_inv(y));
      acc -= fr.apply_power(fr.coords(psi(y), which_), which_, k);
    } else {
      acc += fr.apply_power(fr.coords(psi(y), which_), which_, -(k + 1));
      y = TorusMapLift::reduce(map_->F(y));
    }
  }
  return fr.embed(acc, which_);
}

double CohomologicalSolution::equation_residual(const Vec& x) const {
  const auto& fr = map_->frame();
  const Vec lhs = fr.A() * (*this)(x) - (*this)(map_->F(TorusMapLift::reduce(x)));
  return fr.norm(lhs - psi(x));
}

double CohomologicalSolution::psi_sup_bound() const {
  const auto& fr = map_->frame();
  double s = 0;
  for (const auto& md : map_->perturbation().modes) s += fr.norm(md.amp, which_);
  // conjugate kind: psi = xi(A u) - A xi(u) with u = H^{-1}(x)
  if (map_->perturbation().kind == dynamics::PerturbationKind::conjugate) s *= 1.0 + fr.A_norm();
  return s;
}

double CohomologicalSolution::sup_bound() const {
  const double r = rate();
  return which_ == Subspace::s ? psi_sup_bound() / (1 - r) : psi_sup_bound() * r / (1 - r);
}

double CohomologicalSolution::tail_bound() const { return std::pow(rate(), K_) * sup_bound(); }

}  // namespace tpa::manifolds
