#include "tpa/linearization/center_conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tpa/errors.hpp"
#include "tpa/util/parallel.hpp"

namespace tpa::linearization {

using dynamics::PerturbationKind;
using dynamics::Subspace;

CenterConjugacy::CenterConjugacy(const TorusMapLift& map, CenterChart h2, const ManifoldEvalConfig& cfg,
                                 const CenterConjugacyOptions& opt)
    : map_(&map), h2_(std::move(h2)), cfg_(cfg), opt_(opt) {
  if (!h2_) throw InvalidInput("center chart is empty");
  if (map.frame().c_dim() == 0) throw InvalidInput("center conjugacy needs a center direction");
  const auto& fr = map.frame();
  const auto as = holonomy::parameter_grid(fr.count(Subspace::s), opt.accessibility_range, opt.accessibility_points);
  const auto bs = holonomy::parameter_grid(fr.count(Subspace::u), opt.accessibility_range, opt.accessibility_points);
  access_ = holonomy::accessibility_probe(map, Vec::Zero(map.dim()), as, bs, cfg, opt.workers);
  if (!access_.trivial())
    throw PreconditionFailed("accessibility evidence is not trivial (class diameter " +
                             std::to_string(access_.diameter) + "); H2 is not defined");
}

Vec CenterConjugacy::hc(const Vec& x) const {
  return h2_(holonomy::project_su(*map_, x, cfg_).center);
}

Vec CenterConjugacy::H2(const Vec& x) const {
  const auto& fr = map_->frame();
  return fr.project(x, Subspace::s) + fr.project(x, Subspace::u) + fr.embed(hc(x), Subspace::c);
}

CenterConjugacyAudit CenterConjugacy::audit() const {
  const auto& fr = map_->frame();
  const int N = map_->dim();
  CenterConjugacyAudit out;
  out.accessibility = access_;
  out.max_residual = access_.accumulated_residual;
  std::mt19937_64 rng(opt_.seed);
  std::uniform_int_distribution<long> lat(-opt_.lattice_radius, opt_.lattice_radius);
  std::uniform_real_distribution<double> unit(0, 1), box(-opt_.pair_box, opt_.pair_box);
  auto rand_n = [&] {
    Vec n(N);
    for (int i = 0; i < N; ++i) n[i] = static_cast<double>(lat(rng));
    return n;
  };
  // Draw everything up front so results do not depend on the worker count.
  std::vector<Vec> lattice, eq_x, eq_n, px, py;
  for (int i = 0; i < opt_.lattice_points; ++i) lattice.push_back(rand_n());
  for (int i = 0; i < opt_.equivariance_checks; ++i) {
    Vec x(N);
    for (int k = 0; k < N; ++k) x[k] = unit(rng);
    eq_x.push_back(x);
    eq_n.push_back(rand_n());
  }
  for (int i = 0; i < opt_.lipschitz_pairs; ++i) {
    Vec x(N), y(N);
    for (int k = 0; k < N; ++k) x[k] = box(rng);
    for (int k = 0; k < N; ++k) y[k] = box(rng);
    px.push_back(x);
    py.push_back(y);
  }

  std::vector<double> conj(lattice.size()), res(lattice.size());
  util::parallel_for(lattice.size(), opt_.workers, [&](size_t i) {
    const holonomy::SuProjection p = holonomy::project_su(*map_, lattice[i], cfg_);
    const Vec lhs = hc(map_->F(p.point));
    const Vec rhs = fr.apply_power(h2_(p.center), Subspace::c, 1);
    conj[i] = fr.coords_norm(lhs - rhs, Subspace::c);
    res[i] = p.residual;
  });
  std::vector<double> eq(eq_x.size());
  util::parallel_for(eq_x.size(), opt_.workers, [&](size_t i) {
    eq[i] = fr.coords_norm(hc(eq_x[i] + eq_n[i]) - hc(eq_x[i]) - fr.coords(eq_n[i], Subspace::c), Subspace::c);
  });
  std::vector<double> lip(px.size());
  util::parallel_for(px.size(), opt_.workers,
                     [&](size_t i) { lip[i] = fr.norm(H2(px[i]) - H2(py[i])) / fr.norm(px[i] - py[i]); });

  for (size_t i = 0; i < conj.size(); ++i) {
    out.conjugacy_residual = std::max(out.conjugacy_residual, conj[i]);
    out.max_residual = std::max(out.max_residual, res[i]);
  }
  for (double e : eq) out.equivariance_residual = std::max(out.equivariance_residual, e);
  if (!lip.empty()) {
    out.lip_min = *std::min_element(lip.begin(), lip.end());
    out.lip_max = *std::max_element(lip.begin(), lip.end());
    out.C0 = std::max(out.lip_max, out.lip_min > 0 ? 1 / out.lip_min : std::numeric_limits<double>::infinity());
  }
  return out;
}

CenterChart identity_chart() {
  return [](const Vec& w) { return w; };
}

CenterChart exact_chart(const TorusMapLift& map, const ManifoldEvalConfig& cfg) {
  if (!map.is_linear() && map.perturbation().kind != PerturbationKind::conjugate)
    throw InvalidInput("an exact center chart is only known for the conjugate perturbation kind");
  const TorusMapLift* m = &map;
  return [m, cfg](const Vec& w) {
    const auto& fr = m->frame();
    const Vec q = manifolds::manifold_point(*m, Subspace::c, Vec::Zero(m->dim()), w, cfg).point;
    return Vec(fr.coords(m->H_inv(q), Subspace::c));
  };
}

}  // namespace tpa::linearization
