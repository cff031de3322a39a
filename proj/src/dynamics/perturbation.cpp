#include "tpa/dynamics/perturbation.hpp"

#include <cmath>

#include "tpa/errors.hpp"

namespace tpa::dynamics {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// m.x modulo 1, computed from the fractional parts so large |x| keeps full
// relative precision in the phase.
double phase_of(const Mode& md, const Vec& x) {
  double t = 0;
  for (int i = 0; i < x.size(); ++i) {
    double xi = x[i] - std::floor(x[i]);
    t += static_cast<double>(md.m[static_cast<size_t>(i)]) * xi;
  }
  return t - std::round(t);
}

double mnorm(const Mode& md) {
  double s = 0;
  for (long v : md.m) s += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(s);
}

void check_dims(const PerturbationSpec& p, const Vec& x) {
  for (const auto& md : p.modes)
    if (static_cast<int>(md.m.size()) != x.size() || md.amp.size() != x.size())
      throw InvalidInput("perturbation mode dimension does not match the point");
}

}  // namespace

Vec PerturbationSpec::eval(const Vec& x) const {
  check_dims(*this, x);
  Vec out = Vec::Zero(x.size());
  for (const auto& md : modes) out += md.amp * std::sin(kTwoPi * phase_of(md, x) + md.phase);
  return out;
}

Vec PerturbationSpec::eval_delta(const Vec& x, const Vec& d) const {
  check_dims(*this, x);
  Vec out = Vec::Zero(x.size());
  for (const auto& md : modes) {
    double md_d = 0;
    for (int i = 0; i < d.size(); ++i) md_d += static_cast<double>(md.m[static_cast<size_t>(i)]) * d[i];
    const double half = 0.5 * kTwoPi * md_d;
    // sin(t + 2h) - sin(t) = 2 cos(t + h) sin(h)
    out += md.amp * (2.0 * std::cos(kTwoPi * phase_of(md, x) + md.phase + half) * std::sin(half));
  }
  return out;
}

Mat PerturbationSpec::jacobian(const Vec& x) const {
  check_dims(*this, x);
  const int n = static_cast<int>(x.size());
  Mat out = Mat::Zero(n, n);
  for (const auto& md : modes) {
    double c = kTwoPi * std::cos(kTwoPi * phase_of(md, x) + md.phase);
    for (int j = 0; j < n; ++j) out.col(j) += md.amp * (c * static_cast<double>(md.m[static_cast<size_t>(j)]));
  }
  return out;
}

double PerturbationSpec::cr_bound(int r) const {
  double total = 0;
  for (const auto& md : modes) total += md.amp.norm() * std::pow(kTwoPi * mnorm(md), r);
  return total;
}

PerturbationSpec PerturbationSpec::scaled(double factor) const {
  PerturbationSpec out = *this;
  for (auto& md : out.modes) md.amp *= factor;
  return out;
}

std::vector<std::string> perturbation_preset_names() { return {"zero", "single", "double", "conjugate"}; }

PerturbationSpec perturbation_preset(const std::string& name, int dim, double eps) {
  if (dim < 2) throw InvalidInput("perturbation presets need dimension >= 2");
  if (!(eps >= 0)) throw InvalidInput("eps must be nonnegative");
  const size_t n = static_cast<size_t>(dim);
  auto direction = [&](double a, double b, auto trig) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = trig(a * i + b);
    return Vec(v / v.norm());
  };
  auto mode = [&](std::vector<long> m, Vec dir, double c1) {
    Mode md{std::move(m), dir, 0.0};
    md.amp = dir * (c1 / (kTwoPi * mnorm(md)));
    return md;
  };
  std::vector<long> m1(n, 0), m2(n, 0);
  m1[0] = 1;
  m1[n - 1] = 1;
  m2[1] = 1;
  m2[n > 2 ? 2 : 0] = -1;
  auto cosf = [](double t) { return std::cos(t); };
  auto sinf = [](double t) { return std::sin(t); };

  PerturbationSpec p;
  if (name == "zero") return p;
  if (name == "single") {
    p.modes.push_back(mode(m1, direction(1.3, 0.4, cosf), eps));
  } else if (name == "double") {
    p.modes.push_back(mode(m1, direction(1.3, 0.4, cosf), eps / 2));
    p.modes.push_back(mode(m2, direction(0.7, 1.1, sinf), eps / 2));
  } else if (name == "conjugate") {
    p.kind = PerturbationKind::conjugate;
    p.modes.push_back(mode(m1, direction(0.9, 0.2, sinf), eps));
  } else {
    throw InvalidInput("unknown perturbation preset '" + name + "'");
  }
  return p;
}

}  // namespace tpa::dynamics
