#include "tpa/linearization/small_divisor.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "tpa/errors.hpp"
#include "tpa/simd/kernels.hpp"

namespace tpa::linearization {

namespace {

long l1(const std::array<long, 2>& j) { return std::labs(j[0]) + std::labs(j[1]); }

double coeff_norm(const std::vector<std::complex<double>>& v) {
  double s = 0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

SmallDivisorField SmallDivisorField::from_half(int components, const std::vector<FourierCoeff>& half) {
  SmallDivisorField f;
  f.components = components;
  std::map<std::array<long, 2>, size_t> seen;
  for (const auto& m : half) {
    if (m.j[0] == 0 && m.j[1] == 0) throw InvalidInput("SmallDivisorField: zero mode (mean) not allowed");
    if (static_cast<int>(m.value.size()) != components) throw InvalidInput("SmallDivisorField: component count mismatch");
    const std::array<long, 2> neg{-m.j[0], -m.j[1]};
    if (seen.count(m.j) || seen.count(neg)) throw InvalidInput("SmallDivisorField: repeated mode");
    seen[m.j] = f.modes.size();
    f.modes.push_back(m);
    FourierCoeff c;
    c.j = neg;
    for (const auto& z : m.value) c.value.push_back(std::conj(z));
    f.modes.push_back(c);
  }
  return f;
}

SmallDivisorField SmallDivisorField::random(int components, int half_modes, long max_j, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(-max_j, max_j);
  std::normal_distribution<double> g;
  std::map<std::array<long, 2>, bool> used;
  std::vector<FourierCoeff> half;
  long attempts = 0;
  while (static_cast<int>(half.size()) < half_modes) {
    if (++attempts > 100L * half_modes + 1000) throw InvalidInput("SmallDivisorField::random: support too small");
    std::array<long, 2> j{pick(rng), pick(rng)};
    if (l1(j) == 0 || l1(j) > max_j) continue;
    if (j[0] < 0 || (j[0] == 0 && j[1] < 0)) j = {-j[0], -j[1]};
    if (used.count(j)) continue;
    used[j] = true;
    FourierCoeff c;
    c.j = j;
    for (int i = 0; i < components; ++i) c.value.emplace_back(g(rng), g(rng));
    half.push_back(c);
  }
  return from_half(components, half);
}

bool SmallDivisorField::real_valued(double tol) const {
  std::map<std::array<long, 2>, const FourierCoeff*> idx;
  for (const auto& m : modes) idx[m.j] = &m;
  for (const auto& m : modes) {
    auto it = idx.find({-m.j[0], -m.j[1]});
    if (it == idx.end()) return false;
    for (size_t i = 0; i < m.value.size(); ++i)
      if (std::abs(m.value[i] - std::conj(it->second->value[i])) > tol) return false;
  }
  return true;
}

std::vector<double> SmallDivisorField::eval(std::array<double, 2> x) const {
  std::vector<double> out(static_cast<size_t>(components), 0.0);
  for (const auto& m : modes) {
    const double t = 2 * std::numbers::pi * (static_cast<double>(m.j[0]) * x[0] + static_cast<double>(m.j[1]) * x[1]);
    const std::complex<double> e(std::cos(t), std::sin(t));
    for (size_t i = 0; i < out.size(); ++i) out[i] += (m.value[i] * e).real();
  }
  return out;
}

double SmallDivisorField::norm(double r) const {
  double s = 0;
  for (const auto& m : modes) s += coeff_norm(m.value) * std::pow(static_cast<double>(l1(m.j)), r);
  return s;
}

long SmallDivisorField::max_j() const {
  long mx = 0;
  for (const auto& m : modes) mx = std::max(mx, l1(m.j));
  return mx;
}

std::vector<double> divisor_symbols(std::array<double, 2> alpha1, std::array<double, 2> alpha2,
                                    const SmallDivisorField& field) {
  const std::uint64_t a1[2] = {simd::encode_fraction(alpha1[0]), simd::encode_fraction(alpha1[1])};
  const std::uint64_t a2[2] = {simd::encode_fraction(alpha2[0]), simd::encode_fraction(alpha2[1])};
  const size_t n = field.modes.size();
  std::vector<std::int32_t> j1(n), j2(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& j = field.modes[i].j;
    if (std::labs(j[0]) > std::numeric_limits<std::int32_t>::max() || std::labs(j[1]) > std::numeric_limits<std::int32_t>::max())
      throw InvalidInput("divisor_symbols: frequency out of range");
    j1[i] = static_cast<std::int32_t>(j[0]);
    j2[i] = static_cast<std::int32_t>(j[1]);
  }
  std::vector<double> mu(n);
  simd::divisor_symbol(a1, a2, j1.data(), j2.data(), n, mu.data());
  return mu;
}

SmallDivisorField apply_divisor_operator(std::array<double, 2> alpha1, std::array<double, 2> alpha2,
                                         const SmallDivisorField& u) {
  const auto mu = divisor_symbols(alpha1, alpha2, u);
  SmallDivisorField out = u;
  for (size_t i = 0; i < out.modes.size(); ++i)
    for (auto& z : out.modes[i].value) z *= mu[i];
  return out;
}

SmallDivisorResult small_divisor_solve(std::array<double, 2> alpha1, std::array<double, 2> alpha2,
                                       const SmallDivisorField& v, double r, double guard) {
  const auto mu = divisor_symbols(alpha1, alpha2, v);
  SmallDivisorResult res;
  res.r = r;
  res.u = v;
  res.mu_min = std::numeric_limits<double>::infinity();
  res.divisor_floor = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < v.modes.size(); ++i) {
    if (!(mu[i] >= guard)) throw NumericalFailure("small_divisor_solve: resonant mode inside the support");
    res.mu_min = std::min(res.mu_min, mu[i]);
    const double lj = static_cast<double>(l1(v.modes[i].j));
    res.divisor_floor = std::min(res.divisor_floor, mu[i] * lj * lj);
    for (auto& z : res.u.modes[i].value) z /= mu[i];
  }
  res.u_norm_r = res.u.norm(r);
  res.v_norm_sigma_plus_r = v.norm(res.sigma + r);
  res.tame_ratio = res.v_norm_sigma_plus_r > 0 ? res.u_norm_r / res.v_norm_sigma_plus_r : 0.0;
  return res;
}

}  // namespace tpa::linearization
