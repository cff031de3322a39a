#include "tpa/lattice/numeric_roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "tpa/errors.hpp"

namespace tpa::lattice {

std::vector<std::complex<long double>> numerical_roots(const IntPolynomial& p) {
  const int n = p.degree();
  if (n < 1) throw InvalidInput("numerical_roots needs degree >= 1");
  const double lc = p.leading().get_d();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) c(i + 1, i) = 1.0;
  for (int i = 0; i < n; ++i) c(i, n - 1) = -p.coeff(i).get_d() / lc;
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  if (es.info() != Eigen::Success) throw NumericalFailure("companion eigensolve failed");
  const IntPolynomial dp = p.derivative();
  std::vector<std::complex<long double>> roots;
  roots.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::complex<long double> z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    long double best = std::abs(p.eval(z));
    for (int it = 0; it < 8 && best > 0; ++it) {
      auto d = dp.eval(z);
      if (std::abs(d) == 0) break;
      auto z2 = z - p.eval(z) / d;
      long double r2 = std::abs(p.eval(z2));
      if (!(r2 < best)) break;
      z = z2;
      best = r2;
    }
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    long double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    return std::arg(a) < std::arg(b);
  });
  return roots;
}

}  // namespace tpa::lattice
