#include "tpa/lattice/construct.hpp"

#include "tpa/errors.hpp"
#include "tpa/lattice/factor.hpp"
#include "tpa/lattice/trace.hpp"

namespace tpa::lattice {

IntPolynomial palindromic_from_trace(const IntPolynomial& q) {
  const int r = q.degree();
  if (r < 1) throw InvalidInput("trace polynomial must have degree >= 1");
  TracePair tp = trace_pair(r);
  std::vector<Int> p(static_cast<size_t>(2 * r) + 1, Int(0));
  auto at = [&](int k) -> Int& { return p[static_cast<size_t>(k)]; };
  // The system is unit upper-triangular in p_{r+1}..p_{2r}: [z^j] R_j = 1.
  for (int j = r; j >= 1; --j) {
    Int v = q.coeff(j);
    for (int k = j + 1; k <= r; ++k) v -= at(r + k) * tp.R[static_cast<size_t>(k)].coeff(j);
    at(r + j) = v;
  }
  Int v = q.coeff(0);
  for (int k = 1; k <= r; ++k) v -= at(r + k) * tp.R[static_cast<size_t>(k)].coeff(0);
  at(r) = v;
  for (int k = 1; k <= r; ++k) at(r - k) = at(r + k);
  return IntPolynomial(std::move(p));
}

ConstructedAutomorphism construct_pseudo_anosov(int d) {
  if (d < 3) throw InvalidInput("construct_pseudo_anosov needs d >= 3");
  IntPolynomial q;
  if (d % 2 == 1) {
    q = IntPolynomial::monomial(Int(1), d) - IntPolynomial::constant(2);
  } else {
    Int c;
    mpz_ui_pow_ui(c.get_mpz_t(), 2, static_cast<unsigned long>(d - 1));
    c *= d;
    q = IntPolynomial::monomial(Int(1), d) - IntPolynomial::monomial(c, 1) + IntPolynomial::constant(2);
  }
  IntPolynomial p = palindromic_from_trace(q);
  return {d, ToralMatrix(IntMatrix::companion(p)), p, q};
}

namespace {

IntMatrix krylov(const IntMatrix& m, const IntVector& n) {
  std::vector<IntVector> cols;
  cols.push_back(n);
  for (int i = 1; i < m.rows(); ++i) cols.push_back(m.apply(cols.back()));
  return IntMatrix::from_columns(cols);
}

void require_nonzero(const ToralMatrix& a, const IntVector& n) {
  if (static_cast<int>(n.size()) != a.dim()) throw InvalidInput("lattice vector has the wrong dimension");
  bool any = false;
  for (const auto& x : n) any |= x != 0;
  if (!any) throw InvalidInput("lattice vector must be nonzero");
}

}  // namespace

CompanionNormalization companion_normalize(const ToralMatrix& a, const IntVector& n) {
  require_nonzero(a, n);
  IntMatrix L = krylov(a.matrix(), n);
  Int det = determinant(L);
  if (det == 0) throw InvalidInput("vectors n, An, ..., A^{N-1}n are linearly dependent");
  auto x = rational_solve(L, a.matrix() * L);
  IntMatrix b(a.dim(), a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      const Rat& v = x[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (v.get_den() != 1) throw std::logic_error("companion normalization produced a non-integer entry");
      b(i, j) = v.get_num();
    }
  return {ToralMatrix(std::move(b)), std::move(L), det};
}

LatticeRank lattice_rank_check(const ToralMatrix& a, const IntVector& n, long l) {
  require_nonzero(a, n);
  if (l == 0) throw InvalidInput("lattice_rank_check needs l != 0");
  Int det = determinant(krylov(a.power(l).matrix(), n));
  return {det != 0, det};
}

std::vector<PowerIrreducibility> power_irreducibility_check(const ToralMatrix& a, long l_max) {
  if (l_max < 1) throw InvalidInput("power_irreducibility_check needs l_max >= 1");
  std::vector<PowerIrreducibility> out;
  ToralMatrix al = a;
  for (long l = 1; l <= l_max; ++l) {
    IntPolynomial p = char_poly(al);
    out.push_back({l, is_irreducible(p), p});
    if (l < l_max) al = ToralMatrix(al.matrix() * a.matrix());
  }
  return out;
}

}  // namespace tpa::lattice
