#include "tpa/lattice/int_matrix.hpp"

#include <utility>

#include "tpa/errors.hpp"

namespace tpa::lattice {

IntMatrix::IntMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols), Int(0)) {
  if (rows < 0 || cols < 0) throw InvalidInput("negative matrix shape");
}

IntMatrix::IntMatrix(const std::vector<std::vector<long>>& rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows[0].size());
  a_.reserve(static_cast<size_t>(rows_ * cols_));
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw InvalidInput("ragged matrix rows");
    for (long v : r) a_.emplace_back(v);
  }
}

IntMatrix::IntMatrix(std::vector<std::vector<Int>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows[0].size());
  a_.reserve(static_cast<size_t>(rows_ * cols_));
  for (auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw InvalidInput("ragged matrix rows");
    for (auto& v : r) a_.push_back(std::move(v));
  }
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::companion(const IntPolynomial& p) {
  if (!p.is_monic() || p.degree() < 1) throw InvalidInput("companion matrix needs a monic polynomial of degree >= 1");
  const int n = p.degree();
  IntMatrix m(n, n);
  for (int i = 0; i + 1 < n; ++i) m(i + 1, i) = 1;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -p.coeff(i);
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& cols) {
  const int n = cols.empty() ? 0 : static_cast<int>(cols[0].size());
  IntMatrix m(n, static_cast<int>(cols.size()));
  for (int j = 0; j < m.cols(); ++j) {
    if (static_cast<int>(cols[static_cast<size_t>(j)].size()) != n) throw InvalidInput("column length mismatch");
    for (int i = 0; i < n; ++i) m(i, j) = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
  }
  return m;
}

IntVector IntMatrix::column(int j) const {
  IntVector v(static_cast<size_t>(rows_));
  for (int i = 0; i < rows_; ++i) v[static_cast<size_t>(i)] = (*this)(i, j);
  return v;
}

IntVector IntMatrix::apply(const IntVector& v) const {
  if (static_cast<int>(v.size()) != cols_) throw InvalidInput("vector length mismatch");
  IntVector out(static_cast<size_t>(rows_), Int(0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[static_cast<size_t>(i)] += (*this)(i, j) * v[static_cast<size_t>(j)];
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw InvalidInput("matrix product shape mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const Int& aik = a(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<std::vector<double>> IntMatrix::to_double() const {
  std::vector<std::vector<double>> out(static_cast<size_t>(rows_), std::vector<double>(static_cast<size_t>(cols_)));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[static_cast<size_t>(i)][static_cast<size_t>(j)] = (*this)(i, j).get_d();
  return out;
}

Int determinant(const IntMatrix& m0) {
  if (!m0.square()) throw InvalidInput("determinant of a non-square matrix");
  const int n = m0.rows();
  if (n == 0) return Int(1);
  IntMatrix m = m0;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      int p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return Int(0);
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Int t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

namespace {

// Berkowitz: det(tI - M) coefficients from the highest power down.
std::vector<Int> berkowitz(const IntMatrix& m) {
  const int n = m.rows();
  if (n == 0) return {Int(1)};
  if (n == 1) return {Int(1), -m(0, 0)};
  IntMatrix sub(n - 1, n - 1);
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) sub(i - 1, j - 1) = m(i, j);
  std::vector<Int> diags;
  diags.reserve(static_cast<size_t>(n) + 1);
  diags.emplace_back(1);
  diags.push_back(-m(0, 0));
  IntVector col(static_cast<size_t>(n - 1));
  for (int i = 1; i < n; ++i) col[static_cast<size_t>(i - 1)] = m(i, 0);
  for (int p = 0; p <= n - 2; ++p) {
    Int dot = 0;
    for (int j = 1; j < n; ++j) dot += m(0, j) * col[static_cast<size_t>(j - 1)];
    diags.push_back(-dot);
    if (p < n - 2) col = sub.apply(col);
  }
  std::vector<Int> inner = berkowitz(sub);
  std::vector<Int> out(static_cast<size_t>(n) + 1, Int(0));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j < n && j <= i; ++j) out[static_cast<size_t>(i)] += diags[static_cast<size_t>(i - j)] * inner[static_cast<size_t>(j)];
  return out;
}

}  // namespace

IntPolynomial characteristic_polynomial(const IntMatrix& m) {
  if (!m.square()) throw InvalidInput("characteristic polynomial of a non-square matrix");
  std::vector<Int> hi = berkowitz(m);
  return IntPolynomial(std::vector<Int>(hi.rbegin(), hi.rend()));
}

std::vector<std::vector<Rat>> rational_solve(const IntMatrix& m, const IntMatrix& rhs) {
  if (!m.square() || rhs.rows() != m.rows()) throw InvalidInput("rational_solve shape mismatch");
  const int n = m.rows(), k = rhs.cols();
  std::vector<std::vector<Rat>> a(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n + k)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rat(m(i, j));
    for (int j = 0; j < k; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(n + j)] = Rat(rhs(i, j));
  }
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && a[static_cast<size_t>(p)][static_cast<size_t>(c)] == 0) ++p;
    if (p == n) throw InvalidInput("singular matrix in rational_solve");
    std::swap(a[static_cast<size_t>(p)], a[static_cast<size_t>(c)]);
    Rat piv = a[static_cast<size_t>(c)][static_cast<size_t>(c)];
    for (auto& x : a[static_cast<size_t>(c)]) x /= piv;
    for (int i = 0; i < n; ++i) {
      if (i == c) continue;
      Rat f = a[static_cast<size_t>(i)][static_cast<size_t>(c)];
      if (f == 0) continue;
      for (int j = c; j < n + k; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(c)][static_cast<size_t>(j)];
    }
  }
  std::vector<std::vector<Rat>> x(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(k)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) x[static_cast<size_t>(i)][static_cast<size_t>(j)] = a[static_cast<size_t>(i)][static_cast<size_t>(n + j)];
  return x;
}

ToralMatrix::ToralMatrix(IntMatrix m) : m_(std::move(m)) {
  if (!m_.square() || m_.rows() == 0) throw InvalidInput("toral matrix must be square and nonempty");
  det_ = determinant(m_);
  if (abs(det_) != 1) throw InvalidInput("toral matrix must have determinant +-1, got " + det_.get_str());
}

ToralMatrix ToralMatrix::inverse() const {
  auto x = rational_solve(m_, IntMatrix::identity(dim()));
  IntMatrix inv(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) {
      const Rat& q = x[static_cast<size_t>(i)][static_cast<size_t>(j)];
      inv(i, j) = q.get_num();  // denominators are 1 since |det| = 1
    }
  return ToralMatrix(std::move(inv));
}

ToralMatrix ToralMatrix::power(long l) const {
  IntMatrix base = l < 0 ? inverse().m_ : m_;
  unsigned long e = static_cast<unsigned long>(l < 0 ? -l : l);
  IntMatrix out = IntMatrix::identity(dim());
  while (e > 0) {
    if (e & 1UL) out = out * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return ToralMatrix(std::move(out));
}

IntPolynomial char_poly(const ToralMatrix& a) { return characteristic_polynomial(a.matrix()); }

}  // namespace tpa::lattice
