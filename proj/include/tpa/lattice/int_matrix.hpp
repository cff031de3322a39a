#pragma once

#include <vector>

#include "tpa/lattice/int_poly.hpp"

namespace tpa::lattice {

using IntVector = std::vector<Int>;

// Dense exact integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols);
  explicit IntMatrix(const std::vector<std::vector<long>>& rows);
  explicit IntMatrix(std::vector<std::vector<Int>> rows);

  static IntMatrix identity(int n);
  // Companion matrix of a monic polynomial: A e_i = e_{i+1}, A e_N = -sum p_{i-1} e_i.
  static IntMatrix companion(const IntPolynomial& monic);
  // Matrix whose columns are the given vectors.
  static IntMatrix from_columns(const std::vector<IntVector>& cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Int& operator()(int i, int j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
  const Int& operator()(int i, int j) const { return a_[static_cast<size_t>(i * cols_ + j)]; }

  IntVector column(int j) const;
  IntVector apply(const IntVector& v) const;
  IntMatrix transpose() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const IntMatrix& a, const IntMatrix& b) { return !(a == b); }

  std::vector<std::vector<double>> to_double() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

// Fraction-free (Bareiss) determinant.
Int determinant(const IntMatrix& m);

// Division-free characteristic polynomial det(tI - m) (Berkowitz).
IntPolynomial characteristic_polynomial(const IntMatrix& m);

// Exact rational solve of m X = rhs; m must be nonsingular.
std::vector<std::vector<Rat>> rational_solve(const IntMatrix& m, const IntMatrix& rhs);

// Integer matrix with |det| = 1, i.e. an automorphism of the torus.
class ToralMatrix {
 public:
  explicit ToralMatrix(IntMatrix m);
  ToralMatrix(const std::vector<std::vector<long>>& rows) : ToralMatrix(IntMatrix(rows)) {}

  static ToralMatrix identity(int n) { return ToralMatrix(IntMatrix::identity(n)); }

  int dim() const { return m_.rows(); }
  const IntMatrix& matrix() const { return m_; }
  const Int& operator()(int i, int j) const { return m_(i, j); }
  const Int& det() const { return det_; }

  ToralMatrix inverse() const;
  // A^l for any integer l.
  ToralMatrix power(long l) const;

  friend bool operator==(const ToralMatrix& a, const ToralMatrix& b) { return a.m_ == b.m_; }

 private:
  IntMatrix m_;
  Int det_;
};

IntPolynomial char_poly(const ToralMatrix& a);

}  // namespace tpa::lattice
