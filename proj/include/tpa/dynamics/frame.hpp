#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpa/dynamics/linalg.hpp"
#include "tpa/lattice/int_matrix.hpp"

namespace tpa::dynamics {

enum class Subspace { s, u, c, cs, cu, su };

Subspace parse_subspace(const std::string& name);
std::string to_string(Subspace s);

// One real invariant block of A: a real eigenvalue (size 1) or a complex
// pair rho e^{+-i theta} in the (Re v, Im v) basis (size 2).
struct SpectralBlock {
  int offset = 0;
  int size = 1;
  char kind = 's';  // 's', 'u' or 'c'
  double modulus = 0;
  double angle = 0;  // argument of the eigenvalue with nonnegative imaginary part
};

// Real block-diagonal coordinates y = T^{-1} x in which A acts as D with
// stable blocks first, then unstable, then center. The adapted norm is
// |x| = sum over blocks of the Euclidean norm of y_b; in it A|E^s has norm
// lambda_s, A^{-1}|E^u has norm 1/lambda_u and A|E^c is an exact isometry.
class SplittingFrame {
 public:
  int dim() const { return n_; }
  int s_dim() const { return s_; }
  int u_dim() const { return u_; }
  int c_dim() const { return c_; }
  double lambda_s() const { return lambda_s_; }
  double lambda_u() const { return lambda_u_; }
  // Center rotation angle (c = 2 only) and c1 = 2 cos(theta_c).
  std::optional<double> theta_c() const { return theta_c_; }
  std::optional<double> c1() const { return c1_; }

  const Mat& T() const { return T_; }
  const Mat& T_inv() const { return Tinv_; }
  const Mat& D() const { return D_; }
  const Mat& A() const { return A_; }
  const Mat& A_inv() const { return Ainv_; }
  const std::vector<SpectralBlock>& blocks() const { return blocks_; }

  // Number of adapted coordinates of a subspace (stable ones first, then
  // unstable, then center, within any composite).
  int count(Subspace s) const;

  Vec to_adapted(const Vec& x) const { return Tinv_ * x; }
  Vec from_adapted(const Vec& y) const { return T_ * y; }

  // Component of x in the named subspace (a vector of R^N).
  Vec project(const Vec& x, Subspace s) const;
  // Adapted coordinates of that component (length count(s)).
  Vec coords(const Vec& x, Subspace s) const;
  // Vector of R^N with the given coordinates in the named subspace.
  Vec embed(const Vec& coords, Subspace s) const;
  // Projector matrix T mask T^{-1}.
  Mat projector(Subspace s) const;

  double norm(const Vec& x) const;
  double norm(const Vec& x, Subspace s) const;
  // Norm of coordinates already expressed in the adapted basis of subspace s.
  double coords_norm(const Vec& y, Subspace s) const;
  // Dual norm of the functional v -> m.v: max over blocks of |(T^t m)_b|.
  double dual_norm(const Vec& m) const;
  // Operator norms of A and A^{-1} in the adapted norm.
  double A_norm() const;
  double A_inv_norm() const;

  // D^k restricted to a subspace, acting on adapted coordinates; k may be negative.
  Vec apply_power(const Vec& coords, Subspace s, int k) const;

 private:
  friend SplittingFrame build_splitting(const lattice::ToralMatrix& a);
  int n_ = 0, s_ = 0, u_ = 0, c_ = 0;
  double lambda_s_ = 0, lambda_u_ = 0;
  std::optional<double> theta_c_, c1_;
  Mat T_, Tinv_, D_, A_, Ainv_;
  std::vector<SpectralBlock> blocks_;
};

// Throws PreconditionFailed if A is not ergodic, InvalidInput on a repeated
// eigenvalue, Inconclusive if a hyperbolic modulus sits within 1e-9 of 1.
SplittingFrame build_splitting(const lattice::ToralMatrix& a);

Mat to_mat(const lattice::IntMatrix& m);

}  // namespace tpa::dynamics
