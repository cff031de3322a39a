#include "tpa/dynamics/frame.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "tpa/errors.hpp"
#include "tpa/lattice/classify.hpp"
#include "tpa/lattice/numeric_roots.hpp"

namespace tpa::dynamics {

Subspace parse_subspace(const std::string& name) {
  if (name == "s") return Subspace::s;
  if (name == "u") return Subspace::u;
  if (name == "c") return Subspace::c;
  if (name == "cs") return Subspace::cs;
  if (name == "cu") return Subspace::cu;
  if (name == "su") return Subspace::su;
  throw InvalidInput("unknown subspace '" + name + "'");
}

std::string to_string(Subspace s) {
  switch (s) {
    case Subspace::s: return "s";
    case Subspace::u: return "u";
    case Subspace::c: return "c";
    case Subspace::cs: return "cs";
    case Subspace::cu: return "cu";
    case Subspace::su: return "su";
  }
  return "?";
}

Mat to_mat(const lattice::IntMatrix& m) {
  Mat out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

namespace {

using cplx = std::complex<double>;
using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using CVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

struct Eig {
  std::complex<long double> value;
  bool real;
  char kind = 's';
};

// Two steps of inverse iteration from a fixed generic start vector.
CVec eigenvector(const Mat& a, cplx lambda) {
  const int n = static_cast<int>(a.rows());
  CMat m = a.cast<cplx>();
  for (int i = 0; i < n; ++i) m(i, i) -= lambda;
  CVec x(n);
  for (int i = 0; i < n; ++i) x[i] = cplx(1.0 + 0.37 * i, 0.11 * (i % 3));
  for (int attempt = 0; attempt < 4; ++attempt) {
    Eigen::PartialPivLU<CMat> lu(m);
    CVec y = x;
    bool ok = true;
    for (int it = 0; it < 2 && ok; ++it) {
      y = lu.solve(y);
      double nrm = y.norm();
      ok = std::isfinite(nrm) && nrm > 0;
      if (ok) y /= nrm;
    }
    if (ok) return y;
    // Exactly singular in floating point: nudge the shift and retry.
    for (int i = 0; i < n; ++i) m(i, i) -= cplx(1e-13 * std::max(1.0, std::abs(lambda)), 0);
  }
  throw NumericalFailure("inverse iteration failed to produce an eigenvector");
}

// Refine a root of Q in (-2, 2) by Newton in long double.
long double refine_trace_root(const lattice::IntPolynomial& q, long double c) {
  const auto dq = q.derivative();
  for (int it = 0; it < 60; ++it) {
    long double f = q.eval(c), d = dq.eval(c);
    if (d == 0) break;
    long double step = f / d;
    c -= step;
    if (std::fabs(step) < 1e-19L) break;
  }
  return c;
}

}  // namespace

SplittingFrame build_splitting(const lattice::ToralMatrix& a) {
  const auto cls = lattice::classify(a);
  if (!cls.ergodic) throw PreconditionFailed("splitting needs an ergodic matrix (no root-of-unity eigenvalue)");
  const int n = a.dim();
  if (n > kMaxDim) throw InvalidInput("dimension exceeds 16");
  auto roots = lattice::numerical_roots(cls.char_poly);

  // Distinct eigenvalues only: the spectrum must be simple.
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) <= 1e-9L * std::max(1.0L, std::abs(roots[i])))
        throw InvalidInput("splitting needs a simple spectrum");

  std::vector<Eig> eig;
  int used = 0;
  for (const auto& z : roots) {
    long double tol = 1e-9L * std::max(1.0L, std::abs(z));
    if (std::fabs(z.imag()) <= tol) {
      eig.push_back({{z.real(), 0.0L}, true});
      ++used;
    } else if (z.imag() > 0) {
      eig.push_back({z, false});
      used += 2;
    }
  }
  if (used != n) throw NumericalFailure("could not pair the numerical spectrum into real blocks");

  // The center_dim eigenvalues closest to the circle are the center.
  std::vector<size_t> order(eig.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto gap = [&](size_t i) { return std::fabs(std::abs(eig[i].value) - 1.0L); };
  std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) { return gap(x) < gap(y); });
  int center_left = cls.center_dim;
  for (size_t i : order) {
    int sz = eig[i].real ? 1 : 2;
    if (center_left > 0) {
      if (gap(i) > 1e-6L) throw NumericalFailure("numerical center eigenvalue is far from the unit circle");
      eig[i].kind = 'c';
      center_left -= sz;
    } else {
      if (gap(i) <= 1e-9L) throw Inconclusive("hyperbolic eigenvalue modulus within 1e-9 of 1");
      eig[i].kind = std::abs(eig[i].value) < 1.0L ? 's' : 'u';
    }
  }

  // Center eigenvalues lie exactly on the circle; use the trace root when available.
  for (auto& e : eig) {
    if (e.kind != 'c') continue;
    long double c = 2.0L * e.value.real();
    if (cls.trace_q) c = refine_trace_root(*cls.trace_q, c);
    long double cs = c / 2.0L;
    long double sn = std::sqrt(std::max(0.0L, 1.0L - cs * cs));
    e.value = {cs, sn};
  }

  auto key = [](const Eig& e) { return std::make_pair(static_cast<double>(std::abs(e.value)), static_cast<double>(std::arg(e.value))); };
  std::vector<Eig> sorted;
  for (char k : {'s', 'u', 'c'}) {
    std::vector<Eig> part;
    for (const auto& e : eig)
      if (e.kind == k) part.push_back(e);
    std::sort(part.begin(), part.end(), [&](const Eig& x, const Eig& y) { return key(x) < key(y); });
    sorted.insert(sorted.end(), part.begin(), part.end());
  }

  SplittingFrame f;
  f.n_ = n;
  f.A_ = to_mat(a.matrix());
  f.Ainv_ = to_mat(a.inverse().matrix());
  f.T_ = Mat::Zero(n, n);
  f.D_ = Mat::Zero(n, n);
  int off = 0;
  f.lambda_s_ = 0;
  f.lambda_u_ = 0;
  for (const auto& e : sorted) {
    SpectralBlock b;
    b.offset = off;
    b.kind = e.kind;
    b.modulus = static_cast<double>(std::abs(e.value));
    b.angle = static_cast<double>(std::arg(e.value));
    const cplx lam(static_cast<double>(e.value.real()), static_cast<double>(e.value.imag()));
    CVec v = eigenvector(f.A_, lam);
    if (e.real) {
      b.size = 1;
      Vec r = v.real();
      if (r.norm() < 0.5 * v.norm()) r = v.imag();
      r.normalize();
      int imax = 0;
      r.cwiseAbs().maxCoeff(&imax);
      if (r[imax] < 0) r = -r;
      f.T_.col(off) = r;
      f.D_(off, off) = static_cast<double>(e.value.real());
    } else {
      b.size = 2;
      Vec re = v.real(), im = v.imag();
      // Rotate the phase so Re v and Im v are orthogonal, then scale |Re v| = 1.
      double phi = 0.5 * std::atan2(-2.0 * re.dot(im), re.squaredNorm() - im.squaredNorm());
      CVec w = v * std::polar(1.0, phi);
      re = w.real();
      im = w.imag();
      int imax = 0;
      re.cwiseAbs().maxCoeff(&imax);
      double sc = (re[imax] < 0 ? -1.0 : 1.0) / re.norm();
      f.T_.col(off) = re * sc;
      f.T_.col(off + 1) = im * sc;
      double rho = e.kind == 'c' ? 1.0 : b.modulus;
      double cs = std::cos(b.angle), sn = std::sin(b.angle);
      if (e.kind == 'c') {
        cs = static_cast<double>(e.value.real());
        sn = static_cast<double>(e.value.imag());
      }
      f.D_(off, off) = rho * cs;
      f.D_(off, off + 1) = rho * sn;
      f.D_(off + 1, off) = -rho * sn;
      f.D_(off + 1, off + 1) = rho * cs;
    }
    if (e.kind == 's') {
      f.s_ += b.size;
      f.lambda_s_ = std::max(f.lambda_s_, b.modulus);
    } else if (e.kind == 'u') {
      f.u_ += b.size;
      f.lambda_u_ = f.lambda_u_ == 0 ? b.modulus : std::min(f.lambda_u_, b.modulus);
    } else {
      f.c_ += b.size;
      if (b.size == 2) {
        b.modulus = 1.0;
        f.theta_c_ = b.angle;
        f.c1_ = 2.0 * static_cast<double>(e.value.real());
      }
    }
    f.blocks_.push_back(b);
    off += b.size;
  }
  if (f.c_ != 2) {
    f.theta_c_.reset();
    f.c1_.reset();
  }
  Eigen::FullPivLU<Mat> lu(f.T_);
  if (!lu.isInvertible()) throw NumericalFailure("adapted basis is singular");
  f.Tinv_ = lu.inverse();
  double resid = (f.A_ * f.T_ - f.T_ * f.D_).cwiseAbs().maxCoeff();
  if (resid > 1e-9 * std::max(1.0, f.A_.cwiseAbs().maxCoeff()))
    throw NumericalFailure("block diagonalization residual too large");
  return f;
}

int SplittingFrame::count(Subspace s) const {
  switch (s) {
    case Subspace::s: return s_;
    case Subspace::u: return u_;
    case Subspace::c: return c_;
    case Subspace::cs: return s_ + c_;
    case Subspace::cu: return u_ + c_;
    case Subspace::su: return s_ + u_;
  }
  return 0;
}

namespace {

// y-coordinate indices belonging to a subspace, in order.
template <class F>
void for_each_index(const SplittingFrame& f, Subspace s, F fn) {
  const int ns = f.s_dim(), nu = f.u_dim(), nc = f.c_dim();
  auto range = [&](int a, int b) {
    for (int i = a; i < b; ++i) fn(i);
  };
  switch (s) {
    case Subspace::s: range(0, ns); break;
    case Subspace::u: range(ns, ns + nu); break;
    case Subspace::c: range(ns + nu, ns + nu + nc); break;
    case Subspace::cs:
      range(0, ns);
      range(ns + nu, ns + nu + nc);
      break;
    case Subspace::cu: range(ns, ns + nu + nc); break;
    case Subspace::su: range(0, ns + nu); break;
  }
}

bool contains(Subspace s, char kind) {
  switch (s) {
    case Subspace::s: return kind == 's';
    case Subspace::u: return kind == 'u';
    case Subspace::c: return kind == 'c';
    case Subspace::cs: return kind == 'c' || kind == 's';
    case Subspace::cu: return kind == 'c' || kind == 'u';
    case Subspace::su: return kind == 's' || kind == 'u';
  }
  return false;
}

}  // namespace

Vec SplittingFrame::coords(const Vec& x, Subspace s) const {
  Vec y = Tinv_ * x;
  Vec out(count(s));
  int k = 0;
  for_each_index(*this, s, [&](int i) { out[k++] = y[i]; });
  return out;
}

Vec SplittingFrame::embed(const Vec& c, Subspace s) const {
  Vec y = Vec::Zero(n_);
  int k = 0;
  for_each_index(*this, s, [&](int i) { y[i] = c[k++]; });
  return T_ * y;
}

Vec SplittingFrame::project(const Vec& x, Subspace s) const {
  Vec y = Tinv_ * x;
  Vec m = Vec::Zero(n_);
  for_each_index(*this, s, [&](int i) { m[i] = y[i]; });
  return T_ * m;
}

Mat SplittingFrame::projector(Subspace s) const {
  Mat mask = Mat::Zero(n_, n_);
  for_each_index(*this, s, [&](int i) { mask(i, i) = 1.0; });
  return T_ * mask * Tinv_;
}

double SplittingFrame::coords_norm(const Vec& c, Subspace s) const {
  double total = 0;
  int k = 0;
  for (const auto& b : blocks_) {
    if (!contains(s, b.kind)) continue;
    total += c.segment(k, b.size).norm();
    k += b.size;
  }
  return total;
}

double SplittingFrame::norm(const Vec& x, Subspace s) const { return coords_norm(coords(x, s), s); }

double SplittingFrame::norm(const Vec& x) const {
  Vec y = Tinv_ * x;
  double total = 0;
  for (const auto& b : blocks_) total += y.segment(b.offset, b.size).norm();
  return total;
}

double SplittingFrame::dual_norm(const Vec& m) const {
  Vec w = T_.transpose() * m;
  double best = 0;
  for (const auto& b : blocks_) best = std::max(best, w.segment(b.offset, b.size).norm());
  return best;
}

double SplittingFrame::A_norm() const {
  double best = 0;
  for (const auto& b : blocks_) best = std::max(best, b.modulus);
  return best;
}

double SplittingFrame::A_inv_norm() const {
  double best = 0;
  for (const auto& b : blocks_) best = std::max(best, 1.0 / b.modulus);
  return best;
}

Vec SplittingFrame::apply_power(const Vec& c, Subspace s, int k) const {
  Vec out(c.size());
  int pos = 0;
  for (const auto& b : blocks_) {
    if (!contains(s, b.kind)) continue;
    if (b.size == 1) {
      out[pos] = std::pow(D_(b.offset, b.offset), k) * c[pos];
    } else {
      const double rho = std::pow(b.modulus, k);
      double cs, sn;
      if (k == 1) {
        cs = D_(b.offset, b.offset) / b.modulus;
        sn = D_(b.offset, b.offset + 1) / b.modulus;
      } else {
        cs = std::cos(k * b.angle);
        sn = std::sin(k * b.angle);
      }
      out[pos] = rho * (cs * c[pos] + sn * c[pos + 1]);
      out[pos + 1] = rho * (-sn * c[pos] + cs * c[pos + 1]);
    }
    pos += b.size;
  }
  return out;
}

}  // namespace tpa::dynamics
