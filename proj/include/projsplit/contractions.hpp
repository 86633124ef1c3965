#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "projsplit/errors.hpp"
#include "projsplit/linalg.hpp"
#include "projsplit/retraction.hpp"
#include "projsplit/rng.hpp"

namespace projsplit {

/// Contraction mapping Phi with a known fixed point X* of known rank.
///
/// apply() contracts: ||Phi(A) - Phi(B)|| <= delta() * ||A - B|| with
/// delta() < 1, and Phi(X*) = X*. `step_index` selects the noise draw of
/// stochastic maps; deterministic maps ignore it.
class FixedPointMap {
 public:
  virtual ~FixedPointMap() = default;

  virtual Matrix apply(const Matrix& y, std::int64_t step_index) const = 0;
  Matrix apply(const Matrix& y) const { return apply(y, 0); }

  virtual const Matrix& fixed_point() const = 0;
  virtual const LowRankFactor& fixed_point_factor() const = 0;
  virtual double delta() const = 0;
  virtual bool is_linear() const = 0;
};

// ---------------------------------------------------------------------------
// Phi(Y) = X* + Q (Y - X*) with a dense operator Q acting on vec(Y - X*).
// ---------------------------------------------------------------------------

class LinearContraction final : public FixedPointMap {
 public:
  /// `q_operator` is (n*m) x (n*m) and acts on column-major vectorizations.
  /// `delta` must bound the spectral norm of the operator.
  LinearContraction(LowRankFactor xstar_factor, Matrix q_operator, double delta)
      : xstar_factor_(std::move(xstar_factor)),
        xstar_(assemble(xstar_factor_)),
        q_(std::move(q_operator)),
        delta_(delta) {
    const Index nm = xstar_.size();
    if (q_.rows() != nm || q_.cols() != nm) {
      throw InvalidShapeError("LinearContraction: operator must be (n*m) x (n*m)");
    }
    if (!(delta_ > 0.0 && delta_ < 1.0)) {
      throw PreconditionError("LinearContraction: delta must lie in (0, 1)");
    }
    ensure_finite(q_, "LinearContraction(Q)");
  }

  Matrix apply(const Matrix& y, std::int64_t) const override {
    if (y.rows() != xstar_.rows() || y.cols() != xstar_.cols()) {
      throw InvalidShapeError("LinearContraction::apply: shape mismatch");
    }
    const Matrix diff = y - xstar_;
    const Vector mapped = q_ * diff.reshaped();
    return xstar_ + mapped.reshaped(xstar_.rows(), xstar_.cols());
  }

  const Matrix& fixed_point() const override { return xstar_; }
  const LowRankFactor& fixed_point_factor() const override { return xstar_factor_; }
  double delta() const override { return delta_; }
  bool is_linear() const override { return true; }

  const Matrix& q_operator() const { return q_; }

 private:
  LowRankFactor xstar_factor_;
  Matrix xstar_;
  Matrix q_;
  double delta_;
};

/// Seeded construction of a linear contraction with prescribed fixed-point
/// singular values and sharp contraction factor.
///
/// X* = U* diag(sv_spec) V*^T with Haar-random orthonormal factors. The
/// operator places its top singular pair, with value exactly `delta`, on a
/// random unit direction inside the tangent plane at X*, and fills the
/// orthogonal complement with an i.i.d. Gaussian block rescaled to 0.9*delta.
/// The planted direction makes `delta` the sharp asymptotic contraction rate
/// observed along iterates restricted to the manifold; a plain rescaled
/// Gaussian operator contracts manifold iterates strictly faster than its
/// norm, because its extreme singular directions are almost never tangent.
inline LinearContraction make_random_linear_contraction(Index n, Index m, Index r, double delta,
                                                        const std::vector<double>& sv_spec,
                                                        std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw PreconditionError("make_random_linear_contraction: delta must lie in (0, 1)");
  }
  if (r < 1 || r > std::min(n, m)) {
    throw InvalidRankError("make_random_linear_contraction: rank out of range");
  }
  if (sv_spec.size() != static_cast<std::size_t>(r)) {
    throw PreconditionError("make_random_linear_contraction: sv_spec must have r entries");
  }
  for (std::size_t i = 0; i < sv_spec.size(); ++i) {
    if (!(sv_spec[i] > 0.0) || (i > 0 && sv_spec[i] > sv_spec[i - 1])) {
      throw PreconditionError("make_random_linear_contraction: sv_spec must be positive descending");
    }
  }

  RngStream root = RngStream::root(seed);
  RngStream s_left = root.child(0);
  RngStream s_right = root.child(1);
  RngStream s_spike = root.child(2);
  RngStream s_bulk = root.child(3);

  Matrix u_star = random_orthonormal(n, r, s_left);
  Matrix v_star = random_orthonormal(m, r, s_right);
  Matrix s_star = Matrix::Zero(r, r);
  for (Index i = 0; i < r; ++i) s_star(i, i) = sv_spec[static_cast<std::size_t>(i)];
  LowRankFactor xstar_factor =
      make_low_rank_factor(std::move(u_star), std::move(s_star), std::move(v_star));

  const Matrix tangent_dir =
      tangent_project(xstar_factor.U, xstar_factor.V,
                      random_normal_matrix(n, m, s_spike));
  const Vector w = tangent_dir.reshaped() / tangent_dir.norm();

  const Index nm = n * m;
  Matrix bulk = random_normal_matrix(nm, nm, s_bulk);
  bulk -= w * (w.transpose() * bulk);
  bulk -= (bulk * w) * w.transpose();
  bulk *= 0.9 * delta / spectral_norm(bulk);
  Matrix q = bulk;
  q += delta * w * w.transpose();

  return LinearContraction(std::move(xstar_factor), std::move(q), delta);
}

// ---------------------------------------------------------------------------
// Phi(Y) = X* + delta ||Y - X*||_F Xperp on 2x2 matrices,
// X* = diag(1, 0), Xperp = diag(0, 1).
// ---------------------------------------------------------------------------

class SpuriousMap final : public FixedPointMap {
 public:
  explicit SpuriousMap(double delta) : delta_(delta) {
    if (!(delta_ > 0.0 && delta_ < 1.0)) {
      throw PreconditionError("SpuriousMap: delta must lie in (0, 1)");
    }
    xstar_ = Matrix::Zero(2, 2);
    xstar_(0, 0) = 1.0;
    xperp_ = Matrix::Zero(2, 2);
    xperp_(1, 1) = 1.0;
    Matrix e1 = Matrix::Zero(2, 1);
    e1(0, 0) = 1.0;
    xstar_factor_ = make_low_rank_factor(e1, Matrix::Identity(1, 1), e1);
  }

  Matrix apply(const Matrix& y, std::int64_t) const override {
    if (y.rows() != 2 || y.cols() != 2) {
      throw InvalidShapeError("SpuriousMap::apply: input must be 2x2");
    }
    return xstar_ + delta_ * (y - xstar_).norm() * xperp_;
  }

  const Matrix& fixed_point() const override { return xstar_; }
  const LowRankFactor& fixed_point_factor() const override { return xstar_factor_; }
  double delta() const override { return delta_; }
  bool is_linear() const override { return false; }

  const Matrix& xperp() const { return xperp_; }

 private:
  double delta_;
  Matrix xstar_;
  Matrix xperp_;
  LowRankFactor xstar_factor_;
};

// ---------------------------------------------------------------------------
// Phi_pert(Y, k) = Phi(Y) + R_k, a noisy wrapper around an inner map.
// ---------------------------------------------------------------------------

class PerturbedMap final : public FixedPointMap {
 public:
  /// R_k has i.i.d. normal entries with scale ||Phi(Y) - Y||_F / divisor,
  /// drawn from a stream derived from (seed, step_index). The scale is read
  /// as a standard deviation by default; `scale_is_variance` switches to the
  /// variance reading. divisor = +inf gives the exact zero-noise limit.
  PerturbedMap(std::shared_ptr<const FixedPointMap> inner, double noise_divisor,
               std::uint64_t seed, bool scale_is_variance = false)
      : inner_(std::move(inner)),
        divisor_(noise_divisor),
        seed_(seed),
        scale_is_variance_(scale_is_variance) {
    if (!inner_) throw PreconditionError("PerturbedMap: inner map is null");
    if (!(divisor_ > 0.0)) throw PreconditionError("PerturbedMap: divisor must be positive");
  }

  Matrix apply(const Matrix& y, std::int64_t step_index) const override {
    Matrix base = inner_->apply(y, step_index);
    double scale = (base - y).norm() / divisor_;
    if (scale_is_variance_) scale = std::sqrt(scale);
    if (scale == 0.0 || !std::isfinite(divisor_) * 0) {
      // fallthrough below; the scale itself is already 0 for divisor = inf
    }
    if (scale > 0.0) {
      RngStream noise =
          RngStream::root(seed_).child(kNoiseTag).child(static_cast<std::uint64_t>(step_index));
      base += scale * random_normal_matrix(base.rows(), base.cols(), noise);
    }
    return base;
  }

  const Matrix& fixed_point() const override { return inner_->fixed_point(); }
  const LowRankFactor& fixed_point_factor() const override { return inner_->fixed_point_factor(); }
  double delta() const override { return inner_->delta(); }
  bool is_linear() const override { return false; }

 private:
  static constexpr std::uint64_t kNoiseTag = 0x6E6F697365ULL;  // "noise"

  std::shared_ptr<const FixedPointMap> inner_;
  double divisor_;
  std::uint64_t seed_;
  bool scale_is_variance_;
};

}  // namespace projsplit
