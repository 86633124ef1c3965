#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "projsplit/constants.hpp"
#include "projsplit/errors.hpp"
#include "projsplit/rng.hpp"

namespace projsplit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline void ensure_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw PreconditionError(std::string(what) + ": matrix has non-finite entries");
  }
}

inline double frobenius_norm(const Matrix& m) { return m.norm(); }

/// Largest singular value. Exact dense computation; sizes here are desk scale.
inline double spectral_norm(const Matrix& m) {
  ensure_finite(m, "spectral_norm");
  if (m.size() == 0) return 0.0;
  if (std::min(m.rows(), m.cols()) <= 32) {
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  }
  return Eigen::BDCSVD<Matrix>(m).singularValues()(0);
}

inline bool has_orthonormal_columns(const Matrix& m, double tol = tol::kOrthonormality) {
  const Matrix gram = m.transpose() * m;
  return (gram - Matrix::Identity(m.cols(), m.cols())).norm() <= tol;
}

// ---------------------------------------------------------------------------
// Rank-r factored point U * S * V^T with orthonormal U, V.
// ---------------------------------------------------------------------------

struct LowRankFactor {
  Matrix U;  // n x r, orthonormal columns
  Matrix S;  // r x r, arbitrary (diagonal only when produced by truncated_svd)
  Matrix V;  // m x r, orthonormal columns

  Index rows() const { return U.rows(); }
  Index cols() const { return V.rows(); }
  Index rank() const { return U.cols(); }
};

inline Matrix assemble(const LowRankFactor& f) { return f.U * f.S * f.V.transpose(); }

inline LowRankFactor make_low_rank_factor(Matrix u, Matrix s, Matrix v) {
  const Index r = u.cols();
  if (r < 1 || s.rows() != r || s.cols() != r || v.cols() != r) {
    throw InvalidShapeError("make_low_rank_factor: factor dimensions disagree");
  }
  if (r > std::min(u.rows(), v.rows())) {
    throw InvalidRankError("make_low_rank_factor: rank exceeds matrix dimensions");
  }
  ensure_finite(u, "make_low_rank_factor(U)");
  ensure_finite(s, "make_low_rank_factor(S)");
  ensure_finite(v, "make_low_rank_factor(V)");
  if (!has_orthonormal_columns(u) || !has_orthonormal_columns(v)) {
    throw PreconditionError("make_low_rank_factor: U or V columns are not orthonormal");
  }
  return LowRankFactor{std::move(u), std::move(s), std::move(v)};
}

// ---------------------------------------------------------------------------
// Thin QR with a deterministic sign convention.
// ---------------------------------------------------------------------------

// The two conventions produce bases differing by column signs; downstream
// results that are invariant under the choice of orthonormal basis must not
// change when the convention is swapped.
enum class QrSign { kPositiveDiagonal, kNegativeDiagonal };

struct ThinQr {
  Matrix Q;  // n x r, orthonormal columns (deterministically completed when
             // the input is rank deficient)
  Matrix R;  // r x r, upper triangular
};

inline ThinQr thin_qr(const Matrix& m, QrSign sign = QrSign::kPositiveDiagonal) {
  const Index n = m.rows();
  const Index r = m.cols();
  if (n < r) {
    throw InvalidShapeError("thin_qr: need rows >= cols");
  }
  ensure_finite(m, "thin_qr");
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(n, r);
  Matrix rr = qr.matrixQR().topLeftCorner(r, r).triangularView<Eigen::Upper>();
  for (Index i = 0; i < r; ++i) {
    const double d = rr(i, i);
    const bool flip = (sign == QrSign::kPositiveDiagonal) ? (d < 0.0) : (d > 0.0);
    if (flip) {
      q.col(i) = -q.col(i);
      rr.row(i) = -rr.row(i);
    }
  }
  return ThinQr{std::move(q), std::move(rr)};
}

// ---------------------------------------------------------------------------
// Truncated SVD with deterministic sign choice.
// ---------------------------------------------------------------------------

/// Best rank-r approximation factors of `m`. S comes back diagonal with the
/// singular values in descending order; each left singular vector has its
/// first nonzero entry positive so repeated calls give identical output.
inline LowRankFactor truncated_svd(const Matrix& m, Index r) {
  if (r < 1 || r > std::min(m.rows(), m.cols())) {
    throw InvalidRankError("truncated_svd: rank out of range");
  }
  ensure_finite(m, "truncated_svd");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix u = svd.matrixU().leftCols(r);
  Matrix v = svd.matrixV().leftCols(r);
  for (Index j = 0; j < r; ++j) {
    for (Index i = 0; i < u.rows(); ++i) {
      if (u(i, j) != 0.0) {
        if (u(i, j) < 0.0) {
          u.col(j) = -u.col(j);
          v.col(j) = -v.col(j);
        }
        break;
      }
    }
  }
  Matrix s = svd.singularValues().head(r).asDiagonal();
  return LowRankFactor{std::move(u), std::move(s), std::move(v)};
}

// ---------------------------------------------------------------------------
// Principal angles between column spaces.
// ---------------------------------------------------------------------------

struct AngleSet {
  Vector cosines;   // descending, in [0, 1]
  Vector sines;     // in [0, 1]
  Vector tangents;  // sines / cosines, +inf where the cosine vanishes

  double max_tangent() const { return tangents.size() ? tangents.maxCoeff() : 0.0; }
};

/// Angles between span(v0) and span(vstar); cosines are the singular values
/// of vstar^T v0. Requires orthonormal inputs and vstar.cols() <= v0.cols().
inline AngleSet principal_angles(const Matrix& v0, const Matrix& vstar) {
  if (v0.rows() != vstar.rows() || vstar.cols() > v0.cols()) {
    throw InvalidShapeError("principal_angles: incompatible subspace dimensions");
  }
  if (!has_orthonormal_columns(v0) || !has_orthonormal_columns(vstar)) {
    throw PreconditionError("principal_angles: inputs must have orthonormal columns");
  }
  const Matrix psi = vstar.transpose() * v0;
  Vector cos = Eigen::JacobiSVD<Matrix>(psi).singularValues();
  AngleSet angles;
  angles.cosines = cos.cwiseMin(1.0);
  angles.sines = (1.0 - angles.cosines.array().square()).max(0.0).sqrt();
  angles.tangents.resize(cos.size());
  for (Index i = 0; i < cos.size(); ++i) {
    angles.tangents(i) = angles.cosines(i) > 0.0
                             ? angles.sines(i) / angles.cosines(i)
                             : std::numeric_limits<double>::infinity();
  }
  return angles;
}

// ---------------------------------------------------------------------------
// Seeded random matrices.
// ---------------------------------------------------------------------------

inline Matrix random_normal_matrix(Index rows, Index cols, RngStream& rng) {
  Matrix m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      m(i, j) = rng.next_normal();
    }
  }
  return m;
}

inline Matrix random_orthonormal(Index rows, Index cols, RngStream& rng) {
  return thin_qr(random_normal_matrix(rows, cols, rng)).Q;
}

/// Random Gaussian direction normalized to unit Frobenius norm.
inline Matrix random_unit_direction(Index rows, Index cols, RngStream& rng) {
  Matrix m = random_normal_matrix(rows, cols, rng);
  return m / m.norm();
}

}  // namespace projsplit
