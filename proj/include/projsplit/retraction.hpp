#pragma once

#include <utility>

#include "projsplit/constants.hpp"
#include "projsplit/errors.hpp"
#include "projsplit/linalg.hpp"

namespace projsplit {

/// Outcome of one retraction. Besides the new point, it keeps the pair
/// (intermediate_U1, input_V0) that defines the tangent plane the step
/// implicitly projected onto; error diagnostics are computed against that
/// plane.
struct RetractionResult {
  LowRankFactor point;     // A1 = U1 * S1 * V1^T
  Matrix intermediate_U1;  // n x r, spans the column space of (A0 + D) * V0
  Matrix input_V0;         // m x r, the row-space basis of A0
  bool rank_deficient = false;  // a triangular factor lost a direction mid-step
};

/// Orthogonal projection of `z` onto the tangent plane of the rank-r manifold
/// at a point with column space span(u) and row space span(v):
///   P(z) = u u^T z + z v v^T - u u^T z v v^T.
inline Matrix tangent_project(const Matrix& u, const Matrix& v, const Matrix& z) {
  if (z.rows() != u.rows() || z.cols() != v.rows()) {
    throw InvalidShapeError("tangent_project: dimensions disagree");
  }
  if (!has_orthonormal_columns(u) || !has_orthonormal_columns(v)) {
    throw PreconditionError("tangent_project: u, v must have orthonormal columns");
  }
  const Matrix ut_z = u.transpose() * z;            // r x m
  const Matrix z_v = z * v;                         // n x r
  return u * ut_z + (z_v - u * (ut_z * v)) * v.transpose();
}

namespace detail {

inline void check_retract_shapes(const LowRankFactor& a0, const Matrix& d) {
  if (d.rows() != a0.rows() || d.cols() != a0.cols()) {
    throw InvalidShapeError("retract: direction shape does not match the point");
  }
  ensure_finite(d, "retract");
}

inline bool lost_rank(const Matrix& triangular, double scale) {
  const double floor = tol::kRankLoss * std::max(scale, 1e-300);
  return triangular.diagonal().cwiseAbs().minCoeff() <= floor;
}

}  // namespace detail

/// Projector-splitting retraction of a0 + d onto the rank-r manifold:
///   U1, S'   = QR(U0 S0 + D V0)
///   S''      = S' - U1^T D V0
///   V1, S1^T = QR(V0 S''^T + D^T U1)
/// The result does not depend on the QR sign convention; `sign` exists so
/// tests can exercise both choices.
inline RetractionResult retract(const LowRankFactor& a0, const Matrix& d,
                                QrSign sign = QrSign::kPositiveDiagonal) {
  detail::check_retract_shapes(a0, d);

  const Matrix k = a0.U * a0.S + d * a0.V;
  ThinQr first = thin_qr(k, sign);
  const bool deficient = detail::lost_rank(first.R, k.norm());

  const Matrix s_second = first.R - first.Q.transpose() * d * a0.V;
  const Matrix l = a0.V * s_second.transpose() + d.transpose() * first.Q;
  ThinQr second = thin_qr(l, sign);

  RetractionResult result;
  result.point = make_low_rank_factor(first.Q, second.R.transpose(), std::move(second.Q));
  result.intermediate_U1 = std::move(first.Q);
  result.input_V0 = a0.V;
  result.rank_deficient = deficient || detail::lost_rank(second.R, l.norm());
  return result;
}

/// Algebraically equivalent two-factorization form,
///   U1, S'   = QR((A0 + D) V0)
///   V1, S1^T = QR((A0 + D)^T U1),
/// kept as an independent code path for differential testing of `retract`.
inline RetractionResult retract_two_qr(const LowRankFactor& a0, const Matrix& d,
                                       QrSign sign = QrSign::kPositiveDiagonal) {
  detail::check_retract_shapes(a0, d);
  const Matrix target = assemble(a0) + d;
  ThinQr first = thin_qr(target * a0.V, sign);
  ThinQr second = thin_qr(target.transpose() * first.Q, sign);

  RetractionResult result;
  result.point = make_low_rank_factor(first.Q, second.R.transpose(), std::move(second.Q));
  result.intermediate_U1 = std::move(first.Q);
  result.input_V0 = a0.V;
  result.rank_deficient =
      detail::lost_rank(first.R, (target * a0.V).norm()) ||
      detail::lost_rank(second.R, (target.transpose() * first.Q).norm());
  return result;
}

struct NormalResidual {
  Matrix matrix;  // (I - U1 U1^T) Xstar (I - V0 V0^T)
  double spectral = 0.0;
  double frobenius = 0.0;
};

/// Component of `xstar` orthogonal to the tangent plane spanned by (u1, v0).
inline NormalResidual normal_residual(const Matrix& u1, const Matrix& v0, const Matrix& xstar) {
  if (xstar.rows() != u1.rows() || xstar.cols() != v0.rows()) {
    throw InvalidShapeError("normal_residual: dimensions disagree");
  }
  if (!has_orthonormal_columns(u1) || !has_orthonormal_columns(v0)) {
    throw PreconditionError("normal_residual: u1, v0 must have orthonormal columns");
  }
  Matrix left = xstar - u1 * (u1.transpose() * xstar);
  NormalResidual res;
  res.matrix = left - (left * v0) * v0.transpose();
  res.spectral = spectral_norm(res.matrix);
  res.frobenius = res.matrix.norm();
  return res;
}

}  // namespace projsplit
