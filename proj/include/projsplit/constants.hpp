#pragma once

namespace projsplit::tol {

// Central tolerance record. Tests and documentation refer to these values;
// do not scatter ad-hoc thresholds through the code.

// Orthonormality of factor columns, ||Q^T Q - I||_F.
inline constexpr double kOrthonormality = 1e-10;

// Relative reconstruction error of factorizations (QR, SVD round trips).
inline constexpr double kReconstruction = 1e-12;

// sin^2 + cos^2 identity slack in angle sets.
inline constexpr double kAngleIdentity = 1e-12;

// Fixed-point residual ||Phi(X*) - X*||_F of contraction maps.
inline constexpr double kFixedPointResidual = 1e-12;

// Relative change of the error norm below which an iteration is considered
// stagnated, measured across kStagnationWindow consecutive steps.
inline constexpr double kStagnationRelChange = 1e-14;
inline constexpr int kStagnationWindow = 20;

// Treat a triangular diagonal entry at or below this relative size as a lost
// rank direction.
inline constexpr double kRankLoss = 1e-13;

}  // namespace projsplit::tol
