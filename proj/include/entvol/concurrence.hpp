#pragma once

#include "entvol/types.hpp"

namespace entvol {

/// Closed-form two-qubit entanglement of formation via concurrence.
struct ConcurrenceResult {
  Eigen::Vector4d alphas = Eigen::Vector4d::Zero();  // descending
  double concurrence = 0.0;                          // C in [0, 1]
  double entanglement = 0.0;                         // E in [0, ln 2], nats
};

/// Shannon entropy of the partition {x, 1-x} in nats.
double binary_entropy(double x);

/// Spin-flipped state O rho^* O^T with the antidiagonal flip matrix
/// O_14 = O_41 = 1, O_23 = O_32 = -1.
MatrixXcd flipped_state(const MatrixXcd& rho);

/// alphas are the square roots of the moduli of the eigenvalues of the
/// non-Hermitian product rho * flipped_state(rho); moduli below 1e-14 are
/// clamped to zero so pure states come out exact.
ConcurrenceResult concurrence(const MatrixXcd& rho);

/// E = h((1 + sqrt(1 - C^2)) / 2); monotone in C, E(0) = 0, E(1) = ln 2.
double eof_from_concurrence(double c);

}  // namespace entvol
