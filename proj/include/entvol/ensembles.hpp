#pragma once

#include "entvol/rng.hpp"
#include "entvol/types.hpp"

namespace entvol {

/// Probability measure for random density matrices: a spectrum law on the
/// (N-1)-simplex combined with a Haar rotation on U(N).
struct MeasureSpec {
  enum class Kind { Dirichlet, Pure, FixedSpectrum };

  Kind kind = Kind::Dirichlet;
  double lambda = 1.0;  // Dirichlet concentration, > 0
  VectorXd spectrum;    // FixedSpectrum only

  /// Uniform simplex measure (Dirichlet with lambda = 1).
  static MeasureSpec unitary() { return dirichlet(1.0); }
  /// Squared-orthogonal-column measure (Dirichlet with lambda = 1/2).
  static MeasureSpec orthogonal() { return dirichlet(0.5); }
  static MeasureSpec dirichlet(double lambda);
  static MeasureSpec pure();
  static MeasureSpec fixed_spectrum(VectorXd d);
};

/// Haar-distributed U(n) matrix: QR of a complex Ginibre matrix with the
/// R-factor diagonal phases absorbed so the factorization is unique.
MatrixXcd sample_haar_unitary(Index n, RngStream& rng);

/// Haar-distributed O(n) matrix, same construction over the reals.
MatrixXd sample_haar_orthogonal(Index n, RngStream& rng);

/// GUE matrix: Hermitian, off-diagonal re/im variance 1/m, real diagonal
/// variance 2/m.
MatrixXcd sample_gue(Index m, RngStream& rng);

/// Random point on the simplex sum(d) = 1. Dirichlet via normalized
/// Gamma(lambda) variates; the pure kind returns a uniformly permuted basis
/// vector; a fixed spectrum is passed through unchanged.
VectorXd sample_simplex(Index n, const MeasureSpec& measure, RngStream& rng);

/// rho = U diag(d) U^dag with d from sample_simplex and U Haar.
MatrixXcd sample_density_matrix(Index n, const MeasureSpec& measure, RngStream& rng);

/// Haar-random unit vector in C^n.
VectorXcd sample_haar_pure_state(Index n, RngStream& rng);

}  // namespace entvol
