#pragma once

#include <utility>
#include <vector>

#include "entvol/types.hpp"

namespace entvol {

/// An eigenvalue of a partial transpose counts as nonnegative above this.
inline constexpr double kPptTolerance = 1e-10;

/// Spectrum entries below this contribute exactly zero entropy.
inline constexpr double kEntropyFloor = 1e-15;

/// Partial transposition on subsystem B: out_{jl,j'l'} = in_{jl',j'l}.
/// An involution that preserves Hermiticity and trace.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> partial_transpose(
    const Eigen::MatrixBase<Derived>& rho, const BipartiteSplit& split) {
  split.require_matches(rho.rows());
  const Index na = split.n_a;
  const Index nb = split.n_b;
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(rho.rows(),
                                                                              rho.cols());
  for (Index j = 0; j < na; ++j) {
    for (Index jp = 0; jp < na; ++jp) {
      // Block (j, j') of the partial transpose is block (j, j') transposed.
      out.block(j * nb, jp * nb, nb, nb) = rho.block(j * nb, jp * nb, nb, nb).transpose();
    }
  }
  return out;
}

/// 1 / Tr(rho^2); ranges from 1 (pure) to N (maximally mixed). For a
/// Hermitian argument Tr(rho^2) equals the squared Frobenius norm.
template <typename Derived>
double participation_ratio(const Eigen::MatrixBase<Derived>& rho) {
  const double purity = rho.squaredNorm();
  return 1.0 / purity;
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
VectorXd hermitian_spectrum(const MatrixXcd& m);

struct PtResult {
  VectorXd spectrum;        // partial-transpose eigenvalues, descending
  double negativity = 0.0;  // sum |d'_i| - 1, zero for PPT states
  bool ppt = true;
};

/// Diagonalizes rho^{T_2}; negativity is clamped to exactly zero whenever the
/// spectrum is nonnegative within kPptTolerance.
PtResult pt_spectrum_and_negativity(const MatrixXcd& rho, const BipartiteSplit& split);

/// -sum d ln d over a nonnegative spectrum, with 0 ln 0 = 0.
double entropy_from_spectrum(const Eigen::Ref<const VectorXd>& spectrum);

/// (1-q)^-1 ln sum d^q over a spectrum, q > 0 and q != 1.
double renyi_from_spectrum(const Eigen::Ref<const VectorXd>& spectrum, double q);

double von_neumann_entropy(const MatrixXcd& rho);

/// H_q of a state; H_2 = ln R.
double renyi_entropy(const MatrixXcd& rho, double q);

/// Reshapes a bipartite vector into its n_a x n_b coefficient matrix A and
/// returns (A^dag A, <psi|psi>). The Gram matrix traces to the squared norm.
std::pair<MatrixXcd, double> reduce_to_b(const Eigen::Ref<const VectorXcd>& psi,
                                         const BipartiteSplit& split);

/// Squared Schmidt coefficients of a bipartite vector, normalized to sum 1,
/// descending, padded with zeros to min(n_a, n_b) entries. Computed from the
/// Gram matrix of the smaller subsystem, which shares the nonzero spectrum of
/// reduce_to_b.
VectorXd schmidt_spectrum(const Eigen::Ref<const VectorXcd>& psi, const BipartiteSplit& split);

/// Reduced-state von Neumann entropy of a pure state; zero iff product.
double pure_state_entanglement(const Eigen::Ref<const VectorXcd>& psi,
                               const BipartiteSplit& split);

struct AnalysisRecord {
  double negativity = 0.0;
  bool ppt = true;
  double participation = 1.0;
  double von_neumann = 0.0;                    // H_1, nats
  std::vector<std::pair<double, double>> renyi;  // (q, H_q)
  VectorXd pt_spectrum;                        // descending
};

AnalysisRecord analyze_state(const MatrixXcd& rho, const BipartiteSplit& split,
                             const std::vector<double>& renyi_orders = {2.0});

}  // namespace entvol
