#pragma once

#include <cstdint>
#include <vector>

#include "entvol/rng.hpp"
#include "entvol/types.hpp"

namespace entvol {

/// Tuning constants of the zero-temperature random walk over decomposition
/// mixers. i_change counts consecutive rejected perturbations before the
/// step angle shrinks by alpha; a level therefore stays active while moves
/// keep being accepted.
struct WalkParams {
  double chi0 = 0.3;      // initial step angle
  double chi_end = 1e-4;  // terminal step angle
  double alpha = 2.0 / 3.0;
  int i_change = 25;
  int l_mat = 3;             // restarts per decomposition size
  Index m_min = 0;           // 0 means N
  Index m_max = 0;           // 0 means N
  double q = 1.0;            // entropy order of the objective
  std::uint64_t i_max = 0;   // cap on objective evaluations, 0 = unlimited
  bool record_traces = false;  // keep per-run E(I) traces in the estimate

  /// N=4 and N=8 parameter sets; other sizes fall back to the N=8 set.
  static WalkParams defaults_for(Index n);

  void require_valid(Index n) const;
};

/// M unnormalized pure states phi_i (columns) with sum_i |phi_i><phi_i|
/// reconstructing the source density matrix.
struct Decomposition {
  MatrixXcd members;  // N x M

  Index size() const { return members.cols(); }
  VectorXd weights() const { return members.colwise().squaredNorm().transpose(); }
  MatrixXcd reconstruct() const { return members * members.adjoint(); }
};

struct EofEstimate {
  double e_min = 0.0;             // best upper bound found, nats
  Index cardinality = 0;          // smallest M within 1e-6 of e_min
  std::vector<std::pair<Index, double>> per_m;  // (M, E_M)
  std::uint64_t iterations = 0;   // objective evaluations over all runs
  bool separable_like = false;    // halving-criterion verdict
  bool complete = true;           // false when i_max stopped the schedule
  Decomposition best;
  std::vector<std::vector<double>> traces;  // per run, when record_traces
};

enum class HalvingVerdict { SeparableLike, EntangledLike };

/// Columns Psi_i = sqrt(d_i) * (i-th eigenvector); sum of their projectors
/// reconstructs rho exactly.
MatrixXcd eigendecompose_to_pure_states(const MatrixXcd& rho);

/// phi_i = sum_m V_im Psi_m for an M x N mixer V with orthonormal columns
/// (the first N columns of an M x M unitary).
Decomposition mix_decomposition(const MatrixXcd& psi, const MatrixXcd& v);

/// Average reduced-state entropy sum_i p_i E_B(phi_i); members with weight
/// below 1e-14 are skipped. q = 1 gives the von Neumann form, q != 1 the
/// Renyi form.
double decomposition_entanglement(const Decomposition& dec, const BipartiteSplit& split,
                                  double q = 1.0);

/// v * exp(i chi H) with H drawn from the GUE; the exponential is computed
/// by eigendecomposition of H, so the result is unitary to solver precision.
MatrixXcd perturb_mixer(const MatrixXcd& v, double chi, RngStream& rng);

/// Appendix-style stochastic upper bound on the entanglement of formation:
/// for each M in [m_min, m_max] and each of l_mat restarts, walk downhill in
/// U(M) accepting only strict improvements while the step angle shrinks
/// geometrically from chi0 to chi_end. Deterministic given (rng seed, params).
EofEstimate estimate_eof(const MatrixXcd& rho, const BipartiteSplit& split,
                         const WalkParams& params, const RngStream& rng);

/// Separability heuristic from the decay of the walk: separable-like iff
/// every restart satisfies E(I) < E(I/2) / 2 at its final iteration count.
HalvingVerdict halving_criterion(const MatrixXcd& rho, const BipartiteSplit& split,
                                 const WalkParams& params, const RngStream& rng);

}  // namespace entvol
