#include "entvol/eof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entvol/analysis.hpp"
#include "entvol/ensembles.hpp"

namespace entvol {

namespace {

constexpr double kWeightFloor = 1e-14;
constexpr double kCardinalityTolerance = 1e-6;
constexpr double kExactZero = 1e-12;

double member_entropy(const Eigen::Ref<const VectorXcd>& phi, const BipartiteSplit& split,
                      double q) {
  const VectorXd b = schmidt_spectrum(phi, split);
  if (q == 1.0) {
    return entropy_from_spectrum(b);
  }
  return renyi_from_spectrum(b, q);
}

struct WalkRun {
  double e = std::numeric_limits<double>::infinity();
  MatrixXcd members;          // best decomposition of this run
  std::vector<double> trace;  // current E after each objective evaluation
  bool complete = false;
};

// One restart at fixed M. `budget` counts objective evaluations across the
// whole estimate and stops the schedule when exhausted.
WalkRun run_walk(const MatrixXcd& psi, const BipartiteSplit& split, const WalkParams& params,
                 Index m, RngStream rng, std::uint64_t& used, std::uint64_t budget) {
  const Index n = psi.cols();
  WalkRun run;

  auto out_of_budget = [&] { return budget != 0 && used >= budget; };
  if (out_of_budget()) {
    return run;
  }

  MatrixXcd mixer = sample_haar_unitary(m, rng);
  run.members = psi * mixer.leftCols(n).transpose();
  run.e = decomposition_entanglement(Decomposition{run.members}, split, params.q);
  ++used;
  run.trace.push_back(run.e);

  for (double chi = params.chi0; chi >= params.chi_end; chi *= params.alpha) {
    int rejects = 0;
    while (rejects < params.i_change) {
      if (out_of_budget()) {
        return run;
      }
      const MatrixXcd candidate = perturb_mixer(mixer, chi, rng);
      MatrixXcd members = psi * candidate.leftCols(n).transpose();
      const double e = decomposition_entanglement(Decomposition{members}, split, params.q);
      ++used;
      if (e < run.e) {
        run.e = e;
        mixer = candidate;
        run.members.swap(members);
        rejects = 0;
      } else {
        ++rejects;
      }
      run.trace.push_back(run.e);
    }
  }
  run.complete = true;
  return run;
}

bool halving_passes(const std::vector<double>& trace) {
  if (trace.size() < 2) {
    return false;
  }
  const double e_end = trace.back();
  const double e_half = trace[trace.size() / 2 - 1];
  return e_end <= kExactZero || e_end < 0.5 * e_half;
}

}  // namespace

WalkParams WalkParams::defaults_for(Index n) {
  WalkParams p;
  p.m_min = n;
  p.m_max = n;
  if (n <= 4) {
    p.chi_end = 1e-4;
    p.l_mat = 3;
  } else {
    p.chi_end = 2e-4;
    p.l_mat = 5;
  }
  return p;
}

void WalkParams::require_valid(Index n) const {
  const Index lo = m_min == 0 ? n : m_min;
  const Index hi = m_max == 0 ? n : m_max;
  if (!(chi_end > 0.0 && chi_end < chi0)) {
    throw std::invalid_argument("WalkParams: require 0 < chi_end < chi0");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("WalkParams: require 0 < alpha < 1");
  }
  if (i_change < 1 || l_mat < 1) {
    throw std::invalid_argument("WalkParams: i_change and l_mat must be >= 1");
  }
  if (!(n <= lo && lo <= hi && hi <= n * n)) {
    throw std::invalid_argument("WalkParams: require N <= m_min <= m_max <= N^2");
  }
  if (!(q > 0.0)) {
    throw std::invalid_argument("WalkParams: entropy order q must be > 0");
  }
}

MatrixXcd eigendecompose_to_pure_states(const MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(rho);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecompose_to_pure_states: eigensolver failed");
  }
  const VectorXd d = solver.eigenvalues().array().max(0.0).sqrt();
  return solver.eigenvectors() * d.asDiagonal();
}

Decomposition mix_decomposition(const MatrixXcd& psi, const MatrixXcd& v) {
  const Index n = psi.cols();
  if (v.cols() != n || v.rows() < n) {
    throw std::invalid_argument("mix_decomposition: mixer must be M x N with M >= N");
  }
  const MatrixXcd gram = v.adjoint() * v;
  if ((gram - MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("mix_decomposition: mixer columns are not orthonormal");
  }
  return Decomposition{psi * v.transpose()};
}

double decomposition_entanglement(const Decomposition& dec, const BipartiteSplit& split,
                                  double q) {
  split.require_matches(dec.members.rows());
  double e = 0.0;
  for (Index i = 0; i < dec.members.cols(); ++i) {
    const double p = dec.members.col(i).squaredNorm();
    if (p <= kWeightFloor) {
      continue;
    }
    e += p * member_entropy(dec.members.col(i), split, q);
  }
  return e;
}

MatrixXcd perturb_mixer(const MatrixXcd& v, double chi, RngStream& rng) {
  if (!(chi > 0.0)) {
    throw std::invalid_argument("perturb_mixer: angle must be positive");
  }
  const MatrixXcd h = sample_gue(v.cols(), rng);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("perturb_mixer: eigensolver failed");
  }
  const VectorXcd phases =
      (Complex(0.0, chi) * solver.eigenvalues().cast<Complex>()).array().exp();
  return v * (solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint());
}

EofEstimate estimate_eof(const MatrixXcd& rho, const BipartiteSplit& split,
                         const WalkParams& params, const RngStream& rng) {
  split.require_matches(rho.rows());
  params.require_valid(rho.rows());

  const Index n = rho.rows();
  const Index m_lo = params.m_min == 0 ? n : params.m_min;
  const Index m_hi = params.m_max == 0 ? n : params.m_max;
  const MatrixXcd psi = eigendecompose_to_pure_states(rho);

  EofEstimate est;
  est.e_min = std::numeric_limits<double>::infinity();
  bool all_complete = true;
  bool all_halving = true;
  std::uint64_t used = 0;

  for (Index m = m_lo; m <= m_hi; ++m) {
    double e_m = std::numeric_limits<double>::infinity();
    for (int l = 0; l < params.l_mat; ++l) {
      WalkRun run = run_walk(psi, split, params, m,
                             rng.split(static_cast<std::uint64_t>(m)).split(
                                 static_cast<std::uint64_t>(l)),
                             used, params.i_max);
      if (run.trace.empty()) {
        all_complete = false;  // budget exhausted before the run started
        continue;
      }
      all_complete = all_complete && run.complete;
      all_halving = all_halving && halving_passes(run.trace);
      if (run.e < e_m) {
        e_m = run.e;
      }
      if (run.e < est.e_min) {
        est.e_min = run.e;
        est.best.members = std::move(run.members);
      }
      if (params.record_traces) {
        est.traces.push_back(std::move(run.trace));
      }
    }
    if (std::isfinite(e_m)) {
      est.per_m.emplace_back(m, e_m);
    }
  }

  est.iterations = used;
  est.complete = all_complete;
  if (!std::isfinite(est.e_min)) {
    est.e_min = 0.0;
    est.complete = false;
    return est;
  }

  est.cardinality = est.per_m.empty() ? n : est.per_m.front().first;
  for (const auto& [m, e] : est.per_m) {
    if (e <= est.e_min + kCardinalityTolerance) {
      est.cardinality = m;
      break;
    }
  }
  est.separable_like = all_halving;
  return est;
}

HalvingVerdict halving_criterion(const MatrixXcd& rho, const BipartiteSplit& split,
                                 const WalkParams& params, const RngStream& rng) {
  return estimate_eof(rho, split, params, rng).separable_like
             ? HalvingVerdict::SeparableLike
             : HalvingVerdict::EntangledLike;
}

}  // namespace entvol
