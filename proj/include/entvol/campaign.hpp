#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "entvol/analysis.hpp"
#include "entvol/eof.hpp"
#include "entvol/ensembles.hpp"

namespace entvol {

enum class StateClass { Separable, BoundEntangled, FreeEntangled };

struct CampaignConfig {
  BipartiteSplit split;
  MeasureSpec measure;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  int r_bins = 30;          // equal-width bins over [1, N]
  double e_cutoff = 3e-4;   // bound-entanglement cut-off E_c
  std::optional<WalkParams> walk;  // PPT states, N > 6; defaults_for(N) if unset
  int threads = 0;          // 0 = hardware concurrency
  bool keep_states = false;
  // With the estimator disabled and N > 6, PPT states are tallied under
  // n_sep without the separable/bound split, so p_t remains exact and p_s
  // becomes the PPT upper bound on separability.
  bool estimate_ppt = true;
};

struct StateRecord {
  std::uint64_t index = 0;
  double negativity = 0.0;
  double participation = 1.0;
  double concurrence = 0.0;  // NaN unless N = 4
  double eof = 0.0;          // NaN when not computed
  StateClass label = StateClass::Separable;
};

struct MeanWithError {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  std::size_t n = 0;
};

struct RBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  std::size_t n_sep = 0;
  std::size_t n_bound = 0;
  std::size_t n_free = 0;
  double sum_t = 0.0;
  double sum_e = 0.0;
  std::size_t count_e = 0;  // states in the bin with a computed E

  double center() const { return 0.5 * (lo + hi); }
  bool empty() const { return count == 0; }
  double p_s() const { return count ? static_cast<double>(n_sep) / count : 0.0; }
  double p_b() const { return count ? static_cast<double>(n_bound) / count : 0.0; }
  double p_t() const { return count ? static_cast<double>(n_sep + n_bound) / count : 0.0; }
  double mean_t() const { return count ? sum_t / count : 0.0; }
  double mean_e() const { return count_e ? sum_e / count_e : 0.0; }
};

/// Fixed-width histogram; values at (or numerically indistinguishable from)
/// zero are kept out of the bins and reported as a separate mass.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::size_t> counts;
  std::size_t zero_mass = 0;
  std::size_t total = 0;

  Histogram() = default;
  Histogram(double lo_, double hi_, int bins) : lo(lo_), hi(hi_), counts(bins, 0) {}
  void add(double x);
};

struct CampaignResult {
  std::size_t samples = 0;
  std::size_t n_sep = 0;
  std::size_t n_bound = 0;
  std::size_t n_free = 0;
  std::size_t n_ppt_estimated = 0;  // PPT states routed through the estimator

  double p_t = 0.0, p_s = 0.0, p_b = 0.0, p_f = 0.0;
  double se_p_t = 0.0, se_p_s = 0.0, se_p_b = 0.0, se_p_f = 0.0;

  MeanWithError t_mean;
  MeanWithError r_mean;
  MeanWithError e_mean;      // over states with a computed E
  MeanWithError e_bound;     // over bound-entangled states
  double max_e_bound = 0.0;
  std::size_t n_bound_at_2ec = 0;  // reclassification count at doubled cut-off

  std::vector<RBin> bins;
  Histogram e_hist;
  std::vector<StateRecord> states;  // populated when keep_states
};

/// Binomial standard error sqrt(p(1-p)/n).
double binomial_se(double p, std::size_t n);

/// Samples, analyzes and classifies `samples` states: NPT states are free
/// entangled; PPT states are separable for N <= 6 and are routed through
/// estimate_eof for N > 6 (bound entangled iff E > E_c). Deterministic for a
/// fixed config, independent of the thread count.
CampaignResult run_volume_campaign(const CampaignConfig& config);

/// Same engine; named entry point for R-resolved conditional statistics.
CampaignResult run_r_binned_scan(const CampaignConfig& config);

/// Volume campaign restricted to N > 6, where the PPT criterion stops being
/// sufficient for separability.
CampaignResult run_bound_entanglement_campaign(const CampaignConfig& config);

struct FixedSpectrumResult {
  std::size_t samples = 0;
  double p_s = 0.0;
  double se_p_s = 0.0;
  MeanWithError e_mean;
  MeanWithError t_mean;
  MeanWithError c_mean;  // N = 4 only
};

/// rho = U diag(d) U^dag over Haar U at fixed spectrum d. Exact Wootters
/// E for N = 4; the walk estimator otherwise.
FixedSpectrumResult run_fixed_spectrum_study(const VectorXd& spectrum,
                                             const BipartiteSplit& split, std::size_t samples,
                                             std::uint64_t seed, int threads = 0);

struct ScatterResult {
  CampaignResult campaign;       // with per-state records retained
  double corr_e_t = 0.0;         // Pearson correlation of E and t
  double min_c_minus_t = 0.0;    // conjecture probe: should stay >= -1e-9
  std::vector<std::pair<double, double>> max_gap_per_bin;  // (R center, max C-t)
};

/// N = 4 only: per-state (t, C, E, R) table with the E-t correlation and the
/// C-t gap resolved in R.
ScatterResult run_scatter_ct(const CampaignConfig& config);

struct PureStudyResult {
  std::size_t samples = 0;
  MeanWithError e_mean;
  Histogram e_hist;
};

/// Haar-random pure states; E is the reduced-state von Neumann entropy.
PureStudyResult run_pure_state_study(const BipartiteSplit& split, std::size_t samples,
                                     std::uint64_t seed, int threads = 0);

struct FitResult {
  double amplitude = 0.0;  // A in P(N) = A exp(-c N)
  double rate = 0.0;       // c
  double residual = 0.0;   // rms residual of ln P
};

/// Least-squares fit of ln P against N. Requires >= 3 points with P > 0.
FitResult fit_exponential(const std::vector<std::pair<double, double>>& points);

}  // namespace entvol
