#include "entvol/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "entvol/concurrence.hpp"

namespace entvol {

namespace {

constexpr double kZeroAtom = 1e-12;
constexpr std::uint64_t kWalkSubstream = 0xE0F;

const double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_threads(int requested) {
  if (requested > 0) {
    return requested;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Index-deterministic parallel loop: body(i) writes only slot i, so results
// are identical for any thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  threads = std::min<std::size_t>(resolve_threads(threads), n == 0 ? 1 : n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  constexpr std::size_t kChunk = 32;

  auto worker = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= n) {
        return;
      }
      const std::size_t end = std::min(begin + kChunk, n);
      try {
        for (std::size_t i = begin; i < end; ++i) {
          body(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) {
          error = std::current_exception();
        }
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int k = 0; k < threads; ++k) {
    pool.emplace_back(worker);
  }
  for (auto& t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

MeanWithError mean_with_error(const std::vector<double>& xs) {
  MeanWithError m;
  m.n = xs.size();
  if (m.n == 0) {
    return m;
  }
  double sum = 0.0;
  for (double x : xs) {
    sum += x;
  }
  m.mean = sum / static_cast<double>(m.n);
  if (m.n > 1) {
    double ss = 0.0;
    for (double x : xs) {
      ss += (x - m.mean) * (x - m.mean);
    }
    m.se = std::sqrt(ss / (static_cast<double>(m.n - 1) * static_cast<double>(m.n)));
  }
  return m;
}

}  // namespace

void Histogram::add(double x) {
  ++total;
  if (x <= kZeroAtom) {
    ++zero_mass;
    return;
  }
  const int bins = static_cast<int>(counts.size());
  int k = static_cast<int>(std::floor((x - lo) / (hi - lo) * bins));
  k = std::clamp(k, 0, bins - 1);
  ++counts[static_cast<std::size_t>(k)];
}

double binomial_se(double p, std::size_t n) {
  if (n == 0) {
    return 0.0;
  }
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

CampaignResult run_volume_campaign(const CampaignConfig& config) {
  config.split.require_valid();
  if (config.samples < 1) {
    throw std::invalid_argument("campaign: sample count must be >= 1");
  }
  if (config.r_bins < 1) {
    throw std::invalid_argument("campaign: need at least one R bin");
  }
  const Index n = config.split.dim();
  const bool needs_estimator = n > 6 && config.estimate_ppt;
  const WalkParams walk = config.walk.value_or(WalkParams::defaults_for(n));
  if (needs_estimator) {
    walk.require_valid(n);
  }

  std::vector<StateRecord> rows(config.samples);
  const RngStream root(config.seed);

  parallel_for(config.samples, config.threads, [&](std::size_t i) {
    RngStream stream = root.split(i);
    const MatrixXcd rho = sample_density_matrix(n, config.measure, stream);
    const PtResult pt = pt_spectrum_and_negativity(rho, config.split);

    StateRecord rec;
    rec.index = i;
    rec.negativity = pt.negativity;
    rec.participation = participation_ratio(rho);
    rec.concurrence = kNaN;
    rec.eof = kNaN;

    if (n == 4) {
      const ConcurrenceResult cr = concurrence(rho);
      rec.concurrence = cr.concurrence;
      rec.eof = cr.entanglement;
    }

    if (!pt.ppt) {
      rec.label = StateClass::FreeEntangled;
    } else if (!needs_estimator) {
      rec.label = StateClass::Separable;
    } else {
      const EofEstimate est =
          estimate_eof(rho, config.split, walk, stream.split(kWalkSubstream));
      rec.eof = est.e_min;
      rec.label =
          est.e_min > config.e_cutoff ? StateClass::BoundEntangled : StateClass::Separable;
    }
    rows[i] = rec;
  });

  // Ordered reduction keyed by sample index.
  CampaignResult result;
  result.samples = config.samples;
  result.bins.resize(static_cast<std::size_t>(config.r_bins));
  const double r_lo = 1.0;
  const double r_hi = static_cast<double>(n);
  for (int k = 0; k < config.r_bins; ++k) {
    auto& bin = result.bins[static_cast<std::size_t>(k)];
    bin.lo = r_lo + (r_hi - r_lo) * k / config.r_bins;
    bin.hi = r_lo + (r_hi - r_lo) * (k + 1) / config.r_bins;
  }
  const double e_top = std::log(static_cast<double>(config.split.min_side()));
  result.e_hist = Histogram(0.0, e_top, 30);

  std::vector<double> ts, rs, es, e_bound;
  ts.reserve(config.samples);
  rs.reserve(config.samples);
  for (const StateRecord& rec : rows) {
    ts.push_back(rec.negativity);
    rs.push_back(rec.participation);
    switch (rec.label) {
      case StateClass::Separable:
        ++result.n_sep;
        break;
      case StateClass::BoundEntangled:
        ++result.n_bound;
        break;
      case StateClass::FreeEntangled:
        ++result.n_free;
        break;
    }

    int k = static_cast<int>(std::floor((rec.participation - r_lo) / (r_hi - r_lo) *
                                        config.r_bins));
    k = std::clamp(k, 0, config.r_bins - 1);
    RBin& bin = result.bins[static_cast<std::size_t>(k)];
    ++bin.count;
    bin.sum_t += rec.negativity;
    switch (rec.label) {
      case StateClass::Separable:
        ++bin.n_sep;
        break;
      case StateClass::BoundEntangled:
        ++bin.n_bound;
        break;
      case StateClass::FreeEntangled:
        ++bin.n_free;
        break;
    }

    if (std::isfinite(rec.eof)) {
      es.push_back(rec.eof);
      bin.sum_e += rec.eof;
      ++bin.count_e;
      result.e_hist.add(rec.eof);
      if (needs_estimator) {
        ++result.n_ppt_estimated;
        if (rec.eof > 2.0 * config.e_cutoff) {
          ++result.n_bound_at_2ec;
        }
      }
      if (rec.label == StateClass::BoundEntangled) {
        e_bound.push_back(rec.eof);
        result.max_e_bound = std::max(result.max_e_bound, rec.eof);
      }
    }
  }

  const auto frac = [&](std::size_t c) {
    return static_cast<double>(c) / static_cast<double>(config.samples);
  };
  result.p_s = frac(result.n_sep);
  result.p_b = frac(result.n_bound);
  result.p_f = frac(result.n_free);
  result.p_t = frac(result.n_sep + result.n_bound);
  result.se_p_s = binomial_se(result.p_s, config.samples);
  result.se_p_b = binomial_se(result.p_b, config.samples);
  result.se_p_f = binomial_se(result.p_f, config.samples);
  result.se_p_t = binomial_se(result.p_t, config.samples);

  result.t_mean = mean_with_error(ts);
  result.r_mean = mean_with_error(rs);
  result.e_mean = mean_with_error(es);
  result.e_bound = mean_with_error(e_bound);

  if (config.keep_states) {
    result.states = std::move(rows);
  }
  return result;
}

CampaignResult run_r_binned_scan(const CampaignConfig& config) {
  return run_volume_campaign(config);
}

CampaignResult run_bound_entanglement_campaign(const CampaignConfig& config) {
  if (config.split.dim() <= 6) {
    throw std::invalid_argument(
        "bound-entanglement campaign: requires N > 6 (PPT is conclusive below)");
  }
  CampaignConfig cfg = config;
  cfg.estimate_ppt = true;
  return run_volume_campaign(cfg);
}

FixedSpectrumResult run_fixed_spectrum_study(const VectorXd& spectrum,
                                             const BipartiteSplit& split, std::size_t samples,
                                             std::uint64_t seed, int threads) {
  split.require_valid();
  if (samples < 1) {
    throw std::invalid_argument("fixed-spectrum study: sample count must be >= 1");
  }
  const Index n = split.dim();
  const MeasureSpec measure = MeasureSpec::fixed_spectrum(spectrum);
  const bool exact = n == 4;
  const WalkParams walk = WalkParams::defaults_for(n);
  const double e_cutoff = 3e-4;

  struct Row {
    double t = 0.0, c = 0.0, e = 0.0;
    bool separable = false;
  };
  std::vector<Row> rows(samples);
  const RngStream root(seed);

  parallel_for(samples, threads, [&](std::size_t i) {
    RngStream stream = root.split(i);
    const MatrixXcd rho = sample_density_matrix(n, measure, stream);
    const PtResult pt = pt_spectrum_and_negativity(rho, split);
    Row row;
    row.t = pt.negativity;
    if (exact) {
      const ConcurrenceResult cr = concurrence(rho);
      row.c = cr.concurrence;
      row.e = cr.entanglement;
      row.separable = pt.ppt;
    } else {
      row.c = kNaN;
      row.e = estimate_eof(rho, split, walk, stream.split(kWalkSubstream)).e_min;
      row.separable = n <= 6 ? pt.ppt : (pt.ppt && row.e <= e_cutoff);
    }
    rows[i] = row;
  });

  FixedSpectrumResult result;
  result.samples = samples;
  std::vector<double> ts, cs, es;
  std::size_t n_sep = 0;
  for (const Row& row : rows) {
    ts.push_back(row.t);
    es.push_back(row.e);
    if (exact) {
      cs.push_back(row.c);
    }
    n_sep += row.separable ? 1 : 0;
  }
  result.p_s = static_cast<double>(n_sep) / static_cast<double>(samples);
  result.se_p_s = binomial_se(result.p_s, samples);
  result.t_mean = mean_with_error(ts);
  result.c_mean = mean_with_error(cs);
  result.e_mean = mean_with_error(es);
  return result;
}

ScatterResult run_scatter_ct(const CampaignConfig& config) {
  if (config.split.dim() != 4) {
    throw std::invalid_argument("scatter-ct: exact concurrence needs N = 4");
  }
  CampaignConfig cfg = config;
  cfg.keep_states = true;
  ScatterResult result;
  result.campaign = run_volume_campaign(cfg);

  const auto& states = result.campaign.states;
  double sum_e = 0.0, sum_t = 0.0;
  for (const StateRecord& s : states) {
    sum_e += s.eof;
    sum_t += s.negativity;
  }
  const double n = static_cast<double>(states.size());
  const double me = sum_e / n;
  const double mt = sum_t / n;
  double cov = 0.0, var_e = 0.0, var_t = 0.0;
  result.min_c_minus_t = std::numeric_limits<double>::infinity();
  for (const StateRecord& s : states) {
    cov += (s.eof - me) * (s.negativity - mt);
    var_e += (s.eof - me) * (s.eof - me);
    var_t += (s.negativity - mt) * (s.negativity - mt);
    result.min_c_minus_t = std::min(result.min_c_minus_t, s.concurrence - s.negativity);
  }
  result.corr_e_t = cov / std::sqrt(var_e * var_t);

  result.max_gap_per_bin.reserve(result.campaign.bins.size());
  std::vector<double> gap(result.campaign.bins.size(), 0.0);
  for (const StateRecord& s : states) {
    int k = static_cast<int>(std::floor((s.participation - 1.0) / 3.0 *
                                        static_cast<double>(gap.size())));
    k = std::clamp(k, 0, static_cast<int>(gap.size()) - 1);
    gap[static_cast<std::size_t>(k)] =
        std::max(gap[static_cast<std::size_t>(k)], s.concurrence - s.negativity);
  }
  for (std::size_t k = 0; k < gap.size(); ++k) {
    result.max_gap_per_bin.emplace_back(result.campaign.bins[k].center(), gap[k]);
  }
  return result;
}

PureStudyResult run_pure_state_study(const BipartiteSplit& split, std::size_t samples,
                                     std::uint64_t seed, int threads) {
  split.require_valid();
  if (samples < 1) {
    throw std::invalid_argument("pure-state study: sample count must be >= 1");
  }
  std::vector<double> es(samples);
  const RngStream root(seed);
  parallel_for(samples, threads, [&](std::size_t i) {
    RngStream stream = root.split(i);
    const VectorXcd psi = sample_haar_pure_state(split.dim(), stream);
    es[i] = pure_state_entanglement(psi, split);
  });

  PureStudyResult result;
  result.samples = samples;
  result.e_hist = Histogram(0.0, std::log(static_cast<double>(split.min_side())), 30);
  for (double e : es) {
    result.e_hist.add(e);
  }
  result.e_mean = mean_with_error(es);
  return result;
}

FitResult fit_exponential(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) {
    throw std::invalid_argument("fit_exponential: need at least 3 points");
  }
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, p] : points) {
    if (!(p > 0.0)) {
      throw std::invalid_argument("fit_exponential: probabilities must be positive");
    }
    sx += x;
    sy += std::log(p);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, p] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (std::log(p) - my);
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("fit_exponential: degenerate abscissae");
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;

  FitResult fit;
  fit.amplitude = std::exp(intercept);
  fit.rate = -slope;
  double ss = 0.0;
  for (const auto& [x, p] : points) {
    const double r = std::log(p) - (intercept + slope * x);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace entvol
