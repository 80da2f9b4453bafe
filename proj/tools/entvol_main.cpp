// Command-line front end: sampling, per-state analysis, EoF estimation and
// the Monte Carlo campaigns, all emitting JSON (and CSV mirrors for
// campaigns). Exit codes: 0 ok, 1 invalid configuration, 2 numerical
// failure, 3 iteration budget exhausted with partial results written.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entvol/campaign.hpp"
#include "entvol/concurrence.hpp"
#include "entvol/io.hpp"

namespace {

using namespace entvol;

std::vector<MatrixXcd> load_states(const std::string& in_path, bool use_stdin) {
  if (use_stdin) {
    return read_states_jsonl(std::cin);
  }
  if (in_path.empty()) {
    throw std::invalid_argument("provide --in <path> or --stdin");
  }
  std::ifstream is(in_path);
  if (!is) {
    throw std::invalid_argument("cannot open input file: " + in_path);
  }
  return read_states_jsonl(is);
}

// Stream to --out <path> or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) {
        throw std::invalid_argument("cannot open output file: " + path);
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct WalkFlags {
  std::optional<double> chi0, chi_end, alpha, q;
  std::optional<int> i_change, l_mat;
  std::optional<Index> m_min, m_max;
  std::optional<std::uint64_t> i_max;

  void attach(CLI::App* cmd) {
    cmd->add_option("--chi0", chi0, "initial walk angle");
    cmd->add_option("--chi-end", chi_end, "terminal walk angle");
    cmd->add_option("--alpha", alpha, "angle reduction factor in (0,1)");
    cmd->add_option("--ichange", i_change, "rejected attempts per angle level");
    cmd->add_option("--lmat", l_mat, "restarts per decomposition size");
    cmd->add_option("--mmin", m_min, "smallest decomposition size (default N)");
    cmd->add_option("--mmax", m_max, "largest decomposition size (default N)");
    cmd->add_option("--q", q, "entropy order of the objective (default 1)");
    cmd->add_option("--imax", i_max, "cap on objective evaluations (0 = none)");
  }

  WalkParams resolve(Index n) const {
    WalkParams p = WalkParams::defaults_for(n);
    if (chi0) p.chi0 = *chi0;
    if (chi_end) p.chi_end = *chi_end;
    if (alpha) p.alpha = *alpha;
    if (i_change) p.i_change = *i_change;
    if (l_mat) p.l_mat = *l_mat;
    if (m_min) p.m_min = *m_min;
    if (m_max) p.m_max = *m_max;
    if (q) p.q = *q;
    if (i_max) p.i_max = *i_max;
    return p;
  }

  bool any() const {
    return chi0 || chi_end || alpha || q || i_change || l_mat || m_min || m_max || i_max;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"entvol: random mixed states, entanglement volumes and EoF estimation"};
  app.require_subcommand(1);

  // --- sample ---
  auto* sample = app.add_subcommand("sample", "draw random density matrices");
  Index sample_n = 0;
  std::string sample_measure = "unitary";
  std::size_t sample_count = 1;
  std::uint64_t sample_seed = 1;
  std::string sample_out;
  sample->add_option("--n", sample_n, "Hilbert space dimension")->required();
  sample->add_option("--measure", sample_measure,
                     "unitary|orthogonal|dirichlet:<l>|pure|spectrum:<d1,...,dN>");
  sample->add_option("--count", sample_count, "number of states");
  sample->add_option("--seed", sample_seed, "rng seed");
  sample->add_option("--out", sample_out, "output path (default stdout)");

  // --- analyze ---
  auto* analyze = app.add_subcommand("analyze", "per-state negativity/mixedness analysis");
  Index an_na = 0, an_nb = 0;
  std::string an_in, an_out;
  bool an_stdin = false;
  std::vector<double> an_q{2.0};
  analyze->add_option("--na", an_na, "dimension of subsystem A")->required();
  analyze->add_option("--nb", an_nb, "dimension of subsystem B")->required();
  analyze->add_option("--in", an_in, "states file (JSON lines)");
  analyze->add_flag("--stdin", an_stdin, "read states from stdin");
  analyze->add_option("--q", an_q, "Renyi orders to report");
  analyze->add_option("--out", an_out, "output path (default stdout)");

  // --- eof ---
  auto* eof = app.add_subcommand("eof", "stochastic EoF upper bound for given states");
  Index eof_na = 0, eof_nb = 0;
  std::string eof_in, eof_out;
  bool eof_stdin = false;
  std::uint64_t eof_seed = 1;
  WalkFlags eof_walk;
  eof->add_option("--na", eof_na, "dimension of subsystem A")->required();
  eof->add_option("--nb", eof_nb, "dimension of subsystem B")->required();
  eof->add_option("--in", eof_in, "states file (JSON lines)");
  eof->add_flag("--stdin", eof_stdin, "read states from stdin");
  eof->add_option("--seed", eof_seed, "rng seed");
  eof->add_option("--out", eof_out, "output path (default stdout)");
  eof_walk.attach(eof);

  // --- volume / scan-r (same engine, different emphasis) ---
  struct CampaignFlags {
    Index na = 0, nb = 0;
    std::string measure = "unitary";
    std::optional<std::size_t> count;
    std::uint64_t seed = 1;
    double ec = 3e-4;
    int bins = 30;
    bool full_scale = false;
    bool keep_states = false;
    bool no_estimate = false;
    int threads = 0;
    std::string out;
    WalkFlags walk;

    void attach(CLI::App* cmd) {
      cmd->add_option("--na", na, "dimension of subsystem A")->required();
      cmd->add_option("--nb", nb, "dimension of subsystem B")->required();
      cmd->add_option("--measure", measure,
                      "unitary|orthogonal|dirichlet:<l>|pure|spectrum:<d1,...,dN>");
      cmd->add_option("--count", count, "sample count (default: desk scale)");
      cmd->add_option("--seed", seed, "rng seed");
      cmd->add_option("--ec", ec, "bound-entanglement cut-off E_c");
      cmd->add_option("--bins", bins, "R bins over [1, N]");
      cmd->add_flag("--full-scale", full_scale, "paper-scale sample count");
      cmd->add_flag("--keep-states", keep_states, "retain per-state records");
      cmd->add_flag("--no-estimate", no_estimate,
                    "skip the EoF walk for PPT states (P_T only, N > 6)");
      cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
      cmd->add_option("--out", out, "output base path (writes .json/.bins.csv)");
      walk.attach(cmd);
    }

    CampaignConfig config() const {
      CampaignConfig cfg;
      cfg.split = {na, nb};
      cfg.measure = parse_measure(measure);
      const Index n = na * nb;
      cfg.samples = count.value_or(n > 6 ? (full_scale ? 100000u : 10000u) : 100000u);
      cfg.seed = seed;
      cfg.r_bins = bins;
      cfg.e_cutoff = ec;
      cfg.threads = threads;
      cfg.keep_states = keep_states;
      cfg.estimate_ppt = !no_estimate;
      if (walk.any() || n > 6) {
        cfg.walk = walk.resolve(n);
      }
      return cfg;
    }
  };

  auto* volume = app.add_subcommand("volume", "Monte Carlo volume campaign");
  CampaignFlags volume_flags;
  volume_flags.attach(volume);

  auto* scan_r = app.add_subcommand("scan-r", "R-binned conditional probabilities");
  CampaignFlags scan_flags;
  scan_flags.attach(scan_r);

  // --- scatter-ct ---
  auto* scatter = app.add_subcommand("scatter-ct", "negativity vs concurrence scatter (N=4)");
  CampaignFlags scatter_flags;
  scatter_flags.attach(scatter);

  // --- fixed-spectrum ---
  auto* fixed = app.add_subcommand("fixed-spectrum", "Haar orbit of a fixed spectrum");
  Index fx_na = 0, fx_nb = 0;
  std::string fx_spectrum, fx_out;
  std::size_t fx_count = 10000;
  std::uint64_t fx_seed = 1;
  int fx_threads = 0;
  fixed->add_option("--na", fx_na, "dimension of subsystem A")->required();
  fixed->add_option("--nb", fx_nb, "dimension of subsystem B")->required();
  fixed->add_option("--spectrum", fx_spectrum, "comma-separated eigenvalues")->required();
  fixed->add_option("--count", fx_count, "sample count");
  fixed->add_option("--seed", fx_seed, "rng seed");
  fixed->add_option("--threads", fx_threads, "worker threads");
  fixed->add_option("--out", fx_out, "output path (default stdout)");

  // --- pure-study ---
  auto* pure = app.add_subcommand("pure-study", "entanglement of Haar-random pure states");
  Index pu_na = 0, pu_nb = 0;
  std::size_t pu_count = 100000;
  std::uint64_t pu_seed = 1;
  int pu_threads = 0;
  std::string pu_out;
  pure->add_option("--na", pu_na, "dimension of subsystem A")->required();
  pure->add_option("--nb", pu_nb, "dimension of subsystem B")->required();
  pure->add_option("--count", pu_count, "sample count");
  pure->add_option("--seed", pu_seed, "rng seed");
  pure->add_option("--threads", pu_threads, "worker threads");
  pure->add_option("--out", pu_out, "output path (default stdout)");

  // --- fit ---
  auto* fit = app.add_subcommand("fit", "exponential fit P(N) = A exp(-cN)");
  std::vector<std::string> fit_points;
  std::string fit_in, fit_out;
  fit->add_option("--point", fit_points, "data point as N=P (repeatable)");
  fit->add_option("--in", fit_in, "CSV file with N,P rows");
  fit->add_option("--out", fit_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (*sample) {
    const MeasureSpec measure = parse_measure(sample_measure);
    Sink sink(sample_out);
    const RngStream root(sample_seed);
    for (std::size_t i = 0; i < sample_count; ++i) {
      RngStream stream = root.split(i);
      write_state_json(sink.stream(), sample_density_matrix(sample_n, measure, stream));
      sink.stream() << '\n';
    }
    return 0;
  }

  if (*analyze) {
    const BipartiteSplit split{an_na, an_nb};
    const auto states = load_states(an_in, an_stdin);
    Sink sink(an_out);
    for (const MatrixXcd& rho : states) {
      write_analysis_json(sink.stream(), analyze_state(rho, split, an_q));
      sink.stream() << '\n';
    }
    return 0;
  }

  if (*eof) {
    const BipartiteSplit split{eof_na, eof_nb};
    const auto states = load_states(eof_in, eof_stdin);
    Sink sink(eof_out);
    const RngStream root(eof_seed);
    bool incomplete = false;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const WalkParams params = eof_walk.resolve(states[i].rows());
      const EofEstimate est = estimate_eof(states[i], split, params, root.split(i));
      incomplete = incomplete || !est.complete;
      write_eof_json(sink.stream(), est);
      sink.stream() << '\n';
    }
    return incomplete ? 3 : 0;
  }

  auto run_campaign = [](const CampaignFlags& flags, bool bins_to_stdout) {
    const CampaignConfig cfg = flags.config();
    const CampaignResult result = run_volume_campaign(cfg);
    if (!flags.out.empty()) {
      write_campaign_outputs(flags.out, cfg, result);
      std::cout << "P_T=" << format_double(result.p_t) << " P_S=" << format_double(result.p_s)
                << " P_B=" << format_double(result.p_b) << " P_F=" << format_double(result.p_f)
                << " <t>=" << format_double(result.t_mean.mean)
                << " <R>=" << format_double(result.r_mean.mean) << " -> " << flags.out
                << ".json\n";
    } else if (bins_to_stdout) {
      write_bins_csv(std::cout, result);
    } else {
      write_campaign_json(std::cout, cfg, result);
      std::cout << '\n';
    }
    return 0;
  };

  if (*volume) {
    return run_campaign(volume_flags, false);
  }
  if (*scan_r) {
    return run_campaign(scan_flags, true);
  }

  if (*scatter) {
    CampaignConfig cfg = scatter_flags.config();
    const ScatterResult result = run_scatter_ct(cfg);
    if (!scatter_flags.out.empty()) {
      {
        std::ofstream os(scatter_flags.out + ".json");
        if (!os) {
          throw std::invalid_argument("cannot open output file: " + scatter_flags.out + ".json");
        }
        write_scatter_json(os, result);
        os << '\n';
      }
      {
        std::ofstream os(scatter_flags.out + ".states.csv");
        write_states_csv(os, result.campaign);
      }
      std::cout << "corr(E,t)=" << format_double(result.corr_e_t) << " -> " << scatter_flags.out
                << ".states.csv\n";
    } else {
      write_scatter_json(std::cout, result);
      std::cout << '\n';
    }
    return 0;
  }

  if (*fixed) {
    const MeasureSpec measure = parse_measure("spectrum:" + fx_spectrum);
    const FixedSpectrumResult result = run_fixed_spectrum_study(
        measure.spectrum, BipartiteSplit{fx_na, fx_nb}, fx_count, fx_seed, fx_threads);
    Sink sink(fx_out);
    write_fixed_spectrum_json(sink.stream(), result);
    sink.stream() << '\n';
    return 0;
  }

  if (*pure) {
    const PureStudyResult result =
        run_pure_state_study(BipartiteSplit{pu_na, pu_nb}, pu_count, pu_seed, pu_threads);
    Sink sink(pu_out);
    write_pure_study_json(sink.stream(), result);
    sink.stream() << '\n';
    return 0;
  }

  if (*fit) {
    std::vector<std::pair<double, double>> points;
    for (const std::string& p : fit_points) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument("fit: --point expects N=P");
      }
      points.emplace_back(std::stod(p.substr(0, eq)), std::stod(p.substr(eq + 1)));
    }
    if (!fit_in.empty()) {
      std::ifstream is(fit_in);
      if (!is) {
        throw std::invalid_argument("cannot open input file: " + fit_in);
      }
      std::string line;
      while (std::getline(is, line)) {
        if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-' || line[0] == '.')) {
          continue;  // header or blank
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
          throw std::invalid_argument("fit: CSV rows must be N,P");
        }
        points.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
      }
    }
    Sink sink(fit_out);
    write_fit_json(sink.stream(), fit_exponential(points));
    sink.stream() << '\n';
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const entvol::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
