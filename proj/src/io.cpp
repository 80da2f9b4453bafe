#include "entvol/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace entvol {

namespace {

const char* class_name(StateClass c) {
  switch (c) {
    case StateClass::Separable:
      return "separable";
    case StateClass::BoundEntangled:
      return "bound";
    case StateClass::FreeEntangled:
      return "free";
  }
  return "?";
}

void write_double_array(std::ostream& os, const double* data, std::size_t n) {
  os << '[';
  for (std::size_t i = 0; i < n; ++i) {
    if (i) {
      os << ',';
    }
    os << format_double(data[i]);
  }
  os << ']';
}

void write_mean(std::ostream& os, const char* key, const MeanWithError& m) {
  os << '"' << key << "\":{\"mean\":" << format_double(m.mean)
     << ",\"se\":" << format_double(m.se) << ",\"n\":" << m.n << '}';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  return os;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string measure_to_string(const MeasureSpec& measure) {
  switch (measure.kind) {
    case MeasureSpec::Kind::Pure:
      return "pure";
    case MeasureSpec::Kind::Dirichlet:
      if (measure.lambda == 1.0) {
        return "unitary";
      }
      if (measure.lambda == 0.5) {
        return "orthogonal";
      }
      return "dirichlet:" + format_double(measure.lambda);
    case MeasureSpec::Kind::FixedSpectrum: {
      std::string s = "spectrum:";
      for (Index i = 0; i < measure.spectrum.size(); ++i) {
        if (i) {
          s += ',';
        }
        s += format_double(measure.spectrum(i));
      }
      return s;
    }
  }
  throw std::logic_error("measure_to_string: unknown kind");
}

MeasureSpec parse_measure(const std::string& text) {
  if (text == "unitary") {
    return MeasureSpec::unitary();
  }
  if (text == "orthogonal") {
    return MeasureSpec::orthogonal();
  }
  if (text == "pure") {
    return MeasureSpec::pure();
  }
  if (text.rfind("dirichlet:", 0) == 0) {
    return MeasureSpec::dirichlet(std::stod(text.substr(10)));
  }
  if (text.rfind("spectrum:", 0) == 0) {
    std::vector<double> entries;
    std::stringstream ss(text.substr(9));
    std::string item;
    while (std::getline(ss, item, ',')) {
      entries.push_back(std::stod(item));
    }
    VectorXd d = Eigen::Map<const VectorXd>(entries.data(), static_cast<Index>(entries.size()));
    return MeasureSpec::fixed_spectrum(std::move(d));
  }
  throw std::invalid_argument("unknown measure: " + text);
}

void write_state_json(std::ostream& os, const MatrixXcd& rho) {
  const Index n = rho.rows();
  os << "{\"n\":" << n << ",\"re\":[";
  bool first = true;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (!first) {
        os << ',';
      }
      first = false;
      os << format_double(rho(i, j).real());
    }
  }
  os << "],\"im\":[";
  first = true;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (!first) {
        os << ',';
      }
      first = false;
      os << format_double(rho(i, j).imag());
    }
  }
  os << "]}";
}

MatrixXcd parse_state_json(const std::string& line) {
  const nlohmann::json doc = nlohmann::json::parse(line);
  const Index n = doc.at("n").get<Index>();
  if (n < 1) {
    throw std::invalid_argument("state: dimension must be >= 1");
  }
  const auto& re = doc.at("re");
  const auto& im = doc.at("im");
  if (static_cast<Index>(re.size()) != n * n || static_cast<Index>(im.size()) != n * n) {
    throw std::invalid_argument("state: re/im must hold n^2 row-major entries");
  }
  MatrixXcd rho(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const std::size_t k = static_cast<std::size_t>(i * n + j);
      rho(i, j) = Complex(re[k].get<double>(), im[k].get<double>());
    }
  }
  return rho;
}

void write_states_jsonl(std::ostream& os, const std::vector<MatrixXcd>& states) {
  for (const MatrixXcd& rho : states) {
    write_state_json(os, rho);
    os << '\n';
  }
}

std::vector<MatrixXcd> read_states_jsonl(std::istream& is) {
  std::vector<MatrixXcd> states;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    states.push_back(parse_state_json(line));
  }
  return states;
}

void write_analysis_json(std::ostream& os, const AnalysisRecord& rec) {
  os << "{\"negativity\":" << format_double(rec.negativity)
     << ",\"ppt\":" << (rec.ppt ? "true" : "false")
     << ",\"participation\":" << format_double(rec.participation)
     << ",\"von_neumann\":" << format_double(rec.von_neumann) << ",\"renyi\":[";
  for (std::size_t i = 0; i < rec.renyi.size(); ++i) {
    if (i) {
      os << ',';
    }
    os << "{\"q\":" << format_double(rec.renyi[i].first)
       << ",\"h\":" << format_double(rec.renyi[i].second) << '}';
  }
  os << "],\"pt_spectrum\":";
  write_double_array(os, rec.pt_spectrum.data(), static_cast<std::size_t>(rec.pt_spectrum.size()));
  os << '}';
}

void write_eof_json(std::ostream& os, const EofEstimate& est) {
  os << "{\"e_min\":" << format_double(est.e_min) << ",\"cardinality\":" << est.cardinality
     << ",\"per_m\":[";
  for (std::size_t i = 0; i < est.per_m.size(); ++i) {
    if (i) {
      os << ',';
    }
    os << "{\"m\":" << est.per_m[i].first << ",\"e\":" << format_double(est.per_m[i].second)
       << '}';
  }
  os << "],\"iterations\":" << est.iterations
     << ",\"verdict\":\"" << (est.separable_like ? "separable-like" : "entangled-like")
     << "\",\"complete\":" << (est.complete ? "true" : "false");
  const MatrixXcd& mem = est.best.members;
  os << ",\"decomposition\":{\"n\":" << mem.rows() << ",\"m\":" << mem.cols() << ",\"re\":[";
  bool first = true;
  for (Index i = 0; i < mem.rows(); ++i) {
    for (Index j = 0; j < mem.cols(); ++j) {
      if (!first) {
        os << ',';
      }
      first = false;
      os << format_double(mem(i, j).real());
    }
  }
  os << "],\"im\":[";
  first = true;
  for (Index i = 0; i < mem.rows(); ++i) {
    for (Index j = 0; j < mem.cols(); ++j) {
      if (!first) {
        os << ',';
      }
      first = false;
      os << format_double(mem(i, j).imag());
    }
  }
  os << "]}}";
}

void write_fit_json(std::ostream& os, const FitResult& fit) {
  os << "{\"amplitude\":" << format_double(fit.amplitude)
     << ",\"rate\":" << format_double(fit.rate)
     << ",\"residual\":" << format_double(fit.residual) << '}';
}

void write_fixed_spectrum_json(std::ostream& os, const FixedSpectrumResult& result) {
  os << "{\"samples\":" << result.samples << ",\"p_s\":" << format_double(result.p_s)
     << ",\"se_p_s\":" << format_double(result.se_p_s) << ',';
  write_mean(os, "e", result.e_mean);
  os << ',';
  write_mean(os, "t", result.t_mean);
  os << ',';
  write_mean(os, "c", result.c_mean);
  os << '}';
}

namespace {

void write_histogram_json(std::ostream& os, const Histogram& hist) {
  os << "{\"lo\":" << format_double(hist.lo) << ",\"hi\":" << format_double(hist.hi)
     << ",\"zero_mass\":" << hist.zero_mass << ",\"total\":" << hist.total << ",\"counts\":[";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    if (i) {
      os << ',';
    }
    os << hist.counts[i];
  }
  os << "]}";
}

}  // namespace

void write_pure_study_json(std::ostream& os, const PureStudyResult& result) {
  os << "{\"samples\":" << result.samples << ',';
  write_mean(os, "e", result.e_mean);
  os << ",\"e_hist\":";
  write_histogram_json(os, result.e_hist);
  os << '}';
}

void write_scatter_json(std::ostream& os, const ScatterResult& result) {
  os << "{\"corr_e_t\":" << format_double(result.corr_e_t)
     << ",\"min_c_minus_t\":" << format_double(result.min_c_minus_t)
     << ",\"max_gap_per_bin\":[";
  for (std::size_t i = 0; i < result.max_gap_per_bin.size(); ++i) {
    if (i) {
      os << ',';
    }
    os << "{\"r\":" << format_double(result.max_gap_per_bin[i].first)
       << ",\"gap\":" << format_double(result.max_gap_per_bin[i].second) << '}';
  }
  os << "],\"samples\":" << result.campaign.samples << '}';
}

void write_campaign_json(std::ostream& os, const CampaignConfig& config,
                         const CampaignResult& result) {
  os << "{\"config\":{\"na\":" << config.split.n_a << ",\"nb\":" << config.split.n_b
     << ",\"measure\":\"" << measure_to_string(config.measure)
     << "\",\"samples\":" << config.samples << ",\"seed\":" << config.seed
     << ",\"bins\":" << config.r_bins << ",\"ec\":" << format_double(config.e_cutoff);
  if (config.walk) {
    const WalkParams& w = *config.walk;
    os << ",\"walk\":{\"chi0\":" << format_double(w.chi0)
       << ",\"chi_end\":" << format_double(w.chi_end) << ",\"alpha\":" << format_double(w.alpha)
       << ",\"i_change\":" << w.i_change << ",\"l_mat\":" << w.l_mat << ",\"m_min\":" << w.m_min
       << ",\"m_max\":" << w.m_max << ",\"q\":" << format_double(w.q)
       << ",\"i_max\":" << w.i_max << '}';
  }
  os << "},\"counts\":{\"samples\":" << result.samples << ",\"separable\":" << result.n_sep
     << ",\"bound\":" << result.n_bound << ",\"free\":" << result.n_free
     << ",\"ppt_estimated\":" << result.n_ppt_estimated
     << ",\"bound_at_2ec\":" << result.n_bound_at_2ec << '}';
  os << ",\"probabilities\":{\"p_t\":" << format_double(result.p_t)
     << ",\"se_p_t\":" << format_double(result.se_p_t) << ",\"p_s\":" << format_double(result.p_s)
     << ",\"se_p_s\":" << format_double(result.se_p_s) << ",\"p_b\":" << format_double(result.p_b)
     << ",\"se_p_b\":" << format_double(result.se_p_b) << ",\"p_f\":" << format_double(result.p_f)
     << ",\"se_p_f\":" << format_double(result.se_p_f) << '}';
  os << ",\"means\":{";
  write_mean(os, "t", result.t_mean);
  os << ',';
  write_mean(os, "r", result.r_mean);
  os << ',';
  write_mean(os, "e", result.e_mean);
  os << ',';
  write_mean(os, "e_bound", result.e_bound);
  os << ",\"max_e_bound\":" << format_double(result.max_e_bound) << '}';
  os << ",\"records\":[";
  for (std::size_t i = 0; i < result.bins.size(); ++i) {
    const RBin& bin = result.bins[i];
    if (i) {
      os << ',';
    }
    os << "{\"r_lo\":" << format_double(bin.lo) << ",\"r_hi\":" << format_double(bin.hi)
       << ",\"count\":" << bin.count << ",\"empty\":" << (bin.empty() ? "true" : "false")
       << ",\"n_sep\":" << bin.n_sep << ",\"n_bound\":" << bin.n_bound
       << ",\"n_free\":" << bin.n_free << ",\"p_s\":" << format_double(bin.p_s())
       << ",\"p_t\":" << format_double(bin.p_t()) << ",\"p_b\":" << format_double(bin.p_b())
       << ",\"mean_t\":" << format_double(bin.mean_t())
       << ",\"mean_e\":" << format_double(bin.mean_e()) << ",\"count_e\":" << bin.count_e << '}';
  }
  os << "],\"e_hist\":";
  write_histogram_json(os, result.e_hist);
  os << '}';
}

void write_bins_csv(std::ostream& os, const CampaignResult& result) {
  os << "r_lo,r_hi,count,n_sep,n_bound,n_free,p_s,p_t,p_b,mean_t,mean_e,count_e\n";
  for (const RBin& bin : result.bins) {
    os << format_double(bin.lo) << ',' << format_double(bin.hi) << ',' << bin.count << ','
       << bin.n_sep << ',' << bin.n_bound << ',' << bin.n_free << ','
       << format_double(bin.p_s()) << ',' << format_double(bin.p_t()) << ','
       << format_double(bin.p_b()) << ',' << format_double(bin.mean_t()) << ','
       << format_double(bin.mean_e()) << ',' << bin.count_e << '\n';
  }
}

void write_states_csv(std::ostream& os, const CampaignResult& result) {
  os << "index,negativity,participation,concurrence,eof,label\n";
  for (const StateRecord& s : result.states) {
    os << s.index << ',' << format_double(s.negativity) << ','
       << format_double(s.participation) << ',' << format_double(s.concurrence) << ','
       << format_double(s.eof) << ',' << class_name(s.label) << '\n';
  }
}

void write_campaign_outputs(const std::string& base, const CampaignConfig& config,
                            const CampaignResult& result) {
  {
    auto os = open_out(base + ".json");
    write_campaign_json(os, config, result);
    os << '\n';
  }
  {
    auto os = open_out(base + ".bins.csv");
    write_bins_csv(os, result);
  }
  if (!result.states.empty()) {
    auto os = open_out(base + ".states.csv");
    write_states_csv(os, result);
  }
}

}  // namespace entvol
