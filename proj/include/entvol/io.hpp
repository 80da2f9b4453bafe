#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "entvol/analysis.hpp"
#include "entvol/campaign.hpp"
#include "entvol/eof.hpp"

namespace entvol {

/// Shortest text keeping all 17 significant digits (%.17g).
std::string format_double(double x);

/// Round-trippable measure names: unitary | orthogonal | dirichlet:<lambda> |
/// pure | spectrum:<d1,...,dN>.
std::string measure_to_string(const MeasureSpec& measure);
MeasureSpec parse_measure(const std::string& text);

/// One state as a single-line JSON object {n, re, im}, matrices row-major.
void write_state_json(std::ostream& os, const MatrixXcd& rho);
MatrixXcd parse_state_json(const std::string& line);

/// JSON-lines stream: one state object per line; blank lines ignored.
void write_states_jsonl(std::ostream& os, const std::vector<MatrixXcd>& states);
std::vector<MatrixXcd> read_states_jsonl(std::istream& is);

void write_analysis_json(std::ostream& os, const AnalysisRecord& rec);
void write_eof_json(std::ostream& os, const EofEstimate& est);
void write_fit_json(std::ostream& os, const FitResult& fit);
void write_fixed_spectrum_json(std::ostream& os, const FixedSpectrumResult& result);
void write_pure_study_json(std::ostream& os, const PureStudyResult& result);
void write_scatter_json(std::ostream& os, const ScatterResult& result);

/// Campaign result with its config header as JSON, plus CSV mirrors
/// <base>.bins.csv (one row per R bin) and, when per-state records were
/// kept, <base>.states.csv (one row per state). The JSON goes to <base>.json.
void write_campaign_outputs(const std::string& base, const CampaignConfig& config,
                            const CampaignResult& result);

void write_campaign_json(std::ostream& os, const CampaignConfig& config,
                         const CampaignResult& result);
void write_bins_csv(std::ostream& os, const CampaignResult& result);
void write_states_csv(std::ostream& os, const CampaignResult& result);

}  // namespace entvol
