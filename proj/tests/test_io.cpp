#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "entvol/io.hpp"
#include "stat_utils.hpp"

using namespace entvol;
namespace et = entvol::testing;

TEST_CASE("format_double round-trips binary64 exactly") {
  for (double x : {1.0 / 3.0, 0.1, 1e-17, 2.6530000000000001, -0.0, 1234567.89}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("state JSON lines round-trip exactly") {
  RngStream rng(71);
  std::vector<MatrixXcd> states;
  for (int i = 0; i < 4; ++i) {
    states.push_back(sample_density_matrix(3 + i, MeasureSpec::unitary(), rng));
  }
  std::ostringstream os;
  write_states_jsonl(os, states);

  std::istringstream is(os.str());
  const auto parsed = read_states_jsonl(is);
  REQUIRE(parsed.size() == states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    CHECK((parsed[i].array() == states[i].array()).all());
  }
}

TEST_CASE("state parser rejects malformed objects") {
  CHECK_THROWS(parse_state_json("{\"n\":2,\"re\":[1,0,0],\"im\":[0,0,0,0]}"));
  CHECK_THROWS(parse_state_json("{\"n\":0,\"re\":[],\"im\":[]}"));
  CHECK_THROWS(parse_state_json("not json"));
}

TEST_CASE("measure names round-trip") {
  for (const char* name : {"unitary", "orthogonal", "pure", "dirichlet:0.25"}) {
    CHECK(measure_to_string(parse_measure(name)) == name);
  }
  const MeasureSpec m = parse_measure("spectrum:0.5,0.5,0,0");
  REQUIRE(m.kind == MeasureSpec::Kind::FixedSpectrum);
  CHECK(m.spectrum(0) == 0.5);
  CHECK(measure_to_string(parse_measure(measure_to_string(m))) == measure_to_string(m));
  CHECK(parse_measure("unitary").lambda == 1.0);
  CHECK(parse_measure("orthogonal").lambda == 0.5);
  CHECK_THROWS_AS(parse_measure("banana"), std::invalid_argument);
  CHECK_THROWS_AS(parse_measure("spectrum:0.9,0.2"), std::invalid_argument);
}

TEST_CASE("analysis record serializes to parseable JSON") {
  RngStream rng(72);
  const MatrixXcd rho = sample_density_matrix(4, MeasureSpec::unitary(), rng);
  const AnalysisRecord rec = analyze_state(rho, {2, 2}, {2.0});
  std::ostringstream os;
  write_analysis_json(os, rec);
  const auto doc = nlohmann::json::parse(os.str());
  CHECK(doc.at("negativity").get<double>() == rec.negativity);
  CHECK(doc.at("ppt").get<bool>() == rec.ppt);
  CHECK(doc.at("participation").get<double>() == rec.participation);
  CHECK(doc.at("pt_spectrum").size() == 4);
  CHECK(doc.at("renyi")[0].at("q").get<double>() == 2.0);
}

TEST_CASE("eof estimate serializes with its decomposition") {
  RngStream rng(73);
  const MatrixXcd rho = sample_density_matrix(4, MeasureSpec::unitary(), rng);
  const EofEstimate est = estimate_eof(rho, {2, 2}, WalkParams::defaults_for(4), RngStream(5));
  std::ostringstream os;
  write_eof_json(os, est);
  const auto doc = nlohmann::json::parse(os.str());
  CHECK(doc.at("e_min").get<double>() == est.e_min);
  CHECK(doc.at("cardinality").get<Index>() == est.cardinality);
  CHECK(doc.at("complete").get<bool>());
  CHECK(doc.at("decomposition").at("re").size() == 16);
  CHECK(doc.at("verdict").is_string());
}

TEST_CASE("campaign outputs: files exist, parse, and are byte-stable") {
  CampaignConfig cfg;
  cfg.split = {2, 2};
  cfg.measure = MeasureSpec::unitary();
  cfg.samples = 500;
  cfg.seed = 9;
  cfg.keep_states = true;
  const CampaignResult result = run_volume_campaign(cfg);

  const auto dir = std::filesystem::temp_directory_path() / "entvol_io_test";
  std::filesystem::create_directories(dir);
  const std::string base = (dir / "campaign").string();
  write_campaign_outputs(base, cfg, result);
  write_campaign_outputs(base + "_again", cfg, result);

  std::ifstream json_in(base + ".json");
  REQUIRE(json_in.good());
  std::stringstream buf;
  buf << json_in.rdbuf();
  const auto doc = nlohmann::json::parse(buf.str());
  CHECK(doc.at("config").at("seed").get<std::uint64_t>() == 9);
  CHECK(doc.at("config").at("measure").get<std::string>() == "unitary");
  CHECK(doc.at("records").size() == 30);
  CHECK(doc.at("counts").at("samples").get<std::size_t>() == 500);

  std::ifstream again(base + "_again.json");
  std::stringstream buf2;
  buf2 << again.rdbuf();
  CHECK(buf.str() == buf2.str());

  std::ifstream bins(base + ".bins.csv");
  REQUIRE(bins.good());
  int lines = 0;
  std::string line;
  while (std::getline(bins, line)) {
    ++lines;
  }
  CHECK(lines == 31);  // header + 30 bins

  std::ifstream states(base + ".states.csv");
  REQUIRE(states.good());
  lines = 0;
  while (std::getline(states, line)) {
    ++lines;
  }
  CHECK(lines == 501);

  std::filesystem::remove_all(dir);
}
