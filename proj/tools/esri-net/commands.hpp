#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "json.hpp"
#include "run_config.hpp"

namespace esrinet::cli {

struct ValidateArgs {
  std::optional<double> reference_employment;
};

struct SynthArgs {
  std::size_t n_firms = 1000;
  std::size_t n_edges = 5000;
  double degree_exponent = 1.5;
  std::size_t n_ets = 50;
  double weight_sigma = 1.0;
  std::optional<std::string> fixture;
};

struct SimulateArgs {
  /// Comma-separated ids, or a file with one id per line.
  std::string remove;
};

struct CandidateArgs {
  /// "all-ets", "all", or a file of ids.
  std::string candidates = "all-ets";
  /// Reuse an existing indices.csv instead of recomputing it.
  std::optional<std::string> indices;
};

struct StrategyArgs {
  std::string heuristic;
  double target = 0.20;
  CandidateArgs source;
};

struct FitArgs {
  double hi = 1000.0;
  double lo = 10.0;
  /// Multiplier applied to co2_share_total / ew_esri before thresholding;
  /// 100 expresses the emission share in percent.
  double ratio_scale = 100.0;
  CandidateArgs source;
};

struct ReportArgs {
  double target = 0.20;
  CandidateArgs source;
};

// Each command writes its outputs and config.json into config.out and
// returns the JSON summary printed on stdout. Data problems surface as
// esrinet::Error.
nlohmann::json run_validate(RunConfig& config, const ValidateArgs& args);
nlohmann::json run_synth(RunConfig& config, const SynthArgs& args);
nlohmann::json run_simulate(RunConfig& config, const SimulateArgs& args);
nlohmann::json run_esri(RunConfig& config, const CandidateArgs& args);
nlohmann::json run_strategy_cmd(RunConfig& config, const StrategyArgs& args);
nlohmann::json run_fit_regimes(RunConfig& config, const FitArgs& args);
nlohmann::json run_report(RunConfig& config, const ReportArgs& args);

}  // namespace esrinet::cli
