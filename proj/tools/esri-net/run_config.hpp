#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "esrinet/calibration.hpp"
#include "esrinet/indices.hpp"
#include "esrinet/propagation.hpp"
#include "json.hpp"

namespace esrinet::cli {

/// Flags shared by the subcommands, after defaults, the network's
/// calibration.json and explicit flags have been merged (in that order).
struct RunConfig {
  std::string subcommand;
  std::filesystem::path net;
  std::filesystem::path out = "esri-net-out";
  unsigned threads = 0;
  std::uint64_t seed = 1;

  double gamma = 0.5;
  X0Rule x0_rule = X0Rule::kOut;
  /// Path to essentiality.csv; empty selects <net>/essentiality.csv or the bundled default.
  std::filesystem::path essentiality;
  double tolerance = 1e-9;
  std::size_t max_iterations = 1000;
  DemandShock demand = DemandShock::kRemovedOnly;
  std::optional<double> total_co2;

  /// Subcommand-specific resolved values, written verbatim into config.json.
  nlohmann::json extra = nlohmann::json::object();

  PropagationOptions propagation() const;
  EmissionConfig emissions() const;
  nlohmann::json to_json() const;
};

/// Explicit flag values; unset members leave the lower layers in place.
struct FlagOverrides {
  std::optional<double> gamma;
  std::optional<std::string> x0_rule;
  std::optional<std::string> essentiality;
  std::optional<double> tolerance;
  std::optional<std::size_t> max_iterations;
  std::optional<std::string> demand;
  std::optional<double> total_co2;
};

/// Applies <net>/calibration.json (when present) and then the flags.
/// Throws Error{kInvalidArgument} or Error{kSchemaError} on bad values.
void resolve(RunConfig& config, const FlagOverrides& flags);

/// Writes config.json into the output directory.
void write_config(const RunConfig& config);

/// Atomic JSON write with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& value);

/// JSON number, or null for non-finite values.
nlohmann::json number(double x);

}  // namespace esrinet::cli
