#include "run_config.hpp"

#include <cmath>
#include <fstream>

#include "esrinet/csv.hpp"
#include "esrinet/error.hpp"

namespace esrinet::cli {

PropagationOptions RunConfig::propagation() const {
  PropagationOptions o;
  o.tolerance = tolerance;
  o.max_iterations = max_iterations;
  o.demand = demand;
  return o;
}

EmissionConfig RunConfig::emissions() const { return {total_co2}; }

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["subcommand"] = subcommand;
  j["net"] = net.empty() ? nlohmann::json(nullptr) : nlohmann::json(net.string());
  j["out"] = out.string();
  j["threads"] = threads;
  j["seed"] = seed;
  j["calibration"] = {
      {"gamma", gamma},
      {"x0_rule", std::string(to_string(x0_rule))},
      {"essentiality", essentiality.empty() ? std::string("bundled-default") : essentiality.string()},
  };
  j["propagation"] = {
      {"tolerance", tolerance},
      {"max_iterations", max_iterations},
      {"demand_shock", std::string(to_string(demand))},
  };
  j["total_co2"] = total_co2 ? nlohmann::json(*total_co2) : nlohmann::json(nullptr);
  j["options"] = extra;
  return j;
}

namespace {

void set_gamma(RunConfig& c, double g) {
  if (!(g >= 0.0 && g <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must lie in [0, 1]");
  c.gamma = g;
}

void set_x0_rule(RunConfig& c, const std::string& text) {
  const auto rule = parse_x0_rule(text);
  if (!rule) throw Error(ErrorCode::kInvalidArgument, "x0 rule must be 'out' or 'max', got '" + text + "'");
  c.x0_rule = *rule;
}

void set_demand(RunConfig& c, const std::string& text) {
  const auto mode = parse_demand_shock(text);
  if (!mode) {
    throw Error(ErrorCode::kInvalidArgument, "demand shock must be 'removed-only' or 'cascade', got '" + text + "'");
  }
  c.demand = *mode;
}

void set_tolerance(RunConfig& c, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  c.tolerance = tol;
}

void set_max_iterations(RunConfig& c, std::size_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "max-iter must be at least 1");
  c.max_iterations = n;
}

void set_total(RunConfig& c, double total) {
  if (!(total > 0.0)) throw Error(ErrorCode::kInvalidArgument, "total CO2 must be positive");
  c.total_co2 = total;
}

void apply_network_defaults(RunConfig& c) {
  if (c.net.empty()) return;
  const auto path = c.net / "calibration.json";
  if (!std::filesystem::exists(path)) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(std::ifstream(path));
    if (j.contains("gamma")) set_gamma(c, j["gamma"].get<double>());
    if (j.contains("x0_rule")) set_x0_rule(c, j["x0_rule"].get<std::string>());
    if (j.contains("demand_shock")) set_demand(c, j["demand_shock"].get<std::string>());
    if (j.contains("tolerance")) set_tolerance(c, j["tolerance"].get<double>());
    if (j.contains("max_iterations")) set_max_iterations(c, j["max_iterations"].get<std::size_t>());
    if (j.contains("total_co2")) set_total(c, j["total_co2"].get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, path.string() + ": " + e.what());
  }
}

}  // namespace

void resolve(RunConfig& config, const FlagOverrides& flags) {
  apply_network_defaults(config);
  if (flags.gamma) set_gamma(config, *flags.gamma);
  if (flags.x0_rule) set_x0_rule(config, *flags.x0_rule);
  if (flags.tolerance) set_tolerance(config, *flags.tolerance);
  if (flags.max_iterations) set_max_iterations(config, *flags.max_iterations);
  if (flags.demand) set_demand(config, *flags.demand);
  if (flags.total_co2) set_total(config, *flags.total_co2);
  if (flags.essentiality) {
    config.essentiality = *flags.essentiality;
  } else if (!config.net.empty() && std::filesystem::exists(config.net / kEssentialityFile)) {
    config.essentiality = config.net / kEssentialityFile;
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  csv::write_atomic(path, value.dump(2) + "\n");
}

void write_config(const RunConfig& config) {
  std::filesystem::create_directories(config.out);
  write_json(config.out / "config.json", config.to_json());
}

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace esrinet::cli
