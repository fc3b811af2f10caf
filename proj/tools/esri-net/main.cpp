// esri-net: command-line front end.
//
// Exit codes: 0 success (including non-converged runs, which are recorded),
// 2 usage errors, 3 data errors (one JSON line on stderr).

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "esrinet/error.hpp"
#include "run_config.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kDataError = 3;

int data_error(std::string_view code, const std::string& message) {
  const nlohmann::json j{{"error", std::string(code)}, {"message", message}};
  std::fprintf(stderr, "%s\n", j.dump().c_str());
  return kDataError;
}

template <class T>
void optional_flag(CLI::App& app, const std::string& name, std::optional<T>& target, const std::string& help) {
  app.add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace esrinet::cli;

  CLI::App app{"Systemic-risk analysis of firm-level production networks"};
  app.name("esri-net");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  FlagOverrides flags;
  std::string net;
  std::string out;
  app.add_option("--net", net, "Network directory (firms.csv, edges.csv[, essentiality.csv, calibration.json])");
  app.add_option("--out", out, "Output directory")->default_str("esri-net-out");
  app.add_option("--threads", config.threads, "Worker threads, 0 = all available")->default_val(0);
  app.add_option("--seed", config.seed, "Random seed")->default_val(1);
  optional_flag(app, "--gamma", flags.gamma, "Share of output possible without non-essential inputs [0,1] (default 0.5)");
  optional_flag(app, "--essentiality", flags.essentiality, "Essentiality matrix CSV");
  optional_flag(app, "--x0-rule", flags.x0_rule, "Baseline output rule: out|max (default out)");
  optional_flag(app, "--tol", flags.tolerance, "Convergence tolerance, sup-norm (default 1e-9)");
  optional_flag(app, "--max-iter", flags.max_iterations, "Iteration limit (default 1000)");
  optional_flag(app, "--demand-shock", flags.demand, "Upstream channel: removed-only|cascade (default removed-only)");
  optional_flag(app, "--total-co2", flags.total_co2, "Economy-wide CO2 total (default: sum of firm emissions)");

  auto add_candidates = [](CLI::App* sub, CandidateArgs& c, bool allow_indices) {
    sub->add_option("--candidates", c.candidates, "all-ets | all | file of firm ids")->default_val("all-ets");
    if (allow_indices) optional_flag(*sub, "--indices", c.indices, "Reuse an existing indices.csv");
  };

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Load and check a network, print summary statistics");
  optional_flag(*validate, "--reference-employment", validate_args.reference_employment,
                "Economy-wide employment for the coverage ratio");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic network");
  synth->add_option("--n-firms", synth_args.n_firms)->default_val(synth_args.n_firms);
  synth->add_option("--n-edges", synth_args.n_edges)->default_val(synth_args.n_edges);
  synth->add_option("--degree-exponent", synth_args.degree_exponent)->default_val(synth_args.degree_exponent);
  synth->add_option("--n-ets", synth_args.n_ets)->default_val(synth_args.n_ets);
  synth->add_option("--weight-sigma", synth_args.weight_sigma)->default_val(synth_args.weight_sigma);
  optional_flag(*synth, "--fixture", synth_args.fixture, "Copy a checked-in network instead of generating one");

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand("simulate", "Propagate the removal of a set of firms");
  simulate->add_option("--remove", simulate_args.remove, "Comma-separated firm ids or a file of ids")->required();

  CandidateArgs esri_args;
  auto* esri = app.add_subcommand("esri", "Single-firm risk indices for a candidate set");
  add_candidates(esri, esri_args, false);

  StrategyArgs strategy_args;
  auto* strategy = app.add_subcommand("strategy", "Cumulative removal curve for one heuristic");
  strategy->add_option("--heuristic", strategy_args.heuristic, "emitters | risk | ratio")
      ->required()
      ->check(CLI::IsMember({"emitters", "risk", "ratio"}));
  strategy->add_option("--target", strategy_args.target, "CO2 reduction target as a fraction")->default_val(0.20);
  add_candidates(strategy, strategy_args.source, true);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit-regimes", "Fit the two exponential regimes of the ratio rank distribution");
  fit->add_option("--hi", fit_args.hi)->default_val(fit_args.hi);
  fit->add_option("--lo", fit_args.lo)->default_val(fit_args.lo);
  fit->add_option("--ratio-scale", fit_args.ratio_scale, "Multiplier on the ratio before thresholding")
      ->default_val(fit_args.ratio_scale);
  add_candidates(fit, fit_args.source, true);

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Indices, all strategy curves and plot-ready figure data");
  report->add_option("--target", report_args.target)->default_val(0.20);
  add_candidates(report, report_args.source, true);

  try {
    app.parse(argc, argv);
    auto* sub = app.get_subcommands().front();
    config.subcommand = sub->get_name();
    config.net = net;
    if (!out.empty()) config.out = out;
    const bool needs_net = sub != synth && !(sub == fit && fit_args.source.indices);
    if (needs_net && net.empty()) throw CLI::RequiredError("--net");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  try {
    resolve(config, flags);
    nlohmann::json result;
    if (config.subcommand == "validate") {
      result = run_validate(config, validate_args);
    } else if (config.subcommand == "synth") {
      result = run_synth(config, synth_args);
    } else if (config.subcommand == "simulate") {
      result = run_simulate(config, simulate_args);
    } else if (config.subcommand == "esri") {
      result = run_esri(config, esri_args);
    } else if (config.subcommand == "strategy") {
      result = run_strategy_cmd(config, strategy_args);
    } else if (config.subcommand == "fit-regimes") {
      result = run_fit_regimes(config, fit_args);
    } else {
      result = run_report(config, report_args);
    }
    std::cout << result.dump(2) << '\n';
  } catch (const esrinet::Error& e) {
    return data_error(esrinet::to_string(e.code()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return data_error("IoError", e.what());
  } catch (const nlohmann::json::exception& e) {
    return data_error("SchemaError", e.what());
  }
  return 0;
}
