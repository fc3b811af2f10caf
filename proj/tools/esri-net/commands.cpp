#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "esrinet/esrinet.hpp"

namespace esrinet::cli {
namespace {

struct Model {
  ProductionNetwork net;
  ProductionFunctionSet pf;
};

Model load_model(const RunConfig& config) {
  Model m{load_network_dir(config.net), {}};
  CalibrationParams params;
  params.gamma = config.gamma;
  params.x0_rule = config.x0_rule;
  EssentialityMatrix ess = EssentialityMatrix::bundled_default();
  if (!config.essentiality.empty()) {
    ess = EssentialityMatrix::load(config.essentiality);
    params.essentiality_source = config.essentiality.string();
  }
  m.pf = calibrate(m.net, ess, params);
  std::filesystem::create_directories(config.out);
  csv::write_atomic(config.out / "calibration_audit.csv", m.pf.audit_csv(m.net));
  return m;
}

void warn(const std::string& what, const nlohmann::json& detail) {
  nlohmann::json j{{"warning", what}};
  j.update(detail);
  std::fprintf(stderr, "%s\n", j.dump().c_str());
}

// One id per line; a header line "firm_id" (or a CSV whose header has a
// firm_id column) is understood too.
std::vector<std::string> read_id_file(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  std::size_t column = 0;
  bool header_is_id = false;
  if (auto it = std::find(table.header.begin(), table.header.end(), "firm_id"); it != table.header.end()) {
    column = static_cast<std::size_t>(it - table.header.begin());
  } else if (auto id = std::find(table.header.begin(), table.header.end(), "id"); id != table.header.end()) {
    column = static_cast<std::size_t>(id - table.header.begin());
  } else {
    header_is_id = true;
  }
  std::vector<std::string> ids;
  if (header_is_id && !table.header.empty() && !table.header[0].empty()) ids.push_back(table.header[0]);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.size() <= column || row[column].empty()) {
      throw Error(ErrorCode::kSchemaError, path.filename().string() + " row " + std::to_string(table.line[r]) +
                                               ": missing firm id");
    }
    ids.push_back(row[column]);
  }
  return ids;
}

std::vector<std::string> resolve_candidates(const ProductionNetwork& net, const std::string& spec) {
  if (spec == "all-ets") return ets_candidates(net);
  if (spec == "all") {
    std::vector<std::string> ids;
    for (const auto& f : net.firms()) ids.push_back(f.id);
    return ids;
  }
  return read_id_file(spec);
}

IndexTable indices_for(const RunConfig& config, const Model& m, const CandidateArgs& args) {
  if (args.indices) return read_indices_csv(*args.indices, &m.net);
  const auto candidates = resolve_candidates(m.net, args.candidates);
  if (candidates.empty()) throw Error(ErrorCode::kInvalidArgument, "candidate set is empty");
  BatchOptions opt;
  opt.propagation = config.propagation();
  opt.emissions = config.emissions();
  opt.threads = config.threads;
  auto table = batch_indices(m.net, m.pf, candidates, opt);
  csv::write_atomic(config.out / "indices.csv", indices_csv(table));
  return table;
}

nlohmann::json index_summary(const IndexTable& table) {
  std::size_t errors = 0, not_converged = 0;
  for (const auto& r : table) {
    errors += r.error.has_value();
    not_converged += !r.converged;
  }
  return {{"rows", table.size()}, {"errors", errors}, {"not_converged", not_converged}};
}

void record_candidates(RunConfig& config, const CandidateArgs& args) {
  config.extra["candidates"] = args.candidates;
  config.extra["indices"] = args.indices ? nlohmann::json(*args.indices) : nlohmann::json(nullptr);
}

nlohmann::json curve_summary(const StrategyCurve& curve, Heuristic h) {
  const auto& at = curve.benchmark ? curve.rows[*curve.benchmark] : curve.final_row();
  std::size_t not_converged = 0;
  for (const auto& r : curve.rows) not_converged += !r.converged;
  return {{"heuristic", std::string(to_string(h))},
          {"target", curve.target},
          {"co2_reduction", at.cum_co2_saved},
          {"expected_job_loss", at.cum_job_loss},
          {"firms_removed", at.cum_firms},
          {"benchmark_reached", curve.benchmark.has_value()},
          {"not_converged", not_converged}};
}

StrategyCurve curve_for(const RunConfig& config, const Model& m, const IndexTable& table, Heuristic h, double target) {
  StrategyOptions opt;
  opt.propagation = config.propagation();
  opt.emissions = config.emissions();
  opt.threads = config.threads;
  // Rows that failed single-firm evaluation cannot be removed meaningfully.
  IndexTable usable;
  for (const auto& r : table) {
    if (!r.error) usable.push_back(r);
  }
  return run_strategy(m.net, m.pf, rank_firms(usable, h), target, opt);
}

}  // namespace

nlohmann::json run_validate(RunConfig& config, const ValidateArgs& args) {
  config.extra["reference_employment"] =
      args.reference_employment ? nlohmann::json(*args.reference_employment) : nlohmann::json(nullptr);
  const auto net = load_network_dir(config.net);
  const auto r = validate(net, args.reference_employment);
  nlohmann::json j{{"num_firms", r.num_firms},
                   {"num_edges", r.num_edges},
                   {"num_isolated", r.num_isolated},
                   {"num_zero_out_strength", r.num_zero_out_strength},
                   {"num_ets", r.num_ets},
                   {"num_with_employees", r.num_with_employees},
                   {"num_with_co2", r.num_with_co2},
                   {"employment_known", r.employment_known},
                   {"employee_firm_coverage", r.employee_firm_coverage},
                   {"employment_coverage", r.employment_coverage ? nlohmann::json(*r.employment_coverage)
                                                                 : nlohmann::json(nullptr)},
                   {"total_weight", r.total_weight},
                   {"warnings", net.warnings()}};
  write_config(config);
  write_json(config.out / "validation.json", j);
  return j;
}

nlohmann::json run_synth(RunConfig& config, const SynthArgs& args) {
  SynthParams p;
  p.n_firms = args.n_firms;
  p.n_edges = args.n_edges;
  p.degree_exponent = args.degree_exponent;
  p.n_ets = args.n_ets;
  p.weight_sigma = args.weight_sigma;
  p.seed = config.seed;
  if (args.fixture) p.override_dir = *args.fixture;
  config.extra = {{"n_firms", p.n_firms},     {"n_edges", p.n_edges}, {"degree_exponent", p.degree_exponent},
                  {"n_ets", p.n_ets},         {"weight_sigma", p.weight_sigma},
                  {"employment", {{"mu", p.employment.mu}, {"sigma", p.employment.sigma}}},
                  {"emission", {{"mu", p.emission.mu}, {"sigma", p.emission.sigma}}},
                  {"fixture", args.fixture ? nlohmann::json(*args.fixture) : nlohmann::json(nullptr)}};
  const auto synth = generate(p);
  write_config(config);
  write_synth(synth, config.out);
  return {{"num_firms", synth.network.num_firms()},
          {"num_edges", synth.network.num_edges()},
          {"num_ets", ets_candidates(synth.network).size()},
          {"out", config.out.string()}};
}

nlohmann::json run_simulate(RunConfig& config, const SimulateArgs& args) {
  config.extra["remove"] = args.remove;
  const auto m = load_model(config);
  std::vector<std::string> ids;
  if (std::filesystem::is_regular_file(args.remove)) {
    ids = read_id_file(args.remove);
  } else {
    std::size_t start = 0;
    while (start <= args.remove.size()) {
      const auto comma = std::min(args.remove.find(',', start), args.remove.size());
      if (comma > start) ids.push_back(args.remove.substr(start, comma - start));
      start = comma + 1;
    }
  }
  auto options = config.propagation();
  options.threads = resolve_threads(config.threads);
  const auto scenario = ShockScenario::from_ids(m.net, ids);
  const auto eq = propagate(m.net, m.pf, scenario, options);
  write_config(config);
  csv::write_atomic(config.out / "equilibrium.csv", equilibrium_csv(m.net, eq.levels));
  nlohmann::json meta{{"iterations", eq.iterations}, {"max_delta", eq.max_delta}, {"converged", eq.converged}};
  write_json(config.out / "equilibrium.json", meta);
  if (!eq.converged) warn("propagation did not converge", meta);
  return meta;
}

nlohmann::json run_esri(RunConfig& config, const CandidateArgs& args) {
  record_candidates(config, args);
  const auto m = load_model(config);
  CandidateArgs fresh = args;
  fresh.indices.reset();
  const auto table = indices_for(config, m, fresh);
  write_config(config);
  const auto summary = index_summary(table);
  if (summary["not_converged"].get<std::size_t>() > 0) warn("some candidates did not converge", summary);
  return summary;
}

nlohmann::json run_strategy_cmd(RunConfig& config, const StrategyArgs& args) {
  const auto h = parse_heuristic(args.heuristic);
  if (!h) throw Error(ErrorCode::kInvalidArgument, "unknown heuristic '" + args.heuristic + "'");
  if (!(args.target >= 0.0 && args.target <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "target must lie in [0, 1]");
  config.extra["heuristic"] = args.heuristic;
  config.extra["target"] = args.target;
  record_candidates(config, args.source);
  const auto m = load_model(config);
  const auto table = indices_for(config, m, args.source);
  const auto curve = curve_for(config, m, table, *h, args.target);
  write_config(config);
  csv::write_atomic(config.out / "curve.csv", curve_csv(curve));
  const auto summary = curve_summary(curve, *h);
  write_json(config.out / "summary.json", summary);
  require_benchmark(curve);
  return summary;
}

nlohmann::json run_fit_regimes(RunConfig& config, const FitArgs& args) {
  config.extra = {{"hi", args.hi}, {"lo", args.lo}, {"ratio_scale", args.ratio_scale}};
  record_candidates(config, args.source);
  if (!(args.ratio_scale > 0.0)) throw Error(ErrorCode::kInvalidArgument, "ratio scale must be positive");
  IndexTable table;
  if (args.source.indices && config.net.empty()) {
    std::filesystem::create_directories(config.out);
    table = read_indices_csv(*args.source.indices);
  } else {
    const auto m = load_model(config);
    table = indices_for(config, m, args.source);
  }
  std::vector<double> ratios;
  for (const auto& r : table) {
    if (!r.error) ratios.push_back(r.ratio * args.ratio_scale);
  }
  std::sort(ratios.begin(), ratios.end(), std::greater<>());
  const auto fit = fit_rank_regimes(ratios, args.hi, args.lo);
  auto opt_json = [](const std::optional<RegimeFit>& f, double RegimeFit::*field) {
    return f ? number((*f).*field) : nlohmann::json(nullptr);
  };
  nlohmann::json j{{"lambda1", opt_json(fit.upper, &RegimeFit::lambda)},
                   {"lambda2", opt_json(fit.lower, &RegimeFit::lambda)},
                   {"r2_1", opt_json(fit.upper, &RegimeFit::r2)},
                   {"r2_2", opt_json(fit.lower, &RegimeFit::r2)},
                   {"n1", fit.n_upper},
                   {"n2", fit.n_lower},
                   {"n_skipped", fit.n_skipped}};
  if (fit.upper_error) j["error1"] = *fit.upper_error;
  if (fit.lower_error) j["error2"] = *fit.lower_error;
  write_config(config);
  write_json(config.out / "regimes.json", j);
  if (fit.upper_error || fit.lower_error) {
    throw Error(ErrorCode::kInsufficientPoints, fit.upper_error ? *fit.upper_error : *fit.lower_error);
  }
  return j;
}

nlohmann::json run_report(RunConfig& config, const ReportArgs& args) {
  if (!(args.target >= 0.0 && args.target <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "target must lie in [0, 1]");
  config.extra["target"] = args.target;
  record_candidates(config, args.source);
  const auto m = load_model(config);
  const auto table = indices_for(config, m, args.source);
  FigureInputs inputs{&m.net, &table, {}};
  nlohmann::json strategies = nlohmann::json::array();
  for (auto h : kAllHeuristics) {
    inputs.curves[h] = curve_for(config, m, table, h, args.target);
    strategies.push_back(curve_summary(inputs.curves[h], h));
  }
  const auto files = emit_figure_data(inputs, config.out);
  write_config(config);
  nlohmann::json written = nlohmann::json::array();
  for (const auto& f : files.written) written.push_back(f.filename().string());
  nlohmann::json j{{"strategies", strategies}, {"files", written}};
  write_json(config.out / "report.json", j);
  return j;
}

}  // namespace esrinet::cli
