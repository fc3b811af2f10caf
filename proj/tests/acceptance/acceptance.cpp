// Acceptance runner: one PASS/FAIL line per criterion.
//   esrinet_acceptance                 run all criteria
//   esrinet_acceptance --criterion N   run only criterion N

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "esrinet/esrinet.hpp"
#include "fixtures.hpp"
#include "json.hpp"
#include "properties.hpp"
#include "random_networks.hpp"

using namespace esrinet;
namespace et = esrinet::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

// 1. Fixture exactness.
Outcome fig1_exactness() {
  const auto start = Clock::now();
  const auto dir = et::fixture_dir("fig1");
  const auto net = load_network_dir(dir);
  const auto cfg = nlohmann::json::parse(std::ifstream(dir / "calibration.json"));
  CalibrationParams params;
  params.gamma = cfg.at("gamma").get<double>();
  params.x0_rule = *parse_x0_rule(cfg.at("x0_rule").get<std::string>());
  PropagationOptions opt;
  opt.demand = *parse_demand_shock(cfg.at("demand_shock").get<std::string>());
  const auto pf = calibrate(net, EssentialityMatrix::load(dir / kEssentialityFile), params);
  const IndexWeights weights(net);
  Propagator engine(net, pf, opt);

  struct Expect {
    std::vector<std::string> removed;
    double co2;
    double jobs;
  };
  const Expect cases[] = {{{"d"}, 0.5, 0.7}, {{"a", "b"}, 0.5, 0.3}};
  Outcome out{true, {}};
  for (const auto& c : cases) {
    const auto r = evaluate_scenario(engine, weights, ShockScenario::from_ids(net, c.removed));
    const bool ok = std::abs(r.co2.share_total - c.co2) <= 1e-9 && std::abs(r.ew_esri - c.jobs) <= 1e-9;
    out.pass = out.pass && ok;
    std::string set;
    for (const auto& id : c.removed) set += (set.empty() ? "" : ",") + id;
    out.detail += "{" + set + "}: co2=" + fmt(r.co2.share_total, 12) + " ew_esri=" + fmt(r.ew_esri, 12) + "; ";
  }
  const double elapsed = seconds_since(start);
  out.pass = out.pass && elapsed < 1.0;
  out.detail += "time=" + fmt(elapsed, 3) + "s (limit 1s)";
  return out;
}

// 2. Dense oracle equivalence.
Outcome oracle_equivalence() {
  const auto start = Clock::now();
  const double gammas[] = {0.0, 0.5, 1.0};
  std::size_t failures = 0;
  std::string first;
  for (std::uint64_t k = 0; k < 200; ++k) {
    et::PropertyCase pc{0xacce55ull + k, gammas[k % 3], k % 2 == 1};
    const auto msg = et::check_against_oracle(pc, 1e-8);
    if (!msg.empty() && failures++ == 0) first = msg;
  }
  const double elapsed = seconds_since(start);
  return {failures == 0 && elapsed < 120.0,
          "200 networks (<=12 firms, gamma in {0,0.5,1}), mismatches=" + std::to_string(failures) +
              (first.empty() ? "" : " first: " + first) + "; time=" + fmt(elapsed, 3) + "s (limit 120s)"};
}

// 3. Invariant suite.
Outcome invariant_suite() {
  constexpr std::uint64_t kCases = 1000;
  const unsigned workers = 4;
  struct Named {
    const char* name;
    std::function<std::string(const et::PropertyCase&)> check;
  };
  const Named checks[] = {
      {"monotone-descent+bounds", et::check_monotone_descent},
      {"scenario-monotonicity", et::check_scenario_monotonicity},
      {"weight-scale-invariance", et::check_weight_scale_invariance},
      {"thread-independence", [&](const auto& pc) { return et::check_thread_independence(pc, workers); }},
  };
  Outcome out{true, {}};
  for (const auto& c : checks) {
    std::size_t failures = 0;
    std::string first;
    for (std::uint64_t k = 0; k < kCases; ++k) {
      const auto msg = c.check(et::property_case(k));
      if (!msg.empty() && failures++ == 0) first = msg;
    }
    out.pass = out.pass && failures == 0;
    out.detail += std::string(c.name) + " " + std::to_string(kCases - failures) + "/" + std::to_string(kCases);
    if (!first.empty()) out.detail += " (" + first + ")";
    out.detail += "; ";
  }
  return out;
}

// 4. Terminal equality across heuristics.
Outcome terminal_equality() {
  double worst = 0.0;
  std::size_t sets = 0;
  auto check = [&](const ProductionNetwork& net, const ProductionFunctionSet& pf, const std::vector<std::string>& ids) {
    const auto table = batch_indices(net, pf, ids);
    std::vector<StrategyCurve> curves;
    for (auto h : kAllHeuristics) curves.push_back(run_strategy(net, pf, rank_firms(table, h), 0.2));
    for (const auto& c : curves) {
      worst = std::max(worst, std::abs(c.final_row().cum_co2_saved - curves[0].final_row().cum_co2_saved));
      worst = std::max(worst, std::abs(c.final_row().cum_job_loss - curves[0].final_row().cum_job_loss));
    }
    ++sets;
  };
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto c = et::random_case(0x7e4ull + seed);
    const auto pf = calibrate(c.net, c.essentiality, {});
    std::mt19937_64 rng(seed);
    std::vector<std::string> ids;
    for (auto i : et::random_subset(rng, c.net.num_firms(), 0.6)) ids.push_back(c.net.firm(i).id);
    if (ids.empty()) ids.push_back(c.net.firm(0).id);
    check(c.net, pf, ids);
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SynthParams p;
    p.n_firms = 1000;
    p.n_edges = 5000;
    p.n_ets = 40;
    p.seed = seed;
    const auto s = generate(p);
    check(s.network, calibrate(s.network, s.essentiality, {}), ets_candidates(s.network));
  }
  return {worst <= 1e-9, std::to_string(sets) + " candidate sets, max terminal gap=" + fmt(worst, 3) + " (limit 1e-9)"};
}

// 5. Strategy dominance on a desk-scale synthetic network.
Outcome strategy_dominance() {
  SynthParams p;
  p.n_firms = 10000;
  p.n_edges = 50000;
  p.n_ets = 200;
  p.seed = 20240501;
  const auto s = generate(p);
  const auto pf = calibrate(s.network, s.essentiality, {});
  BatchOptions bo;
  bo.threads = 0;
  const auto table = batch_indices(s.network, pf, ets_candidates(s.network), bo);
  StrategyOptions so;
  so.threads = 0;
  std::map<Heuristic, StrategyCurve> curves;
  for (auto h : kAllHeuristics) curves[h] = run_strategy(s.network, pf, rank_firms(table, h), 0.2, so);
  std::string detail;
  for (auto h : kAllHeuristics) {
    const auto& c = curves[h];
    detail += std::string(to_string(h)) + ": ";
    if (c.benchmark) {
      const auto& r = c.rows[*c.benchmark];
      detail += "co2=" + fmt(r.cum_co2_saved, 4) + " jobs=" + fmt(r.cum_job_loss, 4) + " firms=" +
                std::to_string(r.cum_firms) + "; ";
    } else {
      detail += "target unreachable; ";
    }
  }
  const auto& ratio = curves[Heuristic::kOptimalRatio];
  const auto& emit = curves[Heuristic::kLargestEmittersFirst];
  const auto& risk = curves[Heuristic::kLeastRiskyFirst];
  if (!ratio.benchmark || !emit.benchmark || !risk.benchmark) return {false, detail};
  const auto& rr = ratio.rows[*ratio.benchmark];
  const auto& er = emit.rows[*emit.benchmark];
  const auto& kr = risk.rows[*risk.benchmark];
  const auto lo = std::min(er.cum_firms, kr.cum_firms);
  const auto hi = std::max(er.cum_firms, kr.cum_firms);
  const bool pass = rr.cum_job_loss < er.cum_job_loss && lo < rr.cum_firms && rr.cum_firms < hi;
  return {pass, detail};
}

// 6. Planted regime recovery.
Outcome regime_recovery() {
  const double l1 = -0.41, l2 = -0.05, hi = 1000.0, lo = 10.0;
  double worst1 = 0.0, worst2 = 0.0;
  std::size_t failures = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(0x9e6ull + seed);
    std::normal_distribution<double> eps(0.0, 0.05);
    std::vector<double> v;
    const std::size_t n1 = 30, n2 = 80;
    const double start = hi * std::exp(-l1 * static_cast<double>(n1) + 0.3);
    for (std::size_t r = 1; r <= n1; ++r) v.push_back(start * std::exp(l1 * static_cast<double>(r) + eps(rng)));
    for (std::size_t r = 0; r < n2; ++r) v.push_back(hi * std::exp(-0.3 + l2 * static_cast<double>(r) + eps(rng)));
    std::sort(v.begin(), v.end(), std::greater<>());
    try {
      const auto fit = fit_rank_regimes_strict(v, hi, lo);
      const double e1 = std::abs(fit.upper->lambda - l1) / std::abs(l1);
      const double e2 = std::abs(fit.lower->lambda - l2) / std::abs(l2);
      worst1 = std::max(worst1, e1);
      worst2 = std::max(worst2, e2);
      failures += (e1 > 0.05 || e2 > 0.05);
    } catch (const Error&) {
      ++failures;
    }
  }
  return {failures == 0, "50 seeds, max relative error lambda1=" + fmt(worst1, 3) + " lambda2=" + fmt(worst2, 3) +
                             " (limit 0.05), failures=" + std::to_string(failures)};
}

// 7. Batch performance and scaling.
Outcome batch_performance() {
  SynthParams p;
  p.n_firms = 100000;
  p.n_edges = 500000;
  p.n_ets = 200;
  p.seed = 7;
  const auto s = generate(p);
  const auto pf = calibrate(s.network, s.essentiality, {});
  const auto candidates = ets_candidates(s.network);
  auto timed = [&](unsigned threads) {
    BatchOptions bo;
    bo.threads = threads;
    const auto start = Clock::now();
    const auto table = batch_indices(s.network, pf, candidates, bo);
    return std::pair{seconds_since(start), table};
  };
  const auto [t1, table1] = timed(1);
  const auto [t4, table4] = timed(4);
  bool identical = table1.size() == table4.size();
  for (std::size_t k = 0; identical && k < table1.size(); ++k) identical = table1[k].ew_esri == table4[k].ew_esri;
  const double speedup = t1 / t4;
  const unsigned cores = std::thread::hardware_concurrency();
  const bool pass = t4 < 300.0 && speedup >= 3.0 && identical;
  return {pass, "200 candidates on 100000 firms/500000 edges: 1 worker " + fmt(t1, 4) + "s, 4 workers " + fmt(t4, 4) +
                    "s, speedup " + fmt(speedup, 3) + " (need >= 3.0, time < 300s), outputs identical=" +
                    (identical ? "yes" : "no") + ", hardware threads=" + std::to_string(cores)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-7)")->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);

  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"fig1 fixture exactness", fig1_exactness},
      {"dense oracle equivalence", oracle_equivalence},
      {"invariant suite", invariant_suite},
      {"terminal equality", terminal_equality},
      {"strategy dominance (10k firms)", strategy_dominance},
      {"regime-fit recovery", regime_recovery},
      {"batch performance (100k firms)", batch_performance},
  };
  int failed = 0;
  for (int k = 1; k <= 7; ++k) {
    if (only != 0 && only != k) continue;
    const auto& [name, run] = criteria[k - 1];
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d: %s -- %s\n", out.pass ? "PASS" : "FAIL", k, name, out.detail.c_str());
    std::fflush(stdout);
    failed += !out.pass;
  }
  return failed == 0 ? 0 : 1;
}
