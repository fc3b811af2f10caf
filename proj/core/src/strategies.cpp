#include "esrinet/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "esrinet/csv.hpp"
#include "esrinet/error.hpp"
#include "esrinet/parallel.hpp"

namespace esrinet {

std::string_view to_string(Heuristic h) noexcept {
  switch (h) {
    case Heuristic::kLargestEmittersFirst: return "emitters";
    case Heuristic::kLeastRiskyFirst: return "risk";
    case Heuristic::kOptimalRatio: return "ratio";
  }
  return "unknown";
}

std::optional<Heuristic> parse_heuristic(std::string_view text) noexcept {
  for (auto h : kAllHeuristics) {
    if (text == to_string(h)) return h;
  }
  return std::nullopt;
}

std::vector<std::string> rank_firms(const IndexTable& table, Heuristic heuristic) {
  // Larger key = removed earlier.
  auto key = [heuristic](const IndexRow& r) {
    switch (heuristic) {
      case Heuristic::kLargestEmittersFirst: return r.co2;
      case Heuristic::kLeastRiskyFirst: return -r.ew_esri;
      case Heuristic::kOptimalRatio: return r.ratio;
    }
    return 0.0;
  };
  std::vector<std::size_t> order(table.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = table[a];
    const auto& rb = table[b];
    const bool bad_a = ra.error.has_value() || std::isnan(key(ra));
    const bool bad_b = rb.error.has_value() || std::isnan(key(rb));
    if (bad_a != bad_b) return bad_b;
    if (!bad_a) {
      const double ka = key(ra);
      const double kb = key(rb);
      if (ka != kb) return ka > kb;
      if (ra.co2 != rb.co2) return ra.co2 > rb.co2;
    }
    return ra.firm_id < rb.firm_id;
  });
  std::vector<std::string> ids;
  ids.reserve(order.size());
  for (auto k : order) ids.push_back(table[k].firm_id);
  return ids;
}

StrategyCurve run_strategy(const ProductionNetwork& net, const ProductionFunctionSet& pf,
                           std::span<const std::string> ordering, double target, const StrategyOptions& options) {
  if (!(target >= 0.0 && target <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "target must lie in [0, 1]");
  std::vector<FirmIndex> sequence;
  sequence.reserve(ordering.size());
  std::unordered_set<FirmIndex> seen;
  for (const auto& id : ordering) {
    const auto idx = net.find(id);
    if (!idx) throw Error(ErrorCode::kInvalidScenario, "ordering contains unknown firm '" + id + "'");
    if (!seen.insert(*idx).second) throw Error(ErrorCode::kInvalidArgument, "ordering lists '" + id + "' twice");
    sequence.push_back(*idx);
  }

  const IndexWeights weights(net, options.emissions);
  const unsigned threads = resolve_threads(options.threads);
  StrategyCurve curve;
  curve.target = target;
  curve.rows.resize(sequence.size() + 1);

  std::vector<std::optional<Propagator>> engines(threads);
  parallel_for(curve.rows.size(), threads, [&](unsigned worker, std::size_t rank) {
    if (!engines[worker]) engines[worker].emplace(net, pf, options.propagation);
    ShockScenario scenario;
    scenario.removed.assign(sequence.begin(), sequence.begin() + static_cast<std::ptrdiff_t>(rank));
    const auto result = evaluate_scenario(*engines[worker], weights, scenario);
    auto& row = curve.rows[rank];
    row.rank = rank;
    row.firm_id = rank == 0 ? std::string() : ordering[rank - 1];
    row.cum_firms = rank;
    row.cum_co2_saved = result.co2.share_total;
    row.cum_job_loss = result.ew_esri;
    row.cum_esri = result.esri;
    row.converged = result.equilibrium.converged;
  });

  for (const auto& row : curve.rows) {
    if (row.cum_co2_saved >= target) {
      curve.benchmark = row.rank;
      break;
    }
  }
  return curve;
}

const CurveRow& require_benchmark(const StrategyCurve& curve) {
  if (!curve.benchmark) {
    throw Error(ErrorCode::kTargetUnreachable,
                "CO2 target " + csv::format_double(curve.target) + " exceeds the achievable saving " +
                    csv::format_double(curve.rows.empty() ? 0.0 : curve.final_row().cum_co2_saved));
  }
  return curve.rows[*curve.benchmark];
}

std::string curve_csv(const StrategyCurve& curve) {
  std::string out = "rank,firm_id,cum_firms,cum_co2_saved,cum_job_loss,benchmark_flag\n";
  for (const auto& r : curve.rows) {
    out += std::to_string(r.rank) + ',' + csv::escape(r.firm_id) + ',' + std::to_string(r.cum_firms) + ',' +
           csv::format_double(r.cum_co2_saved) + ',' + csv::format_double(r.cum_job_loss) + ',' +
           (curve.benchmark && *curve.benchmark == r.rank ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace esrinet
