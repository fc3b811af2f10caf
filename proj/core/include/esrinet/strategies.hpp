#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "esrinet/calibration.hpp"
#include "esrinet/indices.hpp"
#include "esrinet/network.hpp"
#include "esrinet/propagation.hpp"

namespace esrinet {

enum class Heuristic {
  /// co2 descending.
  kLargestEmittersFirst,
  /// Single-firm ew_esri ascending.
  kLeastRiskyFirst,
  /// co2_share_total / ew_esri descending, +inf first.
  kOptimalRatio,
};

inline constexpr Heuristic kAllHeuristics[] = {Heuristic::kLargestEmittersFirst, Heuristic::kLeastRiskyFirst,
                                               Heuristic::kOptimalRatio};

/// CLI names: "emitters", "risk", "ratio".
std::string_view to_string(Heuristic h) noexcept;
std::optional<Heuristic> parse_heuristic(std::string_view text) noexcept;

/// Removal order over the table's rows. Ties on the heuristic key are broken
/// by co2 descending, then firm id ascending. Rows carrying an error sort last
/// (by id) so the result is always a permutation of the table.
std::vector<std::string> rank_firms(const IndexTable& table, Heuristic heuristic);

struct CurveRow {
  std::size_t rank = 0;
  /// Firm removed at this rank; empty for rank 0 (nothing removed).
  std::string firm_id;
  std::size_t cum_firms = 0;
  double cum_co2_saved = 0.0;
  double cum_job_loss = 0.0;
  double cum_esri = 0.0;
  bool converged = true;
};

struct StrategyCurve {
  double target = 0.0;
  /// rows[k] is the cumulative removal of the first k firms of the ordering.
  std::vector<CurveRow> rows;
  /// First rank whose cum_co2_saved reaches the target; absent when unreachable.
  std::optional<std::size_t> benchmark;

  const CurveRow& final_row() const { return rows.back(); }
};

struct StrategyOptions {
  PropagationOptions propagation;
  EmissionConfig emissions;
  /// Workers across prefixes; 0 = hardware concurrency.
  unsigned threads = 1;
};

/// Evaluates every prefix of `ordering` as a fresh cumulative-removal
/// scenario. Throws kInvalidArgument for a target outside [0, 1] or a
/// duplicated firm and kInvalidScenario for unknown ids. An unreachable
/// target leaves `benchmark` empty; see require_benchmark().
StrategyCurve run_strategy(const ProductionNetwork& net, const ProductionFunctionSet& pf,
                           std::span<const std::string> ordering, double target, const StrategyOptions& options = {});

/// Returns the benchmark row or throws Error{kTargetUnreachable}.
const CurveRow& require_benchmark(const StrategyCurve& curve);

/// `rank,firm_id,cum_firms,cum_co2_saved,cum_job_loss,benchmark_flag`
std::string curve_csv(const StrategyCurve& curve);

}  // namespace esrinet
