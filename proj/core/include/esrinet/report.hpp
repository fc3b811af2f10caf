#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "esrinet/indices.hpp"
#include "esrinet/network.hpp"
#include "esrinet/strategies.hpp"

namespace esrinet {

struct FigureInputs {
  const ProductionNetwork* network = nullptr;
  const IndexTable* indices = nullptr;
  std::map<Heuristic, StrategyCurve> curves;
};

struct FigureFiles {
  std::vector<std::filesystem::path> written;
  /// Per heuristic: number of firms flagged as removed in the CO2-rank series.
  std::map<Heuristic, std::size_t> removed_markers;
};

/// Writes one plain CSV per figure analogue into `dir`:
///   fig2_scatter.csv    firm_id,sector,co2_share_total,co2_share_ets,ew_esri,ratio
///   fig2_inset.csv      rank,firm_id,ratio                 (ratio descending)
///   fig3_<h>.csv        the strategy curve for heuristic h
///   fig4_<h>.csv        co2_rank,firm_id,co2_share_total,removed
///   table1.csv          strategy,co2_reduction,job_loss,firms_removed,benchmark_reached
/// Throws Error{kMissingUpstream} when the network, indices or curves are absent.
FigureFiles emit_figure_data(const FigureInputs& inputs, const std::filesystem::path& dir);

}  // namespace esrinet
