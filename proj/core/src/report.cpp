#include "esrinet/report.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "esrinet/csv.hpp"
#include "esrinet/error.hpp"

namespace esrinet {

FigureFiles emit_figure_data(const FigureInputs& inputs, const std::filesystem::path& dir) {
  if (!inputs.network) throw Error(ErrorCode::kMissingUpstream, "figure data needs a network");
  if (!inputs.indices || inputs.indices->empty()) throw Error(ErrorCode::kMissingUpstream, "figure data needs an index table");
  if (inputs.curves.empty()) throw Error(ErrorCode::kMissingUpstream, "figure data needs at least one strategy curve");
  const auto& net = *inputs.network;
  const auto& table = *inputs.indices;

  std::filesystem::create_directories(dir);
  FigureFiles files;
  auto emit = [&](const std::string& name, const std::string& content) {
    csv::write_atomic(dir / name, content);
    files.written.push_back(dir / name);
  };

  std::string scatter = "firm_id,sector,co2_share_total,co2_share_ets,ew_esri,ratio\n";
  for (const auto& r : table) {
    const auto idx = net.find(r.firm_id);
    const std::string sector = idx ? net.firm(*idx).sector : std::string();
    scatter += csv::escape(r.firm_id) + ',' + csv::escape(sector) + ',' + csv::format_double(r.co2_share_total) + ',' +
               csv::format_double(r.co2_share_ets) + ',' + csv::format_double(r.ew_esri) + ',' +
               csv::format_double(r.ratio) + '\n';
  }
  emit("fig2_scatter.csv", scatter);

  const auto by_ratio = rank_firms(table, Heuristic::kOptimalRatio);
  std::unordered_map<std::string, const IndexRow*> row_of;
  for (const auto& r : table) row_of.emplace(r.firm_id, &r);
  std::string inset = "rank,firm_id,ratio\n";
  for (std::size_t k = 0; k < by_ratio.size(); ++k) {
    inset += std::to_string(k + 1) + ',' + csv::escape(by_ratio[k]) + ',' +
             csv::format_double(row_of.at(by_ratio[k])->ratio) + '\n';
  }
  emit("fig2_inset.csv", inset);

  const auto by_co2 = rank_firms(table, Heuristic::kLargestEmittersFirst);
  std::string summary = "strategy,co2_reduction,job_loss,firms_removed,benchmark_reached\n";
  for (const auto& [heuristic, curve] : inputs.curves) {
    const std::string name(to_string(heuristic));
    emit("fig3_" + name + ".csv", curve_csv(curve));

    std::unordered_set<std::string> removed;
    const std::size_t upto = curve.benchmark.value_or(0);
    for (std::size_t k = 1; k <= upto && k < curve.rows.size(); ++k) removed.insert(curve.rows[k].firm_id);
    std::string rank_series = "co2_rank,firm_id,co2_share_total,removed\n";
    std::size_t markers = 0;
    for (std::size_t k = 0; k < by_co2.size(); ++k) {
      const bool is_removed = removed.contains(by_co2[k]);
      markers += is_removed;
      rank_series += std::to_string(k + 1) + ',' + csv::escape(by_co2[k]) + ',' +
                     csv::format_double(row_of.at(by_co2[k])->co2_share_total) + ',' + (is_removed ? "1" : "0") + '\n';
    }
    files.removed_markers[heuristic] = markers;
    emit("fig4_" + name + ".csv", rank_series);

    const auto& at = curve.benchmark ? curve.rows[*curve.benchmark] : curve.final_row();
    summary += name + ',' + csv::format_double(at.cum_co2_saved) + ',' + csv::format_double(at.cum_job_loss) + ',' +
               std::to_string(at.cum_firms) + ',' + (curve.benchmark ? "1" : "0") + '\n';
  }
  emit("table1.csv", summary);
  return files;
}

}  // namespace esrinet
