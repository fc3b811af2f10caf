#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "esrinet/calibration.hpp"
#include "esrinet/network.hpp"
#include "esrinet/propagation.hpp"

namespace esrinet {

struct EmissionConfig {
  /// Economy-wide emission total. Defaults to the sum of known firm emissions.
  std::optional<double> total_co2;
};

/// Normalised weights and totals shared by every index evaluation on one
/// network. Cheap to copy around by reference; immutable once built.
class IndexWeights {
 public:
  /// Throws Error{kMissingTotal} when no emission total can be derived.
  /// Employment data may be absent; ew_esri then throws kNoEmploymentData.
  IndexWeights(const ProductionNetwork& net, const EmissionConfig& emissions = {});

  double output_total() const noexcept { return output_total_; }
  double employment_total() const noexcept { return employment_total_; }
  double co2_total() const noexcept { return co2_total_; }
  double ets_co2_total() const noexcept { return ets_co2_total_; }
  bool has_employment() const noexcept { return employment_total_ > 0.0; }

  const std::vector<double>& out_strength() const noexcept { return out_strength_; }
  const std::vector<double>& employees() const noexcept { return employees_; }
  const std::vector<double>& co2() const noexcept { return co2_; }
  const std::vector<unsigned char>& ets() const noexcept { return ets_; }

 private:
  std::vector<double> out_strength_;
  std::vector<double> employees_;  // 0 where missing
  std::vector<double> co2_;        // 0 where missing
  std::vector<unsigned char> ets_;
  double output_total_ = 0.0;
  double employment_total_ = 0.0;
  double co2_total_ = 0.0;
  double ets_co2_total_ = 0.0;
};

/// Output-weighted production shortfall, sum_i s_out(i)/S (1 - h_i).
double esri_from_levels(const IndexWeights& w, std::span<const double> h);
/// Employment-weighted production shortfall. Throws kNoEmploymentData.
double ew_esri_from_levels(const IndexWeights& w, std::span<const double> h);

struct Co2Shares {
  /// Eliminated tonnes, sum_i co2_i (1 - h_i).
  double eliminated = 0.0;
  /// eliminated / economy-wide total.
  double share_total = 0.0;
  /// Eliminated emissions of ETS members / total ETS emissions (0 when there are none).
  double share_ets = 0.0;
};

Co2Shares co2_shares_from_levels(const IndexWeights& w, std::span<const double> h);

/// Scenario-level wrappers; each runs a full propagation.
double esri(const ProductionNetwork& net, const ProductionFunctionSet& pf, const ShockScenario& scenario,
            const PropagationOptions& options = {});
double ew_esri(const ProductionNetwork& net, const ProductionFunctionSet& pf, const ShockScenario& scenario,
               const PropagationOptions& options = {});
Co2Shares co2_shares(const ProductionNetwork& net, const ProductionFunctionSet& pf, const ShockScenario& scenario,
                     const EmissionConfig& emissions = {}, const PropagationOptions& options = {});

/// All indices for one scenario from a single propagation.
struct ScenarioResult {
  EquilibriumState equilibrium;
  double esri = 0.0;
  double ew_esri = 0.0;
  Co2Shares co2;
};

ScenarioResult evaluate_scenario(Propagator& engine, const IndexWeights& weights, const ShockScenario& scenario);

struct IndexRow {
  std::string firm_id;
  double esri = 0.0;
  double ew_esri = 0.0;
  /// The candidate's own emissions as a share of the economy-wide total.
  double co2_share_total = 0.0;
  /// The candidate's own emissions as a share of total ETS emissions; 0 for non-members.
  double co2_share_ets = 0.0;
  /// co2_share_total / ew_esri; +inf when ew_esri = 0 and the firm emits.
  double ratio = 0.0;
  /// Own emissions in tonnes, used for tie-breaking.
  double co2 = 0.0;
  bool converged = true;
  std::optional<std::string> error;
};

using IndexTable = std::vector<IndexRow>;

double co2_ratio(double co2_share_total, double ew_esri);

struct BatchOptions {
  PropagationOptions propagation;
  EmissionConfig emissions;
  /// Workers across candidates; 0 = hardware concurrency.
  unsigned threads = 1;
};

/// One single-firm removal per candidate, rows in input order. Per-candidate
/// failures (unknown id, missing employment) are recorded in the row instead
/// of aborting the batch. Output does not depend on the thread count.
IndexTable batch_indices(const ProductionNetwork& net, const ProductionFunctionSet& pf,
                         std::span<const std::string> candidates, const BatchOptions& options = {});

/// `firm_id,esri,ew_esri,co2_share_total,co2_share_ets,ratio`
std::string indices_csv(const IndexTable& table);
/// Reads indices.csv back; `co2` is reconstructed from the network when given.
IndexTable read_indices_csv(const std::filesystem::path& path, const ProductionNetwork* net = nullptr);

/// Ids of all ETS members, in network order.
std::vector<std::string> ets_candidates(const ProductionNetwork& net);

}  // namespace esrinet
