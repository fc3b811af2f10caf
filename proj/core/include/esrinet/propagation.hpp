#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "esrinet/calibration.hpp"
#include "esrinet/network.hpp"

namespace esrinet {

/// Which customers can pass a demand shock upstream to their suppliers.
enum class DemandShock {
  /// Only removed firms cancel their orders; partially producing customers
  /// keep buying at baseline volume.
  kRemovedOnly,
  /// Every customer's current level feeds back to its suppliers:
  /// h_u(i) = sum_j W_ij h_j / s_out(i).
  kCascade,
};

std::string_view to_string(DemandShock mode) noexcept;
std::optional<DemandShock> parse_demand_shock(std::string_view text) noexcept;

struct PropagationOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 1000;
  DemandShock demand = DemandShock::kRemovedOnly;
  /// Workers used inside a single propagation (per-firm update); 1 = serial.
  unsigned threads = 1;
};

/// Firms forced to level 0 from the first iteration on.
struct ShockScenario {
  std::vector<FirmIndex> removed;

  /// Throws Error{kInvalidScenario} for ids not in the network.
  static ShockScenario from_ids(const ProductionNetwork& net, std::span<const std::string> ids);
};

struct LevelState {
  std::vector<double> h_d;
  std::vector<double> h_u;
  std::vector<double> h;

  static LevelState full(std::size_t n);
  std::size_t size() const noexcept { return h.size(); }
};

struct EquilibriumState {
  LevelState levels;
  std::size_t iterations = 0;
  double max_delta = 0.0;
  bool converged = false;
};

/// Synchronous fixed-point iteration of supply and demand shocks. The
/// instance keeps scratch buffers, so use one Propagator per worker; the
/// network and function set it refers to may be shared.
class Propagator {
 public:
  Propagator(const ProductionNetwork& net, const ProductionFunctionSet& pf, PropagationOptions options = {});

  EquilibriumState run(const ShockScenario& scenario);

  /// One synchronous update from `state`; `out` is resized as needed.
  void step(const LevelState& state, const ShockScenario& scenario, LevelState& out);

  const PropagationOptions& options() const noexcept { return options_; }
  std::size_t num_firms() const noexcept { return active_.size(); }

 private:
  void load_scenario(const ShockScenario& scenario);
  void update_range(const LevelState& state, LevelState& out, std::size_t begin, std::size_t end) const;

  const ProductionNetwork* net_;
  PropagationOptions options_;

  // Flattened production functions.
  std::vector<unsigned char> active_;
  std::vector<std::size_t> group_offset_;   // per firm, into group_*
  std::vector<std::size_t> member_offset_;  // per group, into member_*
  std::vector<double> group_weight_;
  std::vector<std::size_t> ne_offset_;      // per firm, into member_* (after all groups)
  std::vector<double> ne_weight_;
  std::vector<double> ne_shortfall_scale_;  // 1 - beta/x0, or 0 when the term is absent
  std::vector<FirmIndex> member_supplier_;
  std::vector<double> member_weight_;
  std::vector<double> out_strength_;

  std::vector<unsigned char> removed_;
  std::vector<FirmIndex> removed_list_;
  LevelState current_;
  LevelState next_;
};

EquilibriumState propagate(const ProductionNetwork& net, const ProductionFunctionSet& pf,
                           const ShockScenario& scenario, const PropagationOptions& options = {});

LevelState production_step(const LevelState& state, const ProductionNetwork& net, const ProductionFunctionSet& pf,
                           const ShockScenario& scenario, DemandShock demand = DemandShock::kRemovedOnly);

/// `firm_id,h_d,h_u,h`
std::string equilibrium_csv(const ProductionNetwork& net, const LevelState& levels);

}  // namespace esrinet
