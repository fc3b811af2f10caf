#include "esrinet/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "esrinet/csv.hpp"
#include "esrinet/error.hpp"
#include "esrinet/parallel.hpp"

namespace esrinet {
namespace {

// Below this many firms a per-iteration fan-out costs more than it saves.
constexpr std::size_t kParallelStepMinFirms = 8192;

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

std::string_view to_string(DemandShock mode) noexcept {
  return mode == DemandShock::kCascade ? "cascade" : "removed-only";
}

std::optional<DemandShock> parse_demand_shock(std::string_view text) noexcept {
  if (text == "removed-only") return DemandShock::kRemovedOnly;
  if (text == "cascade") return DemandShock::kCascade;
  return std::nullopt;
}

ShockScenario ShockScenario::from_ids(const ProductionNetwork& net, std::span<const std::string> ids) {
  ShockScenario s;
  s.removed.reserve(ids.size());
  for (const auto& id : ids) {
    auto i = net.find(id);
    if (!i) throw Error(ErrorCode::kInvalidScenario, "scenario removes unknown firm '" + id + "'");
    s.removed.push_back(*i);
  }
  return s;
}

LevelState LevelState::full(std::size_t n) {
  return {std::vector<double>(n, 1.0), std::vector<double>(n, 1.0), std::vector<double>(n, 1.0)};
}

Propagator::Propagator(const ProductionNetwork& net, const ProductionFunctionSet& pf, PropagationOptions options)
    : net_(&net), options_(options) {
  if (!(options_.tolerance > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  if (options_.max_iterations < 1) throw Error(ErrorCode::kInvalidArgument, "max_iterations must be at least 1");
  if (pf.size() != net.num_firms()) {
    throw Error(ErrorCode::kInvalidArgument, "production functions were calibrated on a different network");
  }
  const std::size_t n = net.num_firms();
  active_.resize(n);
  group_offset_.reserve(n + 1);
  ne_offset_.resize(n + 1);
  ne_weight_.resize(n);
  ne_shortfall_scale_.resize(n);

  // Groups for all firms first, then the non-essential members, so both are
  // contiguous per firm.
  for (FirmIndex i = 0; i < n; ++i) {
    const auto& f = pf[i];
    active_[i] = f.status == FirmStatus::kActive;
    group_offset_.push_back(group_weight_.size());
    if (!active_[i]) continue;
    for (const auto& g : f.essential_groups) {
      member_offset_.push_back(member_supplier_.size());
      group_weight_.push_back(g.weight_sum);
      member_supplier_.insert(member_supplier_.end(), g.suppliers.begin(), g.suppliers.end());
      member_weight_.insert(member_weight_.end(), g.weights.begin(), g.weights.end());
    }
  }
  group_offset_.push_back(group_weight_.size());
  member_offset_.push_back(member_supplier_.size());

  for (FirmIndex i = 0; i < n; ++i) {
    const auto& f = pf[i];
    ne_offset_[i] = member_supplier_.size();
    if (active_[i] && f.has_nonessential_term()) {
      member_supplier_.insert(member_supplier_.end(), f.nonessential_suppliers.begin(), f.nonessential_suppliers.end());
      member_weight_.insert(member_weight_.end(), f.nonessential_weights.begin(), f.nonessential_weights.end());
      ne_weight_[i] = f.nonessential_weight_sum;
      ne_shortfall_scale_[i] = 1.0 - f.beta / f.x0;
    }
  }
  ne_offset_[n] = member_supplier_.size();

  out_strength_ = compute_strengths(net).out;
  removed_.assign(n, 0);
}

void Propagator::load_scenario(const ShockScenario& scenario) {
  for (auto i : removed_list_) removed_[i] = 0;
  removed_list_.clear();
  for (auto i : scenario.removed) {
    if (i >= removed_.size()) throw Error(ErrorCode::kInvalidScenario, "scenario references firm index out of range");
    removed_[i] = 1;
    removed_list_.push_back(i);
  }
}

void Propagator::update_range(const LevelState& state, LevelState& out, std::size_t begin, std::size_t end) const {
  const auto& h = state.h;
  const auto& customers = net_->out();
  const bool cascade = options_.demand == DemandShock::kCascade;
  auto level = [&](FirmIndex j) { return removed_[j] ? 0.0 : h[j]; };

  for (std::size_t i = begin; i < end; ++i) {
    if (removed_[i]) {
      out.h_d[i] = out.h_u[i] = out.h[i] = 0.0;
      continue;
    }
    if (!active_[i]) {
      out.h_d[i] = out.h_u[i] = out.h[i] = 1.0;
      continue;
    }

    double hd = 1.0;
    for (std::size_t g = group_offset_[i]; g < group_offset_[i + 1]; ++g) {
      double supplied = 0.0;
      for (std::size_t m = member_offset_[g]; m < member_offset_[g + 1]; ++m) {
        supplied += member_weight_[m] * level(member_supplier_[m]);
      }
      hd = std::min(hd, supplied / group_weight_[g]);
    }
    if (ne_shortfall_scale_[i] > 0.0) {
      double supplied = 0.0;
      for (std::size_t m = ne_offset_[i]; m < ne_offset_[i + 1]; ++m) {
        supplied += member_weight_[m] * level(member_supplier_[m]);
      }
      // 1 - (1 - beta/x0)(1 - availability): equals (beta + (x0-beta)*availability)/x0,
      // written so that full availability gives exactly 1.
      hd = std::min(hd, 1.0 - ne_shortfall_scale_[i] * (1.0 - supplied / ne_weight_[i]));
    }
    hd = clamp01(hd);

    double hu = 1.0;
    if (customers.degree(static_cast<FirmIndex>(i)) > 0) {
      auto nbrs = customers.neighbors(static_cast<FirmIndex>(i));
      auto ws = customers.weights(static_cast<FirmIndex>(i));
      double demanded = 0.0;
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const FirmIndex j = nbrs[k];
        demanded += ws[k] * (cascade ? level(j) : (removed_[j] ? 0.0 : 1.0));
      }
      hu = clamp01(demanded / out_strength_[i]);
    }

    out.h_d[i] = hd;
    out.h_u[i] = hu;
    out.h[i] = std::min(hd, hu);
  }
}

void Propagator::step(const LevelState& state, const ShockScenario& scenario, LevelState& out) {
  const std::size_t n = num_firms();
  if (state.size() != n) throw Error(ErrorCode::kInvalidArgument, "level state size does not match the network");
  load_scenario(scenario);
  out.h_d.resize(n);
  out.h_u.resize(n);
  out.h.resize(n);
  if (options_.threads > 1 && n >= kParallelStepMinFirms) {
    parallel_blocks(n, options_.threads, 1024,
                    [&](std::size_t begin, std::size_t end) { update_range(state, out, begin, end); });
  } else {
    update_range(state, out, 0, n);
  }
}

EquilibriumState Propagator::run(const ShockScenario& scenario) {
  const std::size_t n = num_firms();
  current_ = LevelState::full(n);
  EquilibriumState result;
  for (std::size_t t = 1; t <= options_.max_iterations; ++t) {
    step(current_, scenario, next_);
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      delta = std::max({delta, std::abs(next_.h[i] - current_.h[i]), std::abs(next_.h_d[i] - current_.h_d[i]),
                        std::abs(next_.h_u[i] - current_.h_u[i])});
    }
    std::swap(current_, next_);
    result.iterations = t;
    result.max_delta = delta;
    if (delta <= options_.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.levels = current_;
  return result;
}

EquilibriumState propagate(const ProductionNetwork& net, const ProductionFunctionSet& pf,
                           const ShockScenario& scenario, const PropagationOptions& options) {
  Propagator engine(net, pf, options);
  return engine.run(scenario);
}

LevelState production_step(const LevelState& state, const ProductionNetwork& net, const ProductionFunctionSet& pf,
                           const ShockScenario& scenario, DemandShock demand) {
  PropagationOptions options;
  options.demand = demand;
  Propagator engine(net, pf, options);
  LevelState out;
  engine.step(state, scenario, out);
  return out;
}

std::string equilibrium_csv(const ProductionNetwork& net, const LevelState& levels) {
  std::string out = "firm_id,h_d,h_u,h\n";
  for (FirmIndex i = 0; i < net.num_firms(); ++i) {
    out += csv::escape(net.firm(i).id) + ',' + csv::format_double(levels.h_d[i]) + ',' +
           csv::format_double(levels.h_u[i]) + ',' + csv::format_double(levels.h[i]) + '\n';
  }
  return out;
}

}  // namespace esrinet
