#include "esrinet/indices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "esrinet/csv.hpp"
#include "esrinet/error.hpp"
#include "esrinet/parallel.hpp"

namespace esrinet {

IndexWeights::IndexWeights(const ProductionNetwork& net, const EmissionConfig& emissions) {
  const std::size_t n = net.num_firms();
  out_strength_ = compute_strengths(net).out;
  employees_.assign(n, 0.0);
  co2_.assign(n, 0.0);
  ets_.assign(n, 0);
  double known_co2 = 0.0;
  bool any_co2 = false;
  for (FirmIndex i = 0; i < n; ++i) {
    const auto& f = net.firm(i);
    output_total_ += out_strength_[i];
    if (f.employees) {
      employees_[i] = *f.employees;
      employment_total_ += *f.employees;
    }
    if (f.co2) {
      co2_[i] = *f.co2;
      known_co2 += *f.co2;
      any_co2 = true;
    }
    if (f.ets_member) {
      ets_[i] = 1;
      ets_co2_total_ += co2_[i];
    }
  }
  if (emissions.total_co2) {
    if (!(*emissions.total_co2 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "total CO2 must be positive");
    co2_total_ = *emissions.total_co2;
  } else if (any_co2 && known_co2 > 0.0) {
    co2_total_ = known_co2;
  } else {
    throw Error(ErrorCode::kMissingTotal, "economy-wide CO2 total is not configured and no firm reports emissions");
  }
}

double esri_from_levels(const IndexWeights& w, std::span<const double> h) {
  if (w.output_total() <= 0.0) return 0.0;
  double loss = 0.0;
  const auto& s = w.out_strength();
  for (std::size_t i = 0; i < h.size(); ++i) loss += s[i] * (1.0 - h[i]);
  return std::clamp(loss / w.output_total(), 0.0, 1.0);
}

double ew_esri_from_levels(const IndexWeights& w, std::span<const double> h) {
  if (!w.has_employment()) throw Error(ErrorCode::kNoEmploymentData, "no firm has a known employee count");
  double loss = 0.0;
  const auto& e = w.employees();
  for (std::size_t i = 0; i < h.size(); ++i) loss += e[i] * (1.0 - h[i]);
  return std::clamp(loss / w.employment_total(), 0.0, 1.0);
}

Co2Shares co2_shares_from_levels(const IndexWeights& w, std::span<const double> h) {
  Co2Shares r;
  double ets_eliminated = 0.0;
  const auto& c = w.co2();
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double cut = c[i] * (1.0 - h[i]);
    r.eliminated += cut;
    if (w.ets()[i]) ets_eliminated += cut;
  }
  r.share_total = r.eliminated / w.co2_total();
  r.share_ets = w.ets_co2_total() > 0.0 ? ets_eliminated / w.ets_co2_total() : 0.0;
  return r;
}

double esri(const ProductionNetwork& net, const ProductionFunctionSet& pf, const ShockScenario& scenario,
            const PropagationOptions& options) {
  const auto eq = propagate(net, pf, scenario, options);
  double total = 0.0;
  double loss = 0.0;
  const auto s = compute_strengths(net).out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    total += s[i];
    loss += s[i] * (1.0 - eq.levels.h[i]);
  }
  return total > 0.0 ? std::clamp(loss / total, 0.0, 1.0) : 0.0;
}

double ew_esri(const ProductionNetwork& net, const ProductionFunctionSet& pf, const ShockScenario& scenario,
               const PropagationOptions& options) {
  double total = 0.0;
  for (const auto& f : net.firms()) total += f.employees.value_or(0.0);
  if (total <= 0.0) throw Error(ErrorCode::kNoEmploymentData, "no firm has a known employee count");
  const auto eq = propagate(net, pf, scenario, options);
  double loss = 0.0;
  for (FirmIndex i = 0; i < net.num_firms(); ++i) {
    loss += net.firm(i).employees.value_or(0.0) * (1.0 - eq.levels.h[i]);
  }
  return std::clamp(loss / total, 0.0, 1.0);
}

Co2Shares co2_shares(const ProductionNetwork& net, const ProductionFunctionSet& pf, const ShockScenario& scenario,
                     const EmissionConfig& emissions, const PropagationOptions& options) {
  const IndexWeights weights(net, emissions);
  const auto eq = propagate(net, pf, scenario, options);
  return co2_shares_from_levels(weights, eq.levels.h);
}

ScenarioResult evaluate_scenario(Propagator& engine, const IndexWeights& weights, const ShockScenario& scenario) {
  ScenarioResult r;
  r.equilibrium = engine.run(scenario);
  const auto& h = r.equilibrium.levels.h;
  r.esri = esri_from_levels(weights, h);
  r.ew_esri = ew_esri_from_levels(weights, h);
  r.co2 = co2_shares_from_levels(weights, h);
  return r;
}

double co2_ratio(double co2_share_total, double ew_esri) {
  if (ew_esri > 0.0) return co2_share_total / ew_esri;
  return co2_share_total > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

IndexTable batch_indices(const ProductionNetwork& net, const ProductionFunctionSet& pf,
                         std::span<const std::string> candidates, const BatchOptions& options) {
  if (candidates.empty()) throw Error(ErrorCode::kInvalidArgument, "candidate list is empty");
  const IndexWeights weights(net, options.emissions);
  const unsigned threads = resolve_threads(options.threads);

  IndexTable table(candidates.size());
  std::vector<std::optional<Propagator>> engines(threads);
  parallel_for(candidates.size(), threads, [&](unsigned worker, std::size_t k) {
    auto& row = table[k];
    row.firm_id = candidates[k];
    const auto idx = net.find(candidates[k]);
    if (!idx) {
      row.error = std::string(to_string(ErrorCode::kInvalidScenario)) + ": unknown firm '" + candidates[k] + "'";
      row.esri = row.ew_esri = row.ratio = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    if (!engines[worker]) engines[worker].emplace(net, pf, options.propagation);
    const ShockScenario scenario{{*idx}};
    const auto eq = engines[worker]->run(scenario);
    const auto& h = eq.levels.h;
    row.converged = eq.converged;
    row.esri = esri_from_levels(weights, h);
    row.co2 = weights.co2()[*idx];
    row.co2_share_total = row.co2 / weights.co2_total();
    row.co2_share_ets =
        weights.ets()[*idx] && weights.ets_co2_total() > 0.0 ? row.co2 / weights.ets_co2_total() : 0.0;
    if (!weights.has_employment()) {
      row.error = std::string(to_string(ErrorCode::kNoEmploymentData)) + ": no firm has a known employee count";
      row.ew_esri = row.ratio = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    row.ew_esri = ew_esri_from_levels(weights, h);
    row.ratio = co2_ratio(row.co2_share_total, row.ew_esri);
  });
  return table;
}

std::string indices_csv(const IndexTable& table) {
  std::string out = "firm_id,esri,ew_esri,co2_share_total,co2_share_ets,ratio\n";
  for (const auto& r : table) {
    out += csv::escape(r.firm_id) + ',' + csv::format_double(r.esri) + ',' + csv::format_double(r.ew_esri) + ',' +
           csv::format_double(r.co2_share_total) + ',' + csv::format_double(r.co2_share_ets) + ',' +
           csv::format_double(r.ratio) + '\n';
  }
  return out;
}

IndexTable read_indices_csv(const std::filesystem::path& path, const ProductionNetwork* net) {
  const auto table = csv::read_file(path);
  csv::require_header(table, {"firm_id", "esri", "ew_esri", "co2_share_total", "co2_share_ets", "ratio"}, path);
  IndexTable rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& cells = table.rows[r];
    const auto where = path.filename().string() + " row " + std::to_string(table.line[r]);
    if (cells.size() != 6) throw Error(ErrorCode::kSchemaError, where + ": expected 6 columns");
    IndexRow row;
    row.firm_id = cells[0];
    double* fields[] = {&row.esri, &row.ew_esri, &row.co2_share_total, &row.co2_share_ets, &row.ratio};
    for (std::size_t c = 0; c < 5; ++c) {
      if (cells[c + 1] == "nan") {
        *fields[c] = std::numeric_limits<double>::quiet_NaN();
        row.error = "not evaluated";
        continue;
      }
      auto v = csv::parse_double(cells[c + 1]);
      if (!v) throw Error(ErrorCode::kSchemaError, where + ": column " + std::to_string(c + 2) + " is not a number");
      *fields[c] = *v;
    }
    if (net) {
      if (auto idx = net->find(row.firm_id)) row.co2 = net->firm(*idx).co2.value_or(0.0);
    } else {
      row.co2 = row.co2_share_total;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> ets_candidates(const ProductionNetwork& net) {
  std::vector<std::string> ids;
  for (const auto& f : net.firms()) {
    if (f.ets_member) ids.push_back(f.id);
  }
  return ids;
}

}  // namespace esrinet
