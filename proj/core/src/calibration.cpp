#include "esrinet/calibration.hpp"

#include <algorithm>
#include <array>

#include "esrinet/csv.hpp"
#include "esrinet/error.hpp"

namespace esrinet {
namespace {

std::string_view section_letter(std::string_view sector) {
  return sector.empty() ? sector : sector.substr(0, 1);
}

}  // namespace

EssentialityMatrix EssentialityMatrix::bundled_default() {
  EssentialityMatrix m(false);
  for (const char* s : {"B", "C", "D"}) m.set(s, "*", true);
  return m;
}

EssentialityMatrix EssentialityMatrix::load(const std::filesystem::path& path) {
  const auto table = csv::read_file(path);
  csv::require_header(table, {"supplier_sector", "buyer_sector", "essential"}, path);
  EssentialityMatrix m(false);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto where = path.filename().string() + " row " + std::to_string(table.line[r]);
    if (row.size() != 3) throw Error(ErrorCode::kSchemaError, where + ": expected 3 columns");
    if (row[0].empty() || row[1].empty()) throw Error(ErrorCode::kSchemaError, where + ": empty sector code");
    if (row[2] != "0" && row[2] != "1") throw Error(ErrorCode::kSchemaError, where + ": essential must be 0 or 1");
    m.set(row[0], row[1], row[2] == "1");
  }
  return m;
}

void EssentialityMatrix::set(std::string supplier_sector, std::string buyer_sector, bool essential) {
  entries_[{std::move(supplier_sector), std::move(buyer_sector)}] = essential;
}

bool EssentialityMatrix::is_essential(std::string_view supplier_sector, std::string_view buyer_sector) const {
  const std::array<std::string_view, 3> buyers{buyer_sector, section_letter(buyer_sector), "*"};
  const std::array<std::string_view, 3> suppliers{supplier_sector, section_letter(supplier_sector), "*"};
  std::pair<std::string, std::string> key;
  for (auto b : buyers) {
    for (auto s : suppliers) {
      key.first.assign(s);
      key.second.assign(b);
      if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
  }
  if (default_rule_) return *default_rule_;
  throw Error(ErrorCode::kUnknownSector, "no essentiality rule for sector pair (" + std::string(supplier_sector) +
                                             ", " + std::string(buyer_sector) + ")");
}

std::string EssentialityMatrix::to_csv() const {
  std::string out = "supplier_sector,buyer_sector,essential\n";
  for (const auto& [key, essential] : entries_) {
    out += csv::escape(key.first) + ',' + csv::escape(key.second) + ',' + (essential ? "1" : "0") + '\n';
  }
  return out;
}

std::vector<InputPartition> classify_inputs(const ProductionNetwork& net, const EssentialityMatrix& ess) {
  std::vector<InputPartition> result(net.num_firms());
  const auto& in = net.in();
  for (FirmIndex i = 0; i < net.num_firms(); ++i) {
    auto& part = result[i];
    const auto& buyer_sector = net.firm(i).sector;
    for (std::size_t slot = in.offset[i]; slot < in.offset[i + 1]; ++slot) {
      const auto& supplier_sector = net.firm(in.neighbor[slot]).sector;
      if (!ess.is_essential(supplier_sector, buyer_sector)) {
        part.nonessential.push_back(slot);
        continue;
      }
      auto it = std::find_if(part.essential.begin(), part.essential.end(),
                             [&](const auto& g) { return g.sector == supplier_sector; });
      if (it == part.essential.end()) {
        part.essential.push_back({supplier_sector, {}});
        it = std::prev(part.essential.end());
      }
      it->slots.push_back(slot);
    }
    std::sort(part.essential.begin(), part.essential.end(),
              [](const auto& a, const auto& b) { return a.sector < b.sector; });
  }
  return result;
}

std::string_view to_string(X0Rule rule) noexcept {
  return rule == X0Rule::kMax ? "max" : "out";
}

std::optional<X0Rule> parse_x0_rule(std::string_view text) noexcept {
  if (text == "out") return X0Rule::kOut;
  if (text == "max") return X0Rule::kMax;
  return std::nullopt;
}

double FirmProductionFunction::evaluate(std::span<const double> levels) const {
  if (status != FirmStatus::kActive) return x0;
  double output = x0;
  for (const auto& g : essential_groups) {
    double supplied = 0.0;
    for (std::size_t k = 0; k < g.suppliers.size(); ++k) supplied += g.weights[k] * levels[g.suppliers[k]];
    output = std::min(output, supplied / g.alpha);
  }
  if (has_nonessential_term()) {
    double supplied = 0.0;
    for (std::size_t k = 0; k < nonessential_suppliers.size(); ++k) {
      supplied += nonessential_weights[k] * levels[nonessential_suppliers[k]];
    }
    output = std::min(output, beta + supplied / alpha_nonessential);
  }
  return output;
}

std::string ProductionFunctionSet::audit_csv(const ProductionNetwork& net) const {
  std::string out = "firm_id,x0,beta,n_essential_groups,n_nonessential\n";
  for (FirmIndex i = 0; i < firms_.size(); ++i) {
    const auto& f = firms_[i];
    out += csv::escape(net.firm(i).id) + ',' + csv::format_double(f.x0) + ',' + csv::format_double(f.beta) + ',' +
           std::to_string(f.essential_groups.size()) + ',' + std::to_string(f.nonessential_suppliers.size()) + '\n';
  }
  return out;
}

ProductionFunctionSet calibrate(const ProductionNetwork& net, std::span<const InputPartition> partition,
                                const CalibrationParams& params) {
  if (!(params.gamma >= 0.0 && params.gamma <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma must lie in [0, 1]");
  }
  if (partition.size() != net.num_firms()) {
    throw Error(ErrorCode::kInvalidArgument, "input partition does not cover the network");
  }
  const auto strengths = compute_strengths(net);
  const auto& in = net.in();

  ProductionFunctionSet set;
  set.params_ = params;
  set.firms_.resize(net.num_firms());
  for (FirmIndex i = 0; i < net.num_firms(); ++i) {
    auto& f = set.firms_[i];
    const double s_in = strengths.in[i];
    const double s_out = strengths.out[i];
    if (params.x0_rule == X0Rule::kMax) {
      f.x0 = std::max(s_in, s_out);
    } else {
      f.x0 = s_out > 0.0 ? s_out : s_in;
    }

    if (s_in == 0.0 && s_out == 0.0) {
      f.status = FirmStatus::kInert;
      continue;
    }
    if (f.x0 <= 0.0) {
      f.status = FirmStatus::kDegenerate;
      set.degenerate_.push_back(i);
      continue;
    }

    const auto& part = partition[i];
    for (const auto& g : part.essential) {
      EssentialGroup group;
      group.sector = g.sector;
      for (auto slot : g.slots) {
        group.suppliers.push_back(in.neighbor[slot]);
        group.weights.push_back(in.weight[slot]);
        group.weight_sum += in.weight[slot];
      }
      group.alpha = group.weight_sum / f.x0;
      f.essential_groups.push_back(std::move(group));
    }
    for (auto slot : part.nonessential) {
      f.nonessential_suppliers.push_back(in.neighbor[slot]);
      f.nonessential_weights.push_back(in.weight[slot]);
      f.nonessential_weight_sum += in.weight[slot];
    }
    f.beta = part.nonessential.empty() ? f.x0 : params.gamma * f.x0;
    if (!part.nonessential.empty() && f.x0 > f.beta) {
      f.alpha_nonessential = f.nonessential_weight_sum / (f.x0 - f.beta);
    }
  }
  return set;
}

ProductionFunctionSet calibrate(const ProductionNetwork& net, const EssentialityMatrix& ess,
                                const CalibrationParams& params) {
  const auto partition = classify_inputs(net, ess);
  return calibrate(net, partition, params);
}

}  // namespace esrinet
