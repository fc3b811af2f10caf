#include "esrinet/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "esrinet/csv.hpp"
#include "esrinet/error.hpp"

namespace esrinet {
namespace {

Adjacency build_adjacency(std::size_t n,
                          const std::vector<std::pair<std::pair<FirmIndex, FirmIndex>, double>>& edges,
                          bool by_source) {
  Adjacency adj;
  adj.offset.assign(n + 1, 0);
  for (const auto& [key, w] : edges) ++adj.offset[(by_source ? key.first : key.second) + 1];
  std::partial_sum(adj.offset.begin(), adj.offset.end(), adj.offset.begin());
  adj.neighbor.resize(edges.size());
  adj.weight.resize(edges.size());
  auto cursor = adj.offset;
  // `edges` is sorted by (source, target); for the reverse direction this fill
  // still yields neighbours in ascending source order per target.
  for (const auto& [key, w] : edges) {
    const FirmIndex owner = by_source ? key.first : key.second;
    const FirmIndex other = by_source ? key.second : key.first;
    const std::size_t slot = cursor[owner]++;
    adj.neighbor[slot] = other;
    adj.weight[slot] = w;
  }
  return adj;
}

std::string row_ref(const std::filesystem::path& file, std::size_t line) {
  return file.filename().string() + " row " + std::to_string(line);
}

}  // namespace

ProductionNetwork ProductionNetwork::build(std::vector<Firm> firms, std::vector<SupplyEdge> edges) {
  ProductionNetwork net;
  net.index_.reserve(firms.size());
  for (std::size_t i = 0; i < firms.size(); ++i) {
    auto [it, inserted] = net.index_.emplace(firms[i].id, static_cast<FirmIndex>(i));
    if (!inserted) throw Error(ErrorCode::kDuplicateFirmId, "duplicate firm id '" + firms[i].id + "'");
  }
  net.firms_ = std::move(firms);

  std::map<std::pair<FirmIndex, FirmIndex>, double> merged;
  std::size_t row = 0;
  for (const auto& e : edges) {
    ++row;
    auto s = net.find(e.supplier);
    if (!s) throw Error(ErrorCode::kDanglingEdge, "edge " + std::to_string(row) + " references unknown firm '" + e.supplier + "'");
    auto b = net.find(e.buyer);
    if (!b) throw Error(ErrorCode::kDanglingEdge, "edge " + std::to_string(row) + " references unknown firm '" + e.buyer + "'");
    if (*s == *b) throw Error(ErrorCode::kSelfLoop, "edge " + std::to_string(row) + " is a self-loop on '" + e.supplier + "'");
    if (!(e.weight > 0.0)) throw Error(ErrorCode::kNonPositiveWeight, "edge " + std::to_string(row) + " has non-positive weight");
    auto [it, inserted] = merged.emplace(std::make_pair(*s, *b), e.weight);
    if (!inserted) {
      it->second += e.weight;
      net.warnings_.push_back("parallel edge " + e.supplier + "->" + e.buyer + " summed");
    }
  }

  std::vector<std::pair<std::pair<FirmIndex, FirmIndex>, double>> sorted(merged.begin(), merged.end());
  net.out_ = build_adjacency(net.firms_.size(), sorted, true);
  net.in_ = build_adjacency(net.firms_.size(), sorted, false);
  return net;
}

std::optional<FirmIndex> ProductionNetwork::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FirmIndex ProductionNetwork::index_of(std::string_view id) const {
  auto i = find(id);
  if (!i) throw Error(ErrorCode::kInvalidArgument, "unknown firm id '" + std::string(id) + "'");
  return *i;
}

std::vector<SupplyEdge> ProductionNetwork::edges() const {
  std::vector<SupplyEdge> result;
  result.reserve(num_edges());
  for (FirmIndex i = 0; i < num_firms(); ++i) {
    auto nbrs = out_.neighbors(i);
    auto ws = out_.weights(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      result.push_back({firms_[i].id, firms_[nbrs[k]].id, ws[k]});
    }
  }
  return result;
}

StrengthTable compute_strengths(const ProductionNetwork& net) {
  const std::size_t n = net.num_firms();
  StrengthTable s;
  s.in.assign(n, 0.0);
  s.out.assign(n, 0.0);
  for (FirmIndex i = 0; i < n; ++i) {
    for (double w : net.out().weights(i)) s.out[i] += w;
    for (double w : net.in().weights(i)) s.in[i] += w;
  }
  return s;
}

ValidationReport validate(const ProductionNetwork& net, std::optional<double> reference_employment) {
  ValidationReport r;
  r.num_firms = net.num_firms();
  r.num_edges = net.num_edges();
  r.num_warnings = net.warnings().size();
  const auto strengths = compute_strengths(net);
  for (FirmIndex i = 0; i < net.num_firms(); ++i) {
    const auto& f = net.firm(i);
    if (net.out().degree(i) == 0 && net.in().degree(i) == 0) ++r.num_isolated;
    if (strengths.out[i] == 0.0) ++r.num_zero_out_strength;
    if (f.ets_member) ++r.num_ets;
    if (f.co2) ++r.num_with_co2;
    if (f.employees) {
      ++r.num_with_employees;
      r.employment_known += *f.employees;
    }
    r.total_weight += strengths.out[i];
  }
  if (r.num_firms > 0) {
    r.employee_firm_coverage = static_cast<double>(r.num_with_employees) / static_cast<double>(r.num_firms);
  }
  if (reference_employment && *reference_employment > 0.0) {
    r.employment_coverage = r.employment_known / *reference_employment;
  }
  return r;
}

ProductionNetwork load_network(const std::filesystem::path& firm_file,
                               const std::filesystem::path& edge_file) {
  const auto firm_table = csv::read_file(firm_file);
  csv::require_header(firm_table, {"id", "sector", "employees", "co2", "ets_member"}, firm_file);

  auto schema_error = [](const std::filesystem::path& file, std::size_t line, const std::string& what) {
    return Error(ErrorCode::kSchemaError, row_ref(file, line) + ": " + what);
  };

  std::vector<Firm> firms;
  firms.reserve(firm_table.rows.size());
  for (std::size_t r = 0; r < firm_table.rows.size(); ++r) {
    const auto& row = firm_table.rows[r];
    const auto line = firm_table.line[r];
    if (row.size() != 5) throw schema_error(firm_file, line, "expected 5 columns, got " + std::to_string(row.size()));
    Firm f;
    f.id = row[0];
    if (f.id.empty()) throw schema_error(firm_file, line, "empty firm id");
    f.sector = row[1];
    if (!row[2].empty()) {
      auto v = csv::parse_double(row[2]);
      if (!v || !(*v >= 0.0) || std::isinf(*v)) throw schema_error(firm_file, line, "employees must be a non-negative number");
      f.employees = *v;
    }
    if (!row[3].empty()) {
      auto v = csv::parse_double(row[3]);
      if (!v || !(*v >= 0.0) || std::isinf(*v)) throw schema_error(firm_file, line, "co2 must be a non-negative number");
      f.co2 = *v;
    }
    if (row[4] == "1") {
      f.ets_member = true;
    } else if (row[4] != "0") {
      throw schema_error(firm_file, line, "ets_member must be 0 or 1");
    }
    if (f.ets_member && !f.co2) throw schema_error(firm_file, line, "ETS member '" + f.id + "' has no co2 value");
    firms.push_back(std::move(f));
  }

  const auto edge_table = csv::read_file(edge_file);
  csv::require_header(edge_table, {"supplier_id", "buyer_id", "weight"}, edge_file);
  std::vector<SupplyEdge> edges;
  edges.reserve(edge_table.rows.size());
  for (std::size_t r = 0; r < edge_table.rows.size(); ++r) {
    const auto& row = edge_table.rows[r];
    const auto line = edge_table.line[r];
    if (row.size() != 3) throw schema_error(edge_file, line, "expected 3 columns, got " + std::to_string(row.size()));
    auto w = csv::parse_double(row[2]);
    if (!w || std::isnan(*w) || std::isinf(*w)) throw schema_error(edge_file, line, "weight is not a number");
    edges.push_back({row[0], row[1], *w});
  }

  // Row-level context is only available here, so re-check the per-edge
  // invariants before handing off to build().
  std::unordered_map<std::string_view, bool> known;
  known.reserve(firms.size());
  for (const auto& f : firms) known.emplace(f.id, true);
  for (std::size_t r = 0; r < edges.size(); ++r) {
    const auto& e = edges[r];
    const auto ref = row_ref(edge_file, edge_table.line[r]);
    for (const auto* id : {&e.supplier, &e.buyer}) {
      if (!known.contains(*id)) throw Error(ErrorCode::kDanglingEdge, ref + ": unknown firm id '" + *id + "'");
    }
    if (e.supplier == e.buyer) throw Error(ErrorCode::kSelfLoop, ref + ": self-loop on '" + e.supplier + "'");
    if (!(e.weight > 0.0)) throw Error(ErrorCode::kNonPositiveWeight, ref + ": weight must be positive");
  }

  return ProductionNetwork::build(std::move(firms), std::move(edges));
}

ProductionNetwork load_network_dir(const std::filesystem::path& dir) {
  return load_network(dir / kFirmsFile, dir / kEdgesFile);
}

std::string firms_to_csv(const ProductionNetwork& net) {
  std::string out = "id,sector,employees,co2,ets_member\n";
  for (const auto& f : net.firms()) {
    out += csv::escape(f.id);
    out += ',';
    out += csv::escape(f.sector);
    out += ',';
    if (f.employees) out += csv::format_double(*f.employees);
    out += ',';
    if (f.co2) out += csv::format_double(*f.co2);
    out += ',';
    out += f.ets_member ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string edges_to_csv(const ProductionNetwork& net) {
  std::string out = "supplier_id,buyer_id,weight\n";
  for (const auto& e : net.edges()) {
    out += csv::escape(e.supplier);
    out += ',';
    out += csv::escape(e.buyer);
    out += ',';
    out += csv::format_double(e.weight);
    out += '\n';
  }
  return out;
}

void save_network(const ProductionNetwork& net, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  csv::write_atomic(dir / kFirmsFile, firms_to_csv(net));
  csv::write_atomic(dir / kEdgesFile, edges_to_csv(net));
}

}  // namespace esrinet
