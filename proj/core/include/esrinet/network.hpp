#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace esrinet {

using FirmIndex = std::uint32_t;

struct Firm {
  std::string id;
  /// NACE-style code: section letter plus optional two-digit division, e.g. "C24".
  std::string sector;
  /// Missing is distinct from zero; missing firms carry no employment weight.
  std::optional<double> employees;
  /// Tonnes CO2e per year.
  std::optional<double> co2;
  bool ets_member = false;

  friend bool operator==(const Firm&, const Firm&) = default;
};

/// Annual monetary flow of goods from `supplier` to `buyer`.
struct SupplyEdge {
  std::string supplier;
  std::string buyer;
  double weight = 0.0;

  friend bool operator==(const SupplyEdge&, const SupplyEdge&) = default;
};

/// Half of a compressed adjacency structure: for firm i the neighbours are
/// `neighbor[offset[i] .. offset[i+1])`, sorted by firm index.
struct Adjacency {
  std::vector<std::size_t> offset;
  std::vector<FirmIndex> neighbor;
  std::vector<double> weight;

  std::span<const FirmIndex> neighbors(FirmIndex i) const {
    return {neighbor.data() + offset[i], offset[i + 1] - offset[i]};
  }
  std::span<const double> weights(FirmIndex i) const {
    return {weight.data() + offset[i], offset[i + 1] - offset[i]};
  }
  std::size_t degree(FirmIndex i) const { return offset[i + 1] - offset[i]; }
};

/// Immutable firm-level supply network. Firms keep their input order; edges
/// are stored once per direction in compressed form, sorted by endpoint index,
/// so every traversal order is independent of file row order.
class ProductionNetwork {
 public:
  ProductionNetwork() = default;

  /// Validates and indexes a network. Throws Error with kDuplicateFirmId,
  /// kDanglingEdge, kNonPositiveWeight or kSelfLoop. Parallel edges are summed
  /// and noted in warnings().
  static ProductionNetwork build(std::vector<Firm> firms, std::vector<SupplyEdge> edges);

  std::size_t num_firms() const noexcept { return firms_.size(); }
  std::size_t num_edges() const noexcept { return out_.neighbor.size(); }

  const std::vector<Firm>& firms() const noexcept { return firms_; }
  const Firm& firm(FirmIndex i) const { return firms_[i]; }
  std::optional<FirmIndex> find(std::string_view id) const;
  /// Throws Error{kInvalidArgument} for an unknown id.
  FirmIndex index_of(std::string_view id) const;

  /// Customers of i with W_ij.
  const Adjacency& out() const noexcept { return out_; }
  /// Suppliers of i with W_ji.
  const Adjacency& in() const noexcept { return in_; }

  /// Edges in (supplier index, buyer index) order.
  std::vector<SupplyEdge> edges() const;

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  std::vector<Firm> firms_;
  std::unordered_map<std::string, FirmIndex> index_;
  Adjacency out_;
  Adjacency in_;
  std::vector<std::string> warnings_;
};

struct StrengthTable {
  std::vector<double> in;
  std::vector<double> out;

  double total(FirmIndex i) const { return in[i] + out[i]; }
};

StrengthTable compute_strengths(const ProductionNetwork& net);

struct ValidationReport {
  std::size_t num_firms = 0;
  std::size_t num_edges = 0;
  std::size_t num_isolated = 0;
  std::size_t num_zero_out_strength = 0;
  std::size_t num_ets = 0;
  std::size_t num_with_employees = 0;
  std::size_t num_with_co2 = 0;
  double employment_known = 0.0;
  /// Share of firms with a known employee count.
  double employee_firm_coverage = 0.0;
  /// employment_known / reference total, when a reference total is given.
  std::optional<double> employment_coverage;
  double total_weight = 0.0;
  std::size_t num_warnings = 0;
};

ValidationReport validate(const ProductionNetwork& net,
                          std::optional<double> reference_employment = std::nullopt);

inline constexpr std::string_view kFirmsFile = "firms.csv";
inline constexpr std::string_view kEdgesFile = "edges.csv";
inline constexpr std::string_view kEssentialityFile = "essentiality.csv";

/// Reads firms.csv and edges.csv in the ingestion schemas.
ProductionNetwork load_network(const std::filesystem::path& firm_file,
                               const std::filesystem::path& edge_file);
ProductionNetwork load_network_dir(const std::filesystem::path& dir);

std::string firms_to_csv(const ProductionNetwork& net);
std::string edges_to_csv(const ProductionNetwork& net);
void save_network(const ProductionNetwork& net, const std::filesystem::path& dir);

}  // namespace esrinet
