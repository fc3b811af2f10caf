#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "esrinet/network.hpp"

namespace esrinet {

/// Supplier-sector x buyer-sector essentiality lookup.
///
/// Keys may be a full sector code ("C24"), a section letter ("C") or the
/// wildcard "*". Lookup tries, in order: exact buyer code, buyer letter, then
/// "*", each first with the exact supplier code, then the supplier letter,
/// then "*". A pair that matches nothing resolves to the default rule; with no
/// default rule configured it is an UnknownSector error.
class EssentialityMatrix {
 public:
  EssentialityMatrix() = default;
  explicit EssentialityMatrix(std::optional<bool> default_rule) : default_rule_(default_rule) {}

  /// Stand-in table shipped with the library: supplier sections B (mining),
  /// C (manufacturing) and D (power) are essential to every buyer, anything
  /// else is non-essential.
  static EssentialityMatrix bundled_default();

  /// Reads `supplier_sector,buyer_sector,essential`; unlisted pairs default to
  /// non-essential.
  static EssentialityMatrix load(const std::filesystem::path& path);

  void set(std::string supplier_sector, std::string buyer_sector, bool essential);
  bool is_essential(std::string_view supplier_sector, std::string_view buyer_sector) const;

  std::optional<bool> default_rule() const noexcept { return default_rule_; }
  const std::map<std::pair<std::string, std::string>, bool>& entries() const noexcept { return entries_; }

  std::string to_csv() const;

 private:
  std::map<std::pair<std::string, std::string>, bool> entries_;
  std::optional<bool> default_rule_ = false;
};

/// In-edges of one firm split by essentiality. Edges are referenced by their
/// slot in `net.in()`; essential slots are grouped by supplier sector.
struct InputPartition {
  struct Group {
    std::string sector;
    std::vector<std::size_t> slots;
  };
  std::vector<Group> essential;
  std::vector<std::size_t> nonessential;
};

std::vector<InputPartition> classify_inputs(const ProductionNetwork& net, const EssentialityMatrix& ess);

enum class X0Rule {
  /// s_out, or s_in for pure sinks.
  kOut,
  /// max(s_in, s_out).
  kMax,
};

std::string_view to_string(X0Rule rule) noexcept;
std::optional<X0Rule> parse_x0_rule(std::string_view text) noexcept;

enum class FirmStatus {
  kActive,
  /// No in- or out-edges; the level stays at 1 unless the firm is removed.
  kInert,
  /// x0 = 0 with positive in-strength; treated like kInert.
  kDegenerate,
};

struct EssentialGroup {
  std::string sector;
  std::vector<FirmIndex> suppliers;
  std::vector<double> weights;
  double weight_sum = 0.0;
  /// weight_sum / x0
  double alpha = 0.0;
};

/// Generalized Leontief function of one firm:
///
///   x = min( min_k sum_{j in k} W_ji h_j / alpha_k ,  beta + sum_{j in ne} W_ji h_j / alpha_ne )
///
/// The non-essential term is absent when there are no non-essential inputs
/// (beta = x0) or when beta = x0.
struct FirmProductionFunction {
  double x0 = 0.0;
  double beta = 0.0;
  std::vector<EssentialGroup> essential_groups;
  std::vector<FirmIndex> nonessential_suppliers;
  std::vector<double> nonessential_weights;
  double nonessential_weight_sum = 0.0;
  /// nonessential_weight_sum / (x0 - beta); 0 when the term is absent.
  double alpha_nonessential = 0.0;
  FirmStatus status = FirmStatus::kActive;

  bool has_nonessential_term() const noexcept { return alpha_nonessential > 0.0; }

  /// Absolute output given relative levels of all firms (indexed by FirmIndex).
  double evaluate(std::span<const double> levels) const;
};

struct CalibrationParams {
  double gamma = 0.5;
  X0Rule x0_rule = X0Rule::kOut;
  std::string essentiality_source = "bundled-default";
};

class ProductionFunctionSet {
 public:
  std::size_t size() const noexcept { return firms_.size(); }
  const FirmProductionFunction& operator[](FirmIndex i) const { return firms_[i]; }
  const std::vector<FirmProductionFunction>& firms() const noexcept { return firms_; }
  const CalibrationParams& params() const noexcept { return params_; }
  /// Firms flagged kDegenerate during calibration.
  const std::vector<FirmIndex>& degenerate() const noexcept { return degenerate_; }

  /// `firm_id,x0,beta,n_essential_groups,n_nonessential`
  std::string audit_csv(const ProductionNetwork& net) const;

 private:
  friend ProductionFunctionSet calibrate(const ProductionNetwork&, std::span<const InputPartition>,
                                         const CalibrationParams&);
  std::vector<FirmProductionFunction> firms_;
  CalibrationParams params_;
  std::vector<FirmIndex> degenerate_;
};

/// Throws Error{kInvalidArgument} when gamma is outside [0, 1] or the
/// partition does not cover the network.
ProductionFunctionSet calibrate(const ProductionNetwork& net, std::span<const InputPartition> partition,
                                const CalibrationParams& params);

/// classify_inputs followed by calibrate.
ProductionFunctionSet calibrate(const ProductionNetwork& net, const EssentialityMatrix& ess,
                                const CalibrationParams& params);

}  // namespace esrinet
