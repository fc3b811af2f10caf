#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

namespace esrinet {

struct RegimeFit {
  /// Slope of log(ratio) against rank.
  double lambda = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

struct RegimeFitResult {
  /// Points with ratio > hi.
  std::optional<RegimeFit> upper;
  /// Points with lo < ratio <= hi.
  std::optional<RegimeFit> lower;
  std::size_t n_upper = 0;
  std::size_t n_lower = 0;
  /// Non-finite ratios are skipped.
  std::size_t n_skipped = 0;
  /// Why a regime could not be fitted, if it could not.
  std::optional<std::string> upper_error;
  std::optional<std::string> lower_error;
};

inline constexpr std::size_t kMinRegimePoints = 3;

/// Ordinary least squares of log(value) on 1-based rank, fitted separately on
/// {value > hi} and {lo < value <= hi}. A regime with fewer than
/// kMinRegimePoints points is reported in *_error rather than fitted.
/// Throws Error{kInvalidArgument} unless hi > lo > 0 and `ratios` is sorted
/// in descending order.
RegimeFitResult fit_rank_regimes(std::span<const double> ratios, double hi, double lo);

/// Same as fit_rank_regimes but throws Error{kInsufficientPoints} when either
/// regime has too few points.
RegimeFitResult fit_rank_regimes_strict(std::span<const double> ratios, double hi, double lo);

}  // namespace esrinet
