#include "esrinet/regimes.hpp"

#include <cmath>
#include <vector>

#include "esrinet/error.hpp"

namespace esrinet {
namespace {

RegimeFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  RegimeFit fit;
  fit.n = x.size();
  fit.lambda = sxy / sxx;
  fit.intercept = my - fit.lambda * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.lambda * x[i]);
    ss_res += r * r;
  }
  // A perfectly flat regime is fitted exactly.
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace

RegimeFitResult fit_rank_regimes(std::span<const double> ratios, double hi, double lo) {
  if (!(lo > 0.0 && hi > lo)) throw Error(ErrorCode::kInvalidArgument, "thresholds must satisfy hi > lo > 0");
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    if (ratios[i] > ratios[i - 1]) throw Error(ErrorCode::kInvalidArgument, "ratios must be sorted in descending order");
  }

  RegimeFitResult result;
  std::vector<double> xu, yu, xl, yl;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double v = ratios[i];
    if (!std::isfinite(v) || v <= 0.0) {
      ++result.n_skipped;
      continue;
    }
    const double rank = static_cast<double>(i + 1);
    if (v > hi) {
      xu.push_back(rank);
      yu.push_back(std::log(v));
    } else if (v > lo) {
      xl.push_back(rank);
      yl.push_back(std::log(v));
    }
  }
  result.n_upper = xu.size();
  result.n_lower = xl.size();
  auto too_few = [](const char* name, std::size_t n) {
    return std::string(name) + " regime has " + std::to_string(n) + " points, need " +
           std::to_string(kMinRegimePoints);
  };
  if (xu.size() >= kMinRegimePoints) {
    result.upper = least_squares(xu, yu);
  } else {
    result.upper_error = too_few("upper", xu.size());
  }
  if (xl.size() >= kMinRegimePoints) {
    result.lower = least_squares(xl, yl);
  } else {
    result.lower_error = too_few("lower", xl.size());
  }
  return result;
}

RegimeFitResult fit_rank_regimes_strict(std::span<const double> ratios, double hi, double lo) {
  auto result = fit_rank_regimes(ratios, hi, lo);
  if (result.upper_error) throw Error(ErrorCode::kInsufficientPoints, *result.upper_error);
  if (result.lower_error) throw Error(ErrorCode::kInsufficientPoints, *result.lower_error);
  return result;
}

}  // namespace esrinet
