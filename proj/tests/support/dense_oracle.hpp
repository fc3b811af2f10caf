#pragma once

// Brute-force reference model on dense matrices. Shares no code with the
// library's propagation engine: production functions are evaluated in
// absolute units through alpha/beta coefficients and the iteration runs a
// fixed number of synchronous steps without a convergence test.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace esrinet::testing {

struct DenseModel {
  std::size_t n = 0;
  /// w[i][j]: flow from supplier i to buyer j.
  std::vector<std::vector<double>> w;
  /// essential[i][j]: input from i is essential for j.
  std::vector<std::vector<bool>> essential;
  /// Sector of each firm; essential inputs are grouped by supplier sector.
  std::vector<std::string> sector;
  double gamma = 0.5;
  bool x0_max = false;
  bool cascade = false;
};

std::vector<double> dense_out_strength(const DenseModel& m);
std::vector<double> dense_in_strength(const DenseModel& m);

/// Runs `steps` synchronous updates from the all-ones state.
std::vector<double> dense_fixed_point(const DenseModel& m, const std::vector<bool>& removed, std::size_t steps = 10000);

double dense_esri(const DenseModel& m, const std::vector<double>& h);
double dense_ew_esri(const std::vector<std::optional<double>>& employees, const std::vector<double>& h);

}  // namespace esrinet::testing
