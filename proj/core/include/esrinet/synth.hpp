#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "esrinet/calibration.hpp"
#include "esrinet/network.hpp"

namespace esrinet {

struct LognormalParams {
  double mu = 0.0;
  double sigma = 1.0;
};

struct SynthParams {
  std::size_t n_firms = 1000;
  std::size_t n_edges = 5000;
  /// Pareto tail index of the expected in/out degrees, P(K > k) ~ k^-exponent.
  double degree_exponent = 1.5;
  /// NACE section letters and their relative frequencies.
  std::vector<std::pair<std::string, double>> sector_weights = default_sector_weights();
  LognormalParams employment{2.5, 1.2};
  LognormalParams emission{10.0, 1.5};
  /// Edge weights are 1e6 * lognormal(0, weight_sigma).
  double weight_sigma = 1.0;
  std::size_t n_ets = 50;
  std::uint64_t seed = 1;
  /// When set, the network is read from this directory instead of generated
  /// (used to ship hand-built fixtures through the same entry point).
  std::optional<std::filesystem::path> override_dir;

  static std::vector<std::pair<std::string, double>> default_sector_weights();
};

struct SynthNetwork {
  ProductionNetwork network;
  EssentialityMatrix essentiality;
};

/// Seeded generator: directed Chung-Lu style wiring from Pareto fitnesses with
/// self-loops and duplicates rejected, lognormal weights and attributes, and
/// an ETS-like subset (biased towards sections B, C, D) that carries emissions.
///
/// Each stage draws from its own stream derived from the seed, so a change to
/// one stage leaves the others untouched. Throws Error{kInfeasibleParams}.
SynthNetwork generate(const SynthParams& params);

/// Writes firms.csv, edges.csv and essentiality.csv.
void write_synth(const SynthNetwork& synth, const std::filesystem::path& dir);

/// Rank-regression tail index: the negative slope of log(rank) against
/// log(value) over the largest `tail_fraction` of the positive values.
double estimate_tail_exponent(std::span<const double> values, double tail_fraction = 0.1);

/// Share of the total held by the largest `fraction` of values.
double top_share(std::span<const double> values, double fraction);

}  // namespace esrinet
