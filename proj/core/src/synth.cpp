#include "esrinet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <unordered_set>

#include "esrinet/csv.hpp"
#include "esrinet/error.hpp"

namespace esrinet {
namespace {

enum class Stage : std::uint64_t {
  kDegrees = 1,
  kWiring = 2,
  kWeights = 3,
  kSectors = 4,
  kEmployment = 5,
  kEts = 6,
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::mt19937_64 stream(std::uint64_t seed, Stage stage) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stage))));
}

// Open interval (0, 1), so powers and logs stay finite.
double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

const std::map<std::string, std::pair<int, int>>& nace_divisions() {
  static const std::map<std::string, std::pair<int, int>> divisions = {
      {"A", {1, 3}},   {"B", {5, 9}},   {"C", {10, 33}}, {"D", {35, 35}}, {"E", {36, 39}},
      {"F", {41, 43}}, {"G", {45, 47}}, {"H", {49, 53}}, {"I", {55, 56}}, {"J", {58, 63}},
      {"K", {64, 66}}, {"L", {68, 68}}, {"M", {69, 75}}, {"N", {77, 82}},
  };
  return divisions;
}

void check_params(const SynthParams& p) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInfeasibleParams, what); };
  if (p.n_firms == 0) fail("n_firms must be positive");
  const double capacity = static_cast<double>(p.n_firms) * static_cast<double>(p.n_firms - 1);
  if (static_cast<double>(p.n_edges) > capacity) {
    fail("n_edges " + std::to_string(p.n_edges) + " exceeds simple digraph capacity " +
         csv::format_double(capacity));
  }
  if (p.n_edges + 1 < p.n_firms) fail("n_edges must be at least n_firms - 1");
  if (p.n_ets > p.n_firms) fail("n_ets exceeds n_firms");
  if (!(p.degree_exponent > 0.0)) fail("degree_exponent must be positive");
  if (!(p.employment.sigma > 0.0) || !(p.emission.sigma > 0.0) || !(p.weight_sigma > 0.0)) {
    fail("lognormal sigmas must be positive");
  }
  if (p.sector_weights.empty()) fail("sector_weights is empty");
  for (const auto& [sector, w] : p.sector_weights) {
    if (sector.empty() || !(w > 0.0)) fail("sector weights must be positive with non-empty codes");
  }
}

// Expected-degree sequence from Pareto quantiles, assigned to firms in a
// seeded random order.
std::vector<double> pareto_fitness(std::mt19937_64& rng, std::size_t n, double exponent) {
  std::vector<double> f(n);
  const double cap = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    f[i] = std::min(cap, std::pow(u, -1.0 / exponent));
  }
  std::shuffle(f.begin(), f.end(), rng);
  return f;
}

std::vector<std::pair<FirmIndex, FirmIndex>> wire(std::mt19937_64& rng, const std::vector<double>& out_fit,
                                                  const std::vector<double>& in_fit, std::size_t n_edges) {
  const std::size_t n = out_fit.size();
  std::discrete_distribution<std::size_t> pick_source(out_fit.begin(), out_fit.end());
  std::discrete_distribution<std::size_t> pick_target(in_fit.begin(), in_fit.end());
  std::uniform_int_distribution<std::size_t> uniform(0, n - 1);

  std::unordered_set<std::uint64_t> present;
  present.reserve(n_edges * 2);
  std::vector<std::pair<FirmIndex, FirmIndex>> edges;
  edges.reserve(n_edges);

  // Dense targets saturate the hubs; after too many rejections fall back to
  // uniform pairs so generation always terminates.
  std::size_t rejections = 0;
  const std::size_t rejection_budget = 20 * n_edges + 1000;
  while (edges.size() < n_edges) {
    const bool weighted = rejections < rejection_budget;
    const auto s = weighted ? pick_source(rng) : uniform(rng);
    const auto t = weighted ? pick_target(rng) : uniform(rng);
    const std::uint64_t key = (static_cast<std::uint64_t>(s) << 32) | t;
    if (s == t || !present.insert(key).second) {
      ++rejections;
      continue;
    }
    edges.emplace_back(static_cast<FirmIndex>(s), static_cast<FirmIndex>(t));
  }
  return edges;
}

}  // namespace

std::vector<std::pair<std::string, double>> SynthParams::default_sector_weights() {
  return {{"A", 0.04}, {"B", 0.01}, {"C", 0.20}, {"D", 0.02}, {"E", 0.02}, {"F", 0.10}, {"G", 0.25},
          {"H", 0.07}, {"I", 0.05}, {"J", 0.05}, {"K", 0.03}, {"L", 0.04}, {"M", 0.08}, {"N", 0.04}};
}

SynthNetwork generate(const SynthParams& params) {
  if (params.override_dir) {
    SynthNetwork synth{load_network_dir(*params.override_dir), EssentialityMatrix::bundled_default()};
    const auto ess_path = *params.override_dir / kEssentialityFile;
    if (std::filesystem::exists(ess_path)) synth.essentiality = EssentialityMatrix::load(ess_path);
    if (synth.network.num_firms() != params.n_firms) {
      throw Error(ErrorCode::kInfeasibleParams, "override network has " + std::to_string(synth.network.num_firms()) +
                                                    " firms, expected " + std::to_string(params.n_firms));
    }
    return synth;
  }
  check_params(params);
  const std::size_t n = params.n_firms;

  auto degree_rng = stream(params.seed, Stage::kDegrees);
  const auto out_fit = pareto_fitness(degree_rng, n, params.degree_exponent);
  const auto in_fit = pareto_fitness(degree_rng, n, params.degree_exponent);

  auto wiring_rng = stream(params.seed, Stage::kWiring);
  const auto pairs = n > 1 ? wire(wiring_rng, out_fit, in_fit, params.n_edges)
                           : std::vector<std::pair<FirmIndex, FirmIndex>>{};

  auto weight_rng = stream(params.seed, Stage::kWeights);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> weights(pairs.size());
  for (auto& w : weights) w = std::round(1e6 * std::exp(params.weight_sigma * normal(weight_rng)) * 100.0) / 100.0;

  auto sector_rng = stream(params.seed, Stage::kSectors);
  std::vector<double> sector_p;
  for (const auto& [code, w] : params.sector_weights) sector_p.push_back(w);
  std::discrete_distribution<std::size_t> pick_sector(sector_p.begin(), sector_p.end());
  std::vector<Firm> firms(n);
  const int width = static_cast<int>(std::to_string(n).size());
  for (std::size_t i = 0; i < n; ++i) {
    auto& f = firms[i];
    auto digits = std::to_string(i + 1);
    f.id = "F" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
    const auto& letter = params.sector_weights[pick_sector(sector_rng)].first;
    f.sector = letter;
    if (auto it = nace_divisions().find(letter); it != nace_divisions().end()) {
      std::uniform_int_distribution<int> division(it->second.first, it->second.second);
      const int d = division(sector_rng);
      f.sector += (d < 10 ? "0" : "") + std::to_string(d);
    }
  }

  auto employment_rng = stream(params.seed, Stage::kEmployment);
  std::lognormal_distribution<double> employees(params.employment.mu, params.employment.sigma);
  for (auto& f : firms) f.employees = std::max(1.0, std::round(employees(employment_rng)));

  // ETS membership: weighted sampling without replacement (exponential keys),
  // favouring energy-intensive sections and larger firms.
  std::vector<double> size(n, 0.0);
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    size[pairs[e].first] += weights[e];
    size[pairs[e].second] += weights[e];
  }
  auto ets_rng = stream(params.seed, Stage::kEts);
  std::vector<std::pair<double, std::size_t>> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const char letter = firms[i].sector.empty() ? ' ' : firms[i].sector[0];
    const double sector_bias = (letter == 'B' || letter == 'C' || letter == 'D') ? 1.0 : 0.05;
    const double w = sector_bias * std::sqrt(1.0 + size[i] / 1e6);
    keys[i] = {std::log(uniform_open(ets_rng)) / w, i};
  }
  std::sort(keys.begin(), keys.end(), std::greater<>());
  std::lognormal_distribution<double> emission(params.emission.mu, params.emission.sigma);
  std::vector<std::size_t> ets(params.n_ets);
  for (std::size_t k = 0; k < params.n_ets; ++k) ets[k] = keys[k].second;
  std::sort(ets.begin(), ets.end());
  for (auto i : ets) {
    firms[i].ets_member = true;
    firms[i].co2 = std::round(emission(ets_rng));
  }

  std::vector<SupplyEdge> edges;
  edges.reserve(pairs.size());
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    edges.push_back({firms[pairs[e].first].id, firms[pairs[e].second].id, weights[e]});
  }
  return {ProductionNetwork::build(std::move(firms), std::move(edges)), EssentialityMatrix::bundled_default()};
}

void write_synth(const SynthNetwork& synth, const std::filesystem::path& dir) {
  save_network(synth.network, dir);
  csv::write_atomic(dir / kEssentialityFile, synth.essentiality.to_csv());
}

double estimate_tail_exponent(std::span<const double> values, double tail_fraction) {
  std::vector<double> v;
  for (double x : values) {
    if (x > 0.0 && std::isfinite(x)) v.push_back(x);
  }
  std::sort(v.begin(), v.end(), std::greater<>());
  const auto k = std::max<std::size_t>(3, static_cast<std::size_t>(tail_fraction * static_cast<double>(v.size())));
  if (v.size() < k) throw Error(ErrorCode::kInsufficientPoints, "too few positive values for a tail estimate");
  double mx = 0, my = 0;
  for (std::size_t r = 0; r < k; ++r) {
    mx += std::log(v[r]);
    my += std::log(static_cast<double>(r + 1));
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0, sxy = 0;
  for (std::size_t r = 0; r < k; ++r) {
    const double dx = std::log(v[r]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(static_cast<double>(r + 1)) - my);
  }
  return -sxy / sxx;
}

double top_share(std::span<const double> values, double fraction) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (total <= 0.0) return 0.0;
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(v.size()))));
  return std::accumulate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(std::min(k, v.size())), 0.0) / total;
}

}  // namespace esrinet
