#include "random_networks.hpp"

namespace esrinet::testing {

RandomCase random_case(std::uint64_t seed, const RandomCaseOptions& options) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(options.min_firms, options.max_firms);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> weight(1, 100);
  std::uniform_int_distribution<std::size_t> sector_pick(0, options.sectors.size() - 1);

  const std::size_t n = size(rng);
  const std::size_t k = options.sectors.size();

  // Sector-by-sector essentiality, every pair listed explicitly.
  std::vector<std::vector<bool>> table(k, std::vector<bool>(k));
  const double p_essential = unit(rng);
  RandomCase c;
  c.seed = seed;
  c.essentiality = EssentialityMatrix(std::nullopt);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      table[a][b] = unit(rng) < p_essential;
      c.essentiality.set(options.sectors[a], options.sectors[b], table[a][b]);
    }
  }

  std::vector<std::size_t> sector_of(n);
  std::vector<Firm> firms(n);
  const double p_missing = unit(rng) * 0.4;
  for (std::size_t i = 0; i < n; ++i) {
    sector_of[i] = sector_pick(rng);
    firms[i].id = "f" + std::to_string(i);
    firms[i].sector = options.sectors[sector_of[i]];
    if (unit(rng) >= p_missing) firms[i].employees = static_cast<double>(weight(rng));
    if (unit(rng) < 0.5) {
      firms[i].co2 = static_cast<double>(weight(rng));
      firms[i].ets_member = unit(rng) < 0.7;
    }
  }
  if (!firms[0].employees) firms[0].employees = 1.0;
  if (!firms[0].co2) firms[0].co2 = 1.0;

  c.dense.n = n;
  c.dense.gamma = options.gamma;
  c.dense.x0_max = options.x0_max;
  c.dense.cascade = options.cascade;
  c.dense.w.assign(n, std::vector<double>(n, 0.0));
  c.dense.essential.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) c.dense.sector.push_back(firms[i].sector);

  std::vector<SupplyEdge> edges;
  const double density = 0.1 + 0.5 * unit(rng);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || unit(rng) >= density) continue;
      const double w = weight(rng);
      edges.push_back({firms[i].id, firms[j].id, w});
      c.dense.w[i][j] = w;
      c.dense.essential[i][j] = table[sector_of[i]][sector_of[j]];
    }
  }
  for (const auto& f : firms) c.employees.push_back(f.employees);
  c.net = ProductionNetwork::build(std::move(firms), std::move(edges));
  return c;
}

std::vector<FirmIndex> random_subset(std::mt19937_64& rng, std::size_t n, double p) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<FirmIndex> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (unit(rng) < p) out.push_back(static_cast<FirmIndex>(i));
  }
  return out;
}

std::vector<bool> removed_mask(std::size_t n, const ShockScenario& scenario) {
  std::vector<bool> mask(n, false);
  for (auto i : scenario.removed) mask[i] = true;
  return mask;
}

ProductionNetwork scale_weights(const ProductionNetwork& net, double factor) {
  auto edges = net.edges();
  for (auto& e : edges) e.weight *= factor;
  return ProductionNetwork::build(net.firms(), std::move(edges));
}

}  // namespace esrinet::testing
