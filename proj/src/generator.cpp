#include "bmrf/generator.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bmrf {

bottleneck_instance make_counterexample(cost a, cost eps) {
  if (!std::isfinite(a) || !std::isfinite(eps) || eps <= 0)
    throw std::invalid_argument("counterexample: requires finite a and eps > 0");
  bottleneck_instance inst;
  inst.g = graph(3, {{0, 1}, {1, 2}});
  inst.label_counts = {2, 2, 2};
  inst.theta_unary.assign(3, {0.0, 0.0});
  inst.phi_unary.assign(3, {0.0, 0.0});
  // row-major (x_i, x_j): diagonal configurations allowed, others forbidden
  inst.theta_pair.assign(2, {0.0, infinity, infinity, 0.0});
  inst.phi_pair = {{a, 0.0, 0.0, a + eps}, {a + eps, 0.0, 0.0, a}};
  inst.zeta = bottleneck_cost::linear(1.0);
  inst.validate();
  return inst;
}

namespace {

bottleneck_instance make_random(graph g, index labels, std::uint64_t seed) {
  if (labels == 0) throw std::invalid_argument("generator: label count must be positive");
  splitmix64 rng(seed);
  bottleneck_instance inst;
  inst.g = std::move(g);
  const index n = inst.g.node_count();
  inst.label_counts.assign(n, labels);
  inst.theta_unary.resize(n);
  inst.phi_unary.resize(n);
  for (index i = 0; i < n; ++i) {
    inst.theta_unary[i].resize(labels);
    inst.phi_unary[i].resize(labels);
    for (index x = 0; x < labels; ++x) {
      inst.theta_unary[i][x] = rng.uniform();
      inst.phi_unary[i][x] = rng.uniform();
    }
  }
  inst.theta_pair.resize(inst.g.edge_count());
  inst.phi_pair.resize(inst.g.edge_count());
  for (index e = 0; e < inst.g.edge_count(); ++e) {
    inst.theta_pair[e].resize(labels * labels);
    inst.phi_pair[e].resize(labels * labels);
    for (index c = 0; c < labels * labels; ++c) {
      const bool forbidden = rng.uniform() < 0.05;
      inst.theta_pair[e][c] = forbidden ? infinity : rng.uniform();
      inst.phi_pair[e][c] = rng.uniform();
    }
  }
  const cost weights[3] = {0.0, 0.5, 1.0};
  inst.zeta = bottleneck_cost::linear(weights[rng.below(3)]);
  inst.validate();
  return inst;
}

}  // namespace

bottleneck_instance make_random_chain(index n, index labels, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_chain: n must be positive");
  std::vector<edge> edges;
  for (index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return make_random(graph(n, edges), labels, seed);
}

bottleneck_instance make_random_grid(index rows, index cols, index labels, std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("random_grid: empty grid");
  std::vector<edge> edges;
  for (index r = 0; r < rows; ++r)
    for (index c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({r * cols + c, r * cols + c + 1});
      if (r + 1 < rows) edges.push_back({r * cols + c, (r + 1) * cols + c});
    }
  return make_random(graph(rows * cols, edges), labels, seed);
}

bottleneck_instance make_random_tree(index n, index labels, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_tree: n must be positive");
  splitmix64 shape_rng(seed ^ 0x7475726Bull);  // tree shape drawn separately
  std::vector<edge> edges;
  for (index i = 1; i < n; ++i) edges.push_back({shape_rng.below(i), i});
  return make_random(graph(n, edges), labels, seed);
}

bottleneck_instance generate(const std::string& kind, std::uint64_t seed) {
  double a = 0, b = 0, c = 0;
  if (std::sscanf(kind.c_str(), "counterexample(%lf,%lf)", &a, &b) == 2)
    return make_counterexample(a, b);
  if (std::sscanf(kind.c_str(), "random_chain(%lf,%lf)", &a, &b) == 2)
    return make_random_chain(static_cast<index>(a), static_cast<index>(b), seed);
  if (std::sscanf(kind.c_str(), "random_grid(%lf,%lf,%lf)", &a, &b, &c) == 3)
    return make_random_grid(static_cast<index>(a), static_cast<index>(b), static_cast<index>(c),
                            seed);
  if (std::sscanf(kind.c_str(), "random_tree(%lf,%lf)", &a, &b) == 2)
    return make_random_tree(static_cast<index>(a), static_cast<index>(b), seed);
  throw std::invalid_argument("generate: unknown kind '" + kind + "'");
}

}  // namespace bmrf
