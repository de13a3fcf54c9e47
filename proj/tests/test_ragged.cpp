#include <algorithm>

#include "bmrf/brute_force.hpp"
#include "bmrf/chain_bottleneck.hpp"
#include "bmrf/dual_decomposition.hpp"
#include "bmrf/generator.hpp"
#include "bmrf/greedy.hpp"
#include "bmrf/min_marginals.hpp"
#include "bmrf/solver.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bmrf;
using bmrf_test::for_each_labeling;

namespace {

// instance with per-node label counts drawn from [1, max_labels]
bottleneck_instance ragged_instance(graph g, index max_labels, std::uint64_t seed) {
  splitmix64 rng(seed);
  bottleneck_instance inst;
  inst.g = std::move(g);
  const index n = inst.g.node_count();
  inst.label_counts.resize(n);
  for (index i = 0; i < n; ++i) inst.label_counts[i] = 1 + rng.below(max_labels);
  inst.theta_unary.resize(n);
  inst.phi_unary.resize(n);
  for (index i = 0; i < n; ++i) {
    inst.theta_unary[i].resize(inst.label_counts[i]);
    inst.phi_unary[i].resize(inst.label_counts[i]);
    for (index x = 0; x < inst.label_counts[i]; ++x) {
      inst.theta_unary[i][x] = rng.uniform() * 2.0 - 1.0;
      inst.phi_unary[i][x] = rng.uniform();
    }
  }
  inst.theta_pair.resize(inst.g.edge_count());
  inst.phi_pair.resize(inst.g.edge_count());
  for (index e = 0; e < inst.g.edge_count(); ++e) {
    const auto& ed = inst.g.edge_at(e);
    const index size = inst.label_counts[ed.i] * inst.label_counts[ed.j];
    inst.theta_pair[e].resize(size);
    inst.phi_pair[e].resize(size);
    for (index c = 0; c < size; ++c) {
      inst.theta_pair[e][c] = rng.uniform() * 2.0 - 1.0;
      inst.phi_pair[e][c] = rng.uniform();
    }
  }
  const cost weights[3] = {0.0, 0.5, 1.0};
  inst.zeta = bottleneck_cost::linear(weights[rng.below(3)]);
  inst.validate();
  return inst;
}

graph path_graph(index n) {
  std::vector<edge> edges;
  for (index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return graph(n, edges);
}

graph tree_graph(index n, std::uint64_t seed) {
  splitmix64 rng(seed);
  std::vector<edge> edges;
  for (index i = 1; i < n; ++i) edges.push_back({rng.below(i), i});
  return graph(n, edges);
}

}  // namespace

TEST_CASE("chain solver is exact with ragged label counts") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto inst = ragged_instance(path_graph(2 + seed % 5), 4, seed * 11 + 5);
    const auto oracle = brute_force(inst);
    REQUIRE(oracle.feasible);
    chain_solver solver(make_chain_model(inst));
    const auto best = select_optimal_bottleneck(solver.solve(), inst.zeta);
    CHECK(best.objective == doctest::Approx(oracle.energy).epsilon(1e-9));
    const auto x = solver.extract_labeling(best.b);
    CHECK(bottleneck_of(inst, x) <= best.b);
  }
}

TEST_CASE("decomposition sandwich holds with ragged labels on trees") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto inst = ragged_instance(tree_graph(6, seed + 1), 3, seed * 13 + 9);
    const auto oracle = brute_force(inst);
    REQUIRE(oracle.feasible);
    dual_config cfg;
    cfg.max_iters = 150;
    const auto result = solve_decomposition(inst, cfg);
    CHECK(result.report.lower_bound <= oracle.energy + 1e-9);
    CHECK(result.primal_energy >= oracle.energy - 1e-9);
    dual_solver solver(inst, build_generic_cover(inst.g));
    CHECK(solver.reparameterization_residual(solver.initial_state()) == 0.0);
  }
}

TEST_CASE("coupled min-marginals stay consistent with ragged labels") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto inst = ragged_instance(tree_graph(5, seed + 40), 3, seed * 17 + 3);
    dual_solver solver(inst, build_generic_cover(inst.g));
    dual_config cfg;
    cfg.max_iters = 20;
    const auto rep = solver.ascend(cfg);
    dual_state state = rep.best_duals;
    const cost before = solver.evaluate(state).bound;
    solver.set_chain_costs(state);
    auto& chains = solver.chain_solvers();
    std::vector<bottleneck_profile> profiles;
    for (auto& c : chains) profiles.push_back(c.solve());
    std::vector<min_marginal_table> tables(chains.size());
    for (index u = 0; u < chains.size(); ++u) {
      std::vector<bottleneck_profile> others;
      for (index l = 0; l < chains.size(); ++l)
        if (l != u) others.push_back(profiles[l]);
      tables[u] = chain_min_marginals(chains[u], others, inst.zeta);
      // the per-node minima agree across nodes of the same chain
      cost reference = infinity;
      for (index i = 0; i < tables[u].m.size(); ++i) {
        const cost row_min = *std::min_element(tables[u].m[i].begin(), tables[u].m[i].end());
        if (i == 0)
          reference = row_min;
        else
          CHECK(row_min == doctest::Approx(reference).epsilon(1e-9));
      }
    }
    propagate_to_mrf(solver, state, tables, 0.5);
    CHECK(solver.reparameterization_residual(state) <= 1e-9);
    CHECK(solver.evaluate(state).bound >= before - 1e-9);
  }
}

TEST_CASE("greedy handles ragged labels") {
  const auto inst = ragged_instance(path_graph(5), 4, 123);
  std::vector<std::optional<index>> seeds(5);
  seeds[2] = index(0);
  const auto x = greedy_track(inst, seeds);
  CHECK(linear_energy(inst, x) < infinity);
}
