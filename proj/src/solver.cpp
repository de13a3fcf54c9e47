#include "bmrf/solver.hpp"

#include <algorithm>

#include "bmrf/cover.hpp"
#include "bmrf/min_marginals.hpp"
#include "bmrf/primal_rounding.hpp"

namespace bmrf {

namespace {

std::vector<index> bfs_order_from(const graph& g, index start) {
  std::vector<index> order = {start};
  std::vector<char> visited(g.node_count(), 0);
  visited[start] = 1;
  for (index head = 0; head < order.size(); ++head)
    for (auto [w, e] : g.neighbors(order[head]))
      if (!visited[w]) {
        visited[w] = 1;
        order.push_back(w);
      }
  for (index i = 0; i < g.node_count(); ++i)
    if (!visited[i]) order.push_back(i);
  return order;
}

}  // namespace

decomposition_result solve_decomposition(const bottleneck_instance& inst, const dual_config& cfg) {
  dual_solver solver(inst, build_cover(inst.g), cfg.threads);
  decomposition_result result;
  result.report = solver.ascend(cfg);
  if (!result.report.best_primal.empty()) {
    result.primal = result.report.best_primal;
    result.primal_energy = result.report.best_primal_energy;
  }

  // one propagation pass on the best duals, then the final rounding
  dual_state state = result.report.best_duals;
  solver.set_chain_costs(state);
  auto& chains = solver.chain_solvers();
  std::vector<bottleneck_profile> profiles;
  profiles.reserve(chains.size());
  for (auto& c : chains) profiles.push_back(c.solve());
  std::vector<min_marginal_table> tables(chains.size());
  for (index u = 0; u < chains.size(); ++u) {
    std::vector<bottleneck_profile> others;
    for (index l = 0; l < chains.size(); ++l)
      if (l != u) others.push_back(profiles[l]);
    tables[u] = chain_min_marginals(chains[u], others, inst.zeta);
  }
  propagate_to_mrf(solver, state, tables, 0.5);

  std::vector<std::vector<cost>> unary, pair;
  solver.aggregate_tree_potentials(state, unary, pair);
  auto consider = [&](const labeling& x) {
    const cost energy = evaluate_energy_optimal_b(inst, x);
    if (energy < result.primal_energy) {
      result.primal_energy = energy;
      result.primal = x;
    }
  };
  try {
    consider(primal_round(inst.g, inst.label_counts, unary, pair,
                          make_node_order(inst.g, cfg.order)));
  } catch (const infeasible_error&) {
    // sequential rounding can dead-end on forbidden configurations; retry from
    // other starts before settling for any feasible labeling
    bool rounded = false;
    for (index start = 0; start < inst.node_count() && !rounded; ++start) {
      try {
        consider(primal_round(inst.g, inst.label_counts, unary, pair,
                              bfs_order_from(inst.g, start)));
        rounded = true;
      } catch (const infeasible_error&) {
      }
    }
    if (!rounded && result.primal.empty()) consider(find_feasible_labeling(inst));
  }

  if (result.primal.empty()) throw infeasible_error("decomposition: no primal labeling found");
  result.primal_bottleneck = bottleneck_of(inst, result.primal);
  return result;
}

}  // namespace bmrf
