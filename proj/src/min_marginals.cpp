#include "bmrf/min_marginals.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>

namespace bmrf {

namespace {

// sum of the other chains' profiles as one step function; empty means no other
// chains, i.e. constantly zero
std::vector<profile_entry> combine_profiles(const std::vector<bottleneck_profile>& profiles) {
  std::vector<cost> keys;
  for (const auto& p : profiles)
    for (const auto& e : p.entries()) keys.push_back(e.b);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<profile_entry> combined;
  for (cost b : keys) {
    cost sum = 0.0;
    for (const auto& p : profiles) sum += p.value_at(b);
    if (sum < infinity) combined.push_back({b, sum});
  }
  return combined;
}

cost combined_value_at(const std::vector<profile_entry>& combined, cost b) {
  if (combined.empty()) return 0.0;  // no other chains
  auto it = std::upper_bound(combined.begin(), combined.end(), b,
                             [](cost v, const profile_entry& e) { return v < e.b; });
  if (it == combined.begin()) return infinity;
  return std::prev(it)->c;
}

// min over feasible b >= b_cur of zeta(b) + others(b) + through
cost coupled_candidate(const std::vector<profile_entry>& combined, const bottleneck_cost& zeta,
                       cost b_cur, cost through) {
  cost best = infinity;
  const cost at_cur = combined_value_at(combined, b_cur);
  if (at_cur < infinity) best = zeta(b_cur) + at_cur + through;
  for (const auto& e : combined)
    if (e.b > b_cur) best = std::min(best, zeta(e.b) + e.c + through);
  return best;
}

}  // namespace

min_marginal_table chain_min_marginals(const chain_solver& chain,
                                       const std::vector<bottleneck_profile>& other_profiles,
                                       const bottleneck_cost& zeta) {
  const layered_dag& dag = chain.dag();
  const auto combined = combine_profiles(other_profiles);

  min_marginal_table table;
  table.m.resize(chain.node_count());
  for (index r = 0; r < chain.node_count(); ++r)
    table.m[r].assign(chain.model().label_counts[r], infinity);

  dsp_engine forward(dag, sweep_direction::forward);
  dsp_engine backward(dag, sweep_direction::backward);
  std::vector<index> touched;
  for (index arc_id : dag.arcs_by_omega()) {
    touched = forward.insert(arc_id);  // copy; backward.insert invalidates the view
    for (index w : backward.insert(arc_id))
      if (std::find(touched.begin(), touched.end(), w) == touched.end()) touched.push_back(w);

    const cost b_cur = dag.arc(arc_id).omega;
    for (index w : touched) {
      if (w == dag.source() || w == dag.sink()) continue;
      const cost through = forward.distance(w) + backward.distance(w);
      if (through == infinity) continue;
      assert(b_cur > -infinity);  // sentinel arcs cannot complete a path
      const auto [pos, label] = dag.position_label(w);
      const cost candidate = coupled_candidate(combined, zeta, b_cur, through);
      table.m[pos][label] = std::min(table.m[pos][label], candidate);
    }
  }
  return table;
}

void propagate_to_mrf(const dual_solver& solver, dual_state& s,
                      const std::vector<min_marginal_table>& tables, double w) {
  if (!(w > 0.0 && w <= 1.0))
    throw std::invalid_argument("propagate_to_mrf: damping must be in (0, 1]");
  const cover& cv = solver.decomposition();
  if (tables.size() != cv.chains.size())
    throw std::invalid_argument("propagate_to_mrf: one table per chain expected");

  index selected = 0;
  for (const auto& t : tables) selected += t.empty() ? 0 : 1;
  if (selected == 0) return;

  for (index l = 0; l < tables.size(); ++l) {
    if (tables[l].empty()) continue;
    const auto& chain = cv.chains[l];
    const index n = chain.nodes.size();
    assert(tables[l].m.size() == n);
    // scaling keeps the summed shift below the per-configuration min-marginal
    // gap, so the coupled optimum is untouched and the bound cannot drop
    const double scale = w / (static_cast<double>(n) * static_cast<double>(selected));
    for (index r = 0; r < n; ++r) {
      const auto& row = tables[l].m[r];
      const cost row_min = *std::min_element(row.begin(), row.end());
      if (row_min == infinity)
        throw infeasible_error("propagate_to_mrf: chain infeasible in min-marginal table");
      const index gi = chain.nodes[r];
      const auto& covering_trees = solver.tree_nodes_covering()[gi];
      assert(!covering_trees.empty());
      for (index y = 0; y < row.size(); ++y) {
        if (row[y] == infinity) continue;  // no information for forbidden labels
        const cost shift = scale * (row[y] - row_min);
        if (shift == 0.0) continue;
        s.eta[l].unary[r][y] -= shift;
        const cost per_tree = shift / static_cast<double>(covering_trees.size());
        for (auto [t, v] : covering_trees) s.lambda[t].unary[v][y] += per_tree;
      }
    }
  }
}

labeling find_feasible_labeling(const bottleneck_instance& inst) {
  labeling x(inst.node_count(), 0);
  std::vector<char> done(inst.node_count(), 0);
  const std::function<bool(index)> assign = [&](index i) -> bool {
    if (i == inst.node_count()) return true;
    for (index xi = 0; xi < inst.label_counts[i]; ++xi) {
      if (inst.theta_unary[i][xi] == infinity) continue;
      bool ok = true;
      for (auto [j, e] : inst.g.neighbors(i)) {
        if (!done[j]) continue;
        const auto& ed = inst.g.edge_at(e);
        const cost c = ed.i == i ? inst.theta_pair[e][inst.pair_config(e, xi, x[j])]
                                 : inst.theta_pair[e][inst.pair_config(e, x[j], xi)];
        if (c == infinity) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      x[i] = xi;
      done[i] = 1;
      if (assign(i + 1)) return true;
      done[i] = 0;
    }
    return false;
  };
  if (!assign(0)) throw infeasible_error("find_feasible_labeling: instance is infeasible");
  return x;
}

}  // namespace bmrf
