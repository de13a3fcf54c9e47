#include "bmrf/greedy.hpp"

#include <cassert>
#include <queue>
#include <tuple>

namespace bmrf {

namespace {

// best label of node i given the currently labeled neighbors
std::pair<cost, index> best_extension(const bottleneck_instance& inst,
                                      const std::vector<index>& assigned,
                                      const std::vector<char>& labeled, index i) {
  cost best = infinity;
  index arg = 0;
  for (index x = 0; x < inst.label_counts[i]; ++x) {
    cost c = inst.theta_unary[i][x];
    for (auto [j, e] : inst.g.neighbors(i)) {
      if (!labeled[j]) continue;
      const auto& ed = inst.g.edge_at(e);
      c += ed.i == i ? inst.theta_pair[e][inst.pair_config(e, x, assigned[j])]
                     : inst.theta_pair[e][inst.pair_config(e, assigned[j], x)];
    }
    if (c < best) {
      best = c;
      arg = x;
    }
  }
  return {best, arg};
}

}  // namespace

labeling greedy_track(const bottleneck_instance& inst,
                      const std::vector<std::optional<index>>& seeds) {
  inst.validate();
  if (seeds.size() != inst.node_count())
    throw std::invalid_argument("greedy_track: seed vector size mismatch");

  std::vector<index> assigned(inst.node_count(), 0);
  std::vector<char> labeled(inst.node_count(), 0);
  index labeled_count = 0;
  for (index i = 0; i < inst.node_count(); ++i)
    if (seeds[i]) {
      if (*seeds[i] >= inst.label_counts[i])
        throw std::invalid_argument("greedy_track: seed label out of range");
      assigned[i] = *seeds[i];
      labeled[i] = 1;
      ++labeled_count;
    }
  if (labeled_count == 0) throw std::invalid_argument("greedy_track: no seeded node");

  // (incremental cost, node); stale entries are skipped and re-pushed
  using entry = std::pair<cost, index>;
  std::priority_queue<entry, std::vector<entry>, std::greater<entry>> frontier;
  auto push_frontier = [&](index i) {
    if (!labeled[i]) frontier.push({best_extension(inst, assigned, labeled, i).first, i});
  };
  for (index i = 0; i < inst.node_count(); ++i)
    if (labeled[i])
      for (auto [j, e] : inst.g.neighbors(i)) push_frontier(j);

  while (labeled_count < inst.node_count() && !frontier.empty()) {
    const auto [queued_cost, i] = frontier.top();
    frontier.pop();
    if (labeled[i]) continue;
    const auto [current_cost, label] = best_extension(inst, assigned, labeled, i);
    if (current_cost > queued_cost) {  // a neighbor got labeled since queuing
      frontier.push({current_cost, i});
      continue;
    }
    if (current_cost == infinity)
      throw infeasible_error("greedy_track: every extension of node " + std::to_string(i) +
                             " is forbidden");
    assigned[i] = label;
    labeled[i] = 1;
    ++labeled_count;
    for (auto [j, e] : inst.g.neighbors(i)) push_frontier(j);
  }

  if (labeled_count < inst.node_count())
    throw infeasible_error("greedy_track: nodes unreachable from the seeds");
  return labeling(assigned.begin(), assigned.end());
}

}  // namespace bmrf
