#include "bmrf/primal_rounding.hpp"

#include <cassert>
#include <stdexcept>

namespace bmrf {

std::vector<index> make_node_order(const graph& g, node_order_kind kind) {
  std::vector<index> order;
  order.reserve(g.node_count());
  if (kind == node_order_kind::row_major) {
    for (index i = 0; i < g.node_count(); ++i) order.push_back(i);
    return order;
  }
  std::vector<char> visited(g.node_count(), 0);
  for (index start = 0; start < g.node_count(); ++start) {
    if (visited[start]) continue;
    visited[start] = 1;
    order.push_back(start);
    for (index head = order.size() - 1; head < order.size(); ++head)
      for (auto [w, e] : g.neighbors(order[head]))
        if (!visited[w]) {
          visited[w] = 1;
          order.push_back(w);
        }
  }
  return order;
}

labeling primal_round(const graph& g, const std::vector<index>& label_counts,
                      const std::vector<std::vector<cost>>& unary,
                      const std::vector<std::vector<cost>>& pair,
                      const std::vector<index>& order) {
  assert(order.size() == g.node_count());
  labeling x(g.node_count(), 0);
  std::vector<char> done(g.node_count(), 0);
  for (index i : order) {
    cost best = infinity;
    index arg = label_counts[i];
    for (index xi = 0; xi < label_counts[i]; ++xi) {
      cost c = unary[i][xi];
      for (auto [j, e] : g.neighbors(i)) {
        if (!done[j]) continue;
        const auto& ed = g.edge_at(e);
        c += ed.i == i ? pair[e][xi * label_counts[ed.j] + x[j]]
                       : pair[e][x[j] * label_counts[ed.j] + xi];
      }
      if (c < best) {
        best = c;
        arg = xi;
      }
    }
    if (arg == label_counts[i])
      throw infeasible_error("primal_round: node " + std::to_string(i) +
                             " has only forbidden choices");
    x[i] = arg;
    done[i] = 1;
  }
  return x;
}

}  // namespace bmrf
