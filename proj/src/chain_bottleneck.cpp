#include "bmrf/chain_bottleneck.hpp"

#include <algorithm>
#include <cassert>

namespace bmrf {

chain_solver::chain_solver(chain_model model)
    : model_(std::move(model)), dag_(layered_dag::from_chain(model_)) {
  ++sort_count_;  // arcs_by_omega is sorted once inside from_chain
}

void chain_solver::set_linear_costs(const std::vector<std::vector<cost>>& theta_unary,
                                    const std::vector<std::vector<cost>>& theta_pair) {
  assert(theta_unary.size() == model_.node_count());
  assert(theta_pair.size() + 1 == model_.node_count());
  for (index r = 0; r < model_.node_count(); ++r) {
    assert(theta_unary[r].size() == model_.label_counts[r]);
    for (index x = 0; x < theta_unary[r].size(); ++x) {
      const index a = dag_.unary_arc_ids()[r][x];
      if (a == layered_dag::no_arc)
        assert(theta_unary[r][x] == infinity);
      else
        dag_.arc(a).sigma = theta_unary[r][x];
    }
    model_.theta_unary[r] = theta_unary[r];
  }
  for (index r = 0; r + 1 < model_.node_count(); ++r) {
    assert(theta_pair[r].size() == model_.theta_pair[r].size());
    for (index cfg = 0; cfg < theta_pair[r].size(); ++cfg) {
      const index a = dag_.pair_arc_ids()[r][cfg];
      if (a == layered_dag::no_arc)
        assert(theta_pair[r][cfg] == infinity);
      else
        dag_.arc(a).sigma = theta_pair[r][cfg];
    }
    model_.theta_pair[r] = theta_pair[r];
  }
}

const bottleneck_profile& chain_solver::solve() {
  ++solve_count_;
  dsp_engine engine(dag_, sweep_direction::forward);
  profile_ = bottleneck_profile();
  const index t = dag_.sink();
  for (index arc_id : dag_.arcs_by_omega()) {
    engine.insert(arc_id);
    if (engine.distance(t) < infinity) profile_.record(dag_.arc(arc_id).omega, engine.distance(t));
  }
  relax_attempts_ += engine.relax_attempts();
  distance_updates_ += engine.distance_updates();
  if (profile_.empty())
    throw infeasible_error("chain bottleneck labeling: no s-t path with all arcs active");
  return profile_;
}

labeling chain_solver::extract_labeling(cost b_star) const {
  // from-scratch topological pass with parent pointers over omega <= b_star
  std::vector<cost> dist(dag_.node_count(), infinity);
  std::vector<index> parent_arc(dag_.node_count(), layered_dag::no_arc);
  dist[dag_.source()] = 0.0;
  for (index w = 0; w < dag_.node_count(); ++w) {
    if (dist[w] == infinity) continue;
    for (index arc_id : dag_.out_arcs(w)) {
      const dag_arc& a = dag_.arc(arc_id);
      if (a.omega > b_star) continue;
      if (dist[w] + a.sigma < dist[a.head]) {
        dist[a.head] = dist[w] + a.sigma;
        parent_arc[a.head] = arc_id;
      }
    }
  }
  if (dist[dag_.sink()] == infinity)
    throw infeasible_error("chain bottleneck labeling: infeasible at requested b*");

  labeling x(model_.node_count());
  for (index w = dag_.sink(); w != dag_.source();) {
    const dag_arc& a = dag_.arc(parent_arc[w]);
    if (a.kind == dag_arc::origin::unary) x[a.position] = a.config;
    w = a.tail;
  }
  return x;
}

bottleneck_profile solve_chain_bottleneck(const bottleneck_instance& inst) {
  chain_solver solver(make_chain_model(inst));
  return solver.solve();
}

labeling extract_chain_labeling(const bottleneck_instance& inst, cost b_star) {
  const chain_solver solver(make_chain_model(inst));
  return solver.extract_labeling(b_star);
}

}  // namespace bmrf
