#ifndef BMRF_CHAIN_BOTTLENECK_HPP
#define BMRF_CHAIN_BOTTLENECK_HPP

#include <cstdint>
#include <vector>

#include "bmrf/chain_dag.hpp"
#include "bmrf/instance.hpp"
#include "bmrf/profile.hpp"

namespace bmrf {

// Exact bottleneck labeling on a chain. The DAG and its arc order by omega are
// built once; solve() re-runs the insertion sweep, so varying linear costs
// (dual iterations) reuse the sort. Linear costs that were +infinity at
// construction must stay +infinity.
class chain_solver {
public:
  explicit chain_solver(chain_model model);

  void set_linear_costs(const std::vector<std::vector<cost>>& theta_unary,
                        const std::vector<std::vector<cost>>& theta_pair);

  // profile over all bottleneck thresholds; throws infeasible_error when no
  // s-t path exists even with every arc active
  const bottleneck_profile& solve();

  const bottleneck_profile& profile() const { return profile_; }

  // shortest path restricted to arcs with omega <= b_star, decoded to labels;
  // requires b_star at or above the first profile entry
  labeling extract_labeling(cost b_star) const;

  const chain_model& model() const { return model_; }
  const layered_dag& dag() const { return dag_; }
  index node_count() const { return model_.node_count(); }

  std::uint64_t sort_count() const { return sort_count_; }
  std::uint64_t solve_count() const { return solve_count_; }
  std::uint64_t relax_attempts() const { return relax_attempts_; }
  std::uint64_t distance_updates() const { return distance_updates_; }

private:
  chain_model model_;
  layered_dag dag_;
  bottleneck_profile profile_;
  std::uint64_t sort_count_ = 0;
  std::uint64_t solve_count_ = 0;
  std::uint64_t relax_attempts_ = 0;
  std::uint64_t distance_updates_ = 0;
};

// single-shot convenience on a path-graph instance: the full profile of
// (b, c) pairs over the chain
bottleneck_profile solve_chain_bottleneck(const bottleneck_instance& inst);

// optimal labeling of a path-graph instance at bottleneck threshold b_star
labeling extract_chain_labeling(const bottleneck_instance& inst, cost b_star);

}  // namespace bmrf

#endif
