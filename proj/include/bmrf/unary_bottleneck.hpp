#ifndef BMRF_UNARY_BOTTLENECK_HPP
#define BMRF_UNARY_BOTTLENECK_HPP

#include <cstdint>
#include <vector>

#include "bmrf/instance.hpp"
#include "bmrf/profile.hpp"

namespace bmrf {

// Bottleneck labeling on an edge-free model. Labels of all nodes are merged
// and sorted by phi once; each solve is a linear sweep that tracks the best
// theta per node, emitting a profile entry once every node has a feasible
// (finite theta) label. The sort is reused across solves with varying theta.
class unary_bottleneck_solver {
public:
  explicit unary_bottleneck_solver(std::vector<std::vector<cost>> phi_unary);

  bottleneck_profile solve(const std::vector<std::vector<cost>>& theta_unary) const;

  // per node the cheapest label with phi <= b_star, ties toward the smaller label
  labeling extract_labeling(const std::vector<std::vector<cost>>& theta_unary, cost b_star) const;

  index node_count() const { return phi_.size(); }
  std::uint64_t sort_count() const { return sort_count_; }
  std::uint64_t sweep_count() const { return sweep_count_; }

private:
  struct item {
    index node;
    index label;
    cost phi;
  };

  std::vector<std::vector<cost>> phi_;
  std::vector<item> sorted_items_;
  std::uint64_t sort_count_ = 0;
  mutable std::uint64_t sweep_count_ = 0;
};

// requires an edge-free instance; throws infeasible_error if some node has
// no finite-theta label
bottleneck_profile solve_unary_bottleneck(const bottleneck_instance& inst);

}  // namespace bmrf

#endif
