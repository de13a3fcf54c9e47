#ifndef BMRF_GREEDY_HPP
#define BMRF_GREEDY_HPP

#include <optional>
#include <vector>

#include "bmrf/instance.hpp"

namespace bmrf {

// Region growing from seeded nodes: repeatedly assigns the frontier node whose
// best label has the smallest incremental cost (unary plus pairwise to already
// labeled neighbors); a node is never revisited. Requires at least one seed;
// throws infeasible_error if some node stays unreachable or every extension
// of a node is forbidden.
labeling greedy_track(const bottleneck_instance& inst,
                      const std::vector<std::optional<index>>& seeds);

}  // namespace bmrf

#endif
