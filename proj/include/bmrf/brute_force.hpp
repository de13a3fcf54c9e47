#ifndef BMRF_BRUTE_FORCE_HPP
#define BMRF_BRUTE_FORCE_HPP

#include <cstdint>

#include "bmrf/instance.hpp"

namespace bmrf {

struct brute_force_result {
  bool feasible;
  cost energy;    // +infinity if infeasible
  labeling x;     // lexicographically smallest optimum
  cost b;         // bottleneck value of x
};

// exhaustive minimum of theta(x) + min_{b in B, b >= max phi(x)} zeta(b);
// throws std::invalid_argument when the label space exceeds the cap
brute_force_result brute_force(const bottleneck_instance& inst,
                               std::uint64_t cap = 1000000);

}  // namespace bmrf

#endif
