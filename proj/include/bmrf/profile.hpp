#ifndef BMRF_PROFILE_HPP
#define BMRF_PROFILE_HPP

#include <vector>

#include "bmrf/instance.hpp"

namespace bmrf {

struct profile_entry {
  cost b;  // bottleneck threshold
  cost c;  // minimal linear cost among labelings with max phi <= b
};

// lower envelope (b, c): b strictly increasing, c non-increasing
class bottleneck_profile {
public:
  // append in sweep order (b non-decreasing); equal b collapses to the minimum c
  void record(cost b, cost c);

  const std::vector<profile_entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  index size() const { return entries_.size(); }

  // value of the entry with the largest b <= query; +infinity below the first entry
  cost value_at(cost b) const;

private:
  std::vector<profile_entry> entries_;
};

struct profile_optimum {
  cost b;
  cost c;
  cost objective;  // c + zeta(b)
};

// argmin over entries of c + zeta(b), ties broken toward smaller b;
// throws infeasible_error on an empty profile
profile_optimum select_optimal_bottleneck(const bottleneck_profile& profile,
                                          const bottleneck_cost& zeta);

}  // namespace bmrf

#endif
