#include "bmrf/profile.hpp"

#include <algorithm>
#include <cassert>

namespace bmrf {

void bottleneck_profile::record(cost b, cost c) {
  assert(c < infinity);
  if (!entries_.empty()) {
    assert(b >= entries_.back().b);
    if (b == entries_.back().b) {
      entries_.back().c = std::min(entries_.back().c, c);
      return;
    }
    // incremental sweeps can drift by an ulp; the envelope is non-increasing
    assert(c <= entries_.back().c + 1e-9 * std::max(1.0, std::abs(entries_.back().c)));
    c = std::min(c, entries_.back().c);
  }
  entries_.push_back({b, c});
}

cost bottleneck_profile::value_at(cost b) const {
  auto it = std::upper_bound(entries_.begin(), entries_.end(), b,
                             [](cost v, const profile_entry& e) { return v < e.b; });
  if (it == entries_.begin()) return infinity;
  return std::prev(it)->c;
}

profile_optimum select_optimal_bottleneck(const bottleneck_profile& profile,
                                          const bottleneck_cost& zeta) {
  if (profile.empty()) throw infeasible_error("select_optimal_bottleneck: empty profile");
  profile_optimum best{0, 0, infinity};
  for (const auto& e : profile.entries()) {
    const cost objective = e.c + zeta(e.b);
    if (objective < best.objective) best = {e.b, e.c, objective};
  }
  assert(best.objective < infinity);
  return best;
}

}  // namespace bmrf
