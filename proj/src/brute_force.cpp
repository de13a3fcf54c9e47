#include "bmrf/brute_force.hpp"

#include <algorithm>
#include <cassert>

namespace bmrf {

brute_force_result brute_force(const bottleneck_instance& inst, std::uint64_t cap) {
  inst.validate();
  std::uint64_t combinations = 1;
  for (index k : inst.label_counts) {
    if (combinations > cap / k) throw std::invalid_argument("brute_force: label space exceeds cap");
    combinations *= k;
  }

  // zeta minimized over the upward closure of each bottleneck value
  const std::vector<cost> values = inst.bottleneck_values();
  std::vector<cost> zeta_suffix_min(values.size());
  for (index k = values.size(); k-- > 0;)
    zeta_suffix_min[k] = std::min(inst.zeta(values[k]),
                                  k + 1 < values.size() ? zeta_suffix_min[k + 1] : infinity);

  brute_force_result best{false, infinity, {}, 0};
  labeling x(inst.node_count(), 0);
  while (true) {
    const cost linear = linear_energy(inst, x);
    if (linear < infinity) {
      const cost b = bottleneck_of(inst, x);
      const auto it = std::lower_bound(values.begin(), values.end(), b);
      assert(it != values.end() && *it == b);
      const cost energy = linear + zeta_suffix_min[it - values.begin()];
      if (energy < best.energy) best = {true, energy, x, b};
    }
    // lexicographic odometer; first optimum found is the smallest one
    bool advanced = false;
    for (index i = inst.node_count(); i-- > 0;) {
      if (++x[i] < inst.label_counts[i]) {
        advanced = true;
        break;
      }
      x[i] = 0;
    }
    if (!advanced) break;
  }
  return best;
}

}  // namespace bmrf
