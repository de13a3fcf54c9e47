#ifndef BMRF_GENERATOR_HPP
#define BMRF_GENERATOR_HPP

#include <cstdint>
#include <string>

#include "bmrf/instance.hpp"

namespace bmrf {

// splitmix64: deterministic across platforms, constants from Steele et al.
class splitmix64 {
public:
  explicit splitmix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
  std::uint64_t state_;
};

// 3-node binary chain with pairwise bottleneck potentials (a, a+eps) on the
// diagonals of edge (0,1) and (a+eps, a) on edge (1,2); off-diagonal theta is
// +infinity, zeta(b) = b; both integer optima cost a+eps while the local
// polytope relaxation achieves a+eps/2
bottleneck_instance make_counterexample(cost a, cost eps);

// random instances: theta, phi uniform in [0,1); 5% of pairwise theta entries
// are +infinity; zeta linear with weight drawn from {0, 0.5, 1}
bottleneck_instance make_random_chain(index n, index labels, std::uint64_t seed);
bottleneck_instance make_random_grid(index rows, index cols, index labels, std::uint64_t seed);
bottleneck_instance make_random_tree(index n, index labels, std::uint64_t seed);

// kind strings: counterexample(a,eps) | random_chain(n,k) | random_grid(n1,n2,k)
// | random_tree(n,k)
bottleneck_instance generate(const std::string& kind, std::uint64_t seed);

}  // namespace bmrf

#endif
