#ifndef BMRF_SOLVER_HPP
#define BMRF_SOLVER_HPP

#include "bmrf/dual_decomposition.hpp"
#include "bmrf/instance.hpp"

namespace bmrf {

struct decomposition_result {
  dual_report report;
  labeling primal;
  cost primal_energy = infinity;
  cost primal_bottleneck = 0;
};

// Full pipeline for general graphs: build a cover (grid rows/columns when the
// graph is a grid, generic otherwise), run supergradient ascent, propagate
// chain min-marginals into the tree duals once, then round. Rounding retries
// BFS orders from every start node before falling back to a plain feasible
// labeling.
decomposition_result solve_decomposition(const bottleneck_instance& inst, const dual_config& cfg);

}  // namespace bmrf

#endif
