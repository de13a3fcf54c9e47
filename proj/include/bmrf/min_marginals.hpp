#ifndef BMRF_MIN_MARGINALS_HPP
#define BMRF_MIN_MARGINALS_HPP

#include <vector>

#include "bmrf/chain_bottleneck.hpp"
#include "bmrf/dual_decomposition.hpp"
#include "bmrf/instance.hpp"
#include "bmrf/profile.hpp"

namespace bmrf {

// m[i][y]: optimum of the coupled bottleneck subproblem restricted to chain
// node i taking label y; min over y is the same for every i
struct min_marginal_table {
  std::vector<std::vector<cost>> m;
  bool empty() const { return m.empty(); }
};

// Simultaneous forward/backward incremental shortest paths over the chain's
// DAG: after each arc insertion only nodes with decreased distance combine
// their through-path cost with the other chains' profiles and zeta. The
// other_profiles are the coupled chains' full profiles, excluding this one.
min_marginal_table chain_min_marginals(const chain_solver& chain,
                                       const std::vector<bottleneck_profile>& other_profiles,
                                       const bottleneck_cost& zeta);

// Shifts damped, per-node-normalized min-marginal differences out of eta into
// the lambdas of the covering trees. The shift of each entry is scaled by
// w / (chain length * number of tables) so the coupled subproblem optimum is
// preserved exactly and the dual objective cannot decrease. Tables must be
// aligned with the solver's chains; empty tables are skipped. w in (0, 1].
void propagate_to_mrf(const dual_solver& solver, dual_state& s,
                      const std::vector<min_marginal_table>& tables, double w);

// backtracking feasibility search; last-resort primal when rounding dead-ends
labeling find_feasible_labeling(const bottleneck_instance& inst);

}  // namespace bmrf

#endif
