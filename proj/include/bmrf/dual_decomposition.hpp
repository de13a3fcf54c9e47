#ifndef BMRF_DUAL_DECOMPOSITION_HPP
#define BMRF_DUAL_DECOMPOSITION_HPP

#include <vector>

#include "bmrf/chain_bottleneck.hpp"
#include "bmrf/cover.hpp"
#include "bmrf/instance.hpp"
#include "bmrf/primal_rounding.hpp"
#include "bmrf/profile.hpp"

namespace bmrf {

// potentials of one subproblem; pairwise vectors of tree subproblems use the
// canonical edge orientation, chains the traversal orientation
struct factor_costs {
  std::vector<std::vector<cost>> unary;
  std::vector<std::vector<cost>> pair;
};

// Lagrange multipliers; for every factor the lambdas of covering trees and
// etas of covering chains sum to theta
struct dual_state {
  std::vector<factor_costs> lambda;
  std::vector<factor_costs> eta;
};

// exact min-sum dynamic programming, leaf-to-root with argmin backtrack;
// returns the value and a labeling aligned with tree.nodes
std::pair<cost, labeling> solve_tree_mrf(const cover_tree& tree, const graph& g,
                                         const std::vector<index>& label_counts,
                                         const factor_costs& lambda);

struct coupling_result {
  cost value;   // J = zeta(b*) + sum of chain costs at b*
  cost b_star;
  std::vector<cost> chain_values;
  std::vector<labeling> chain_labelings;  // aligned with each chain's nodes
};

// couples the chains through a unary bottleneck problem on the higher-level
// graph with one node per chain whose labels are the chain's profile entries;
// sigma of every solver must already hold the chain's linear costs
coupling_result solve_bottleneck_coupling(std::vector<chain_solver>& chains,
                                          const bottleneck_cost& zeta, index threads = 1);

struct dual_config {
  index max_iters = 1000;
  double tol = 1e-6;           // relative primal-dual gap
  double alpha = 1.0;          // Polyak step scale
  index alpha_patience = 10;   // halve alpha after this many iterations without progress
  double alpha_min = 1e-12;
  double gamma0 = 1.0;         // fallback step scale, gamma0 / sqrt(k)
  double stall_tol = 1e-9;
  index stall_window = 50;
  index threads = 1;
  node_order_kind order = node_order_kind::row_major;
};

struct iteration_record {
  index iter;
  cost bound;
  cost best_bound;
  double step;
};

struct dual_report {
  cost lower_bound = -infinity;           // best bound encountered
  std::vector<labeling> tree_labelings;   // subproblem argmins at the best iterate
  std::vector<labeling> chain_labelings;
  cost b_star = 0;
  std::vector<iteration_record> trace;
  index iterations = 0;
  dual_state best_duals;                  // iterate attaining lower_bound
  labeling best_primal;                   // empty when every rounding failed
  cost best_primal_energy = infinity;
};

class dual_solver {
public:
  dual_solver(const bottleneck_instance& inst, cover c, index threads = 1);

  // lambda splits theta equally among covering trees, eta starts at zero
  dual_state initial_state() const;

  struct evaluation {
    cost bound;
    std::vector<cost> tree_values;
    std::vector<labeling> tree_labelings;
    coupling_result coupling;
  };
  evaluation evaluate(const dual_state& s);

  // supergradient from the subproblem argmins, projected so that components
  // of a shared factor sum to zero across subproblems
  struct direction {
    std::vector<factor_costs> lambda;
    std::vector<factor_costs> eta;
    double norm_sq = 0;
  };
  direction supergradient(const evaluation& ev) const;

  static void apply_step(dual_state& s, const direction& d, double step);

  // projected supergradient ascent with Polyak steps from the rounded primal,
  // falling back to gamma0/sqrt(k) while no primal is known
  dual_report ascend(const dual_config& cfg);

  // per-factor sum of tree lambdas in the canonical global layout (equals
  // theta minus the eta sums under the reparameterization constraint)
  void aggregate_tree_potentials(const dual_state& s, std::vector<std::vector<cost>>& unary,
                                 std::vector<std::vector<cost>>& pair) const;

  // max elementwise violation of sum(lambda) + sum(eta) = theta over finite
  // entries; +infinity entries must agree in kind
  double reparameterization_residual(const dual_state& s) const;

  void set_chain_costs(const dual_state& s);  // push eta into the chain solvers

  const bottleneck_instance& instance() const { return inst_; }
  const cover& decomposition() const { return cover_; }
  std::vector<chain_solver>& chain_solvers() { return chains_; }

  // trees (then chains) covering a global node, as (subproblem, local node)
  const std::vector<std::vector<std::pair<index, index>>>& tree_nodes_covering() const {
    return tree_node_cover_;
  }
  const std::vector<std::vector<std::pair<index, index>>>& chain_nodes_covering() const {
    return chain_node_cover_;
  }

private:
  struct edge_cover_ref {
    bool is_tree;
    index sub;
    index local;    // local edge index
    index local_i;  // local node of canonical endpoint i
    index local_j;
    bool transposed;  // pair vector stored row-major in the j endpoint
  };

  labeling try_round(const dual_state& s, node_order_kind order) const;  // empty on failure

  bottleneck_instance inst_;
  cover cover_;
  index threads_;
  std::vector<chain_solver> chains_;

  std::vector<std::vector<std::pair<index, index>>> tree_node_cover_;   // global node -> (t, local)
  std::vector<std::vector<std::pair<index, index>>> chain_node_cover_;  // global node -> (l, local)
  std::vector<std::vector<edge_cover_ref>> edge_cover_;                 // global edge -> refs
};

}  // namespace bmrf

#endif
