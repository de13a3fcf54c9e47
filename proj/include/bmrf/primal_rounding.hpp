#ifndef BMRF_PRIMAL_ROUNDING_HPP
#define BMRF_PRIMAL_ROUNDING_HPP

#include <vector>

#include "bmrf/instance.hpp"

namespace bmrf {

enum class node_order_kind : unsigned char { row_major, bfs };

// row_major is the identity permutation; bfs explores from node 0
std::vector<index> make_node_order(const graph& g, node_order_kind kind);

// Sequential decoding over reparameterized MRF potentials (canonical layout):
// nodes are visited in the given order, each assigned the label minimizing its
// unary plus pairwise costs to already labeled neighbors, ties toward the
// smaller label. Throws infeasible_error when a node has only forbidden
// choices.
labeling primal_round(const graph& g, const std::vector<index>& label_counts,
                      const std::vector<std::vector<cost>>& unary,
                      const std::vector<std::vector<cost>>& pair,
                      const std::vector<index>& order);

}  // namespace bmrf

#endif
