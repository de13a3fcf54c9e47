#ifndef BMRF_COVER_HPP
#define BMRF_COVER_HPP

#include <vector>

#include "bmrf/instance.hpp"

namespace bmrf {

struct edge_ref {
  index id;       // edge id in the instance graph
  bool reversed;  // true when the path traverses j -> i of the canonical (i, j)
};

// a path in the graph; edges[r] joins nodes[r] and nodes[r+1]
struct cover_chain {
  std::vector<index> nodes;
  std::vector<edge_ref> edges;
};

// a connected acyclic subgraph
struct cover_tree {
  std::vector<index> nodes;
  std::vector<index> edges;  // edge ids
};

// trees carry the MRF part, chains the bottleneck part; every node and edge
// of the graph appears in at least one tree and one chain
struct cover {
  std::vector<cover_tree> trees;
  std::vector<cover_chain> chains;
};

// rows and columns as paths, used for both layers
cover build_grid_cover(const graph& g, index rows, index cols);

// spanning tree (plus one 2-node tree per leftover edge) and a greedy
// edge-disjoint path decomposition; requires a connected graph
cover build_generic_cover(const graph& g);

// grid cover when the edge set is a grid, generic cover otherwise
cover build_cover(const graph& g);

// throws std::invalid_argument when the cover is malformed or misses a factor
void validate_cover(const cover& c, const graph& g);

}  // namespace bmrf

#endif
