#include "bmrf/cover.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

namespace bmrf {

namespace {

// edge id lookup for consecutive path nodes
edge_ref make_edge_ref(const graph& g, index a, index b) {
  for (auto [w, e] : g.neighbors(a))
    if (w == b) return {e, g.edge_at(e).i != a};
  throw std::invalid_argument("cover: nodes are not adjacent");
}

cover_chain path_to_chain(const graph& g, const std::vector<index>& nodes) {
  cover_chain chain;
  chain.nodes = nodes;
  for (index r = 0; r + 1 < nodes.size(); ++r)
    chain.edges.push_back(make_edge_ref(g, nodes[r], nodes[r + 1]));
  return chain;
}

cover_tree chain_as_tree(const cover_chain& chain) {
  cover_tree tree;
  tree.nodes = chain.nodes;
  for (const auto& e : chain.edges) tree.edges.push_back(e.id);
  return tree;
}

}  // namespace

cover build_grid_cover(const graph& g, index rows, index cols) {
  if (rows * cols != g.node_count())
    throw std::invalid_argument("build_grid_cover: shape does not match node count");
  cover c;
  auto add_path = [&](std::vector<index> nodes) {
    cover_chain chain = path_to_chain(g, nodes);
    c.trees.push_back(chain_as_tree(chain));
    c.chains.push_back(std::move(chain));
  };
  if (cols >= 2 || rows == 1)  // degenerate single-column grids are covered by their column
    for (index r = 0; r < rows; ++r) {
      std::vector<index> nodes;
      for (index col = 0; col < cols; ++col) nodes.push_back(r * cols + col);
      add_path(std::move(nodes));
    }
  if (rows >= 2)
    for (index col = 0; col < cols; ++col) {
      std::vector<index> nodes;
      for (index r = 0; r < rows; ++r) nodes.push_back(r * cols + col);
      add_path(std::move(nodes));
    }
  validate_cover(c, g);
  return c;
}

cover build_generic_cover(const graph& g) {
  if (!g.connected()) throw std::invalid_argument("build_generic_cover: graph is disconnected");
  cover c;

  // spanning tree by BFS from node 0; leftover edges become 2-node trees
  {
    std::vector<char> visited(g.node_count(), 0);
    std::vector<char> edge_in_tree(g.edge_count(), 0);
    cover_tree spanning;
    std::vector<index> queue = {0};
    visited[0] = 1;
    spanning.nodes.push_back(0);
    for (index head = 0; head < queue.size(); ++head) {
      const index v = queue[head];
      for (auto [w, e] : g.neighbors(v))
        if (!visited[w]) {
          visited[w] = 1;
          edge_in_tree[e] = 1;
          spanning.nodes.push_back(w);
          spanning.edges.push_back(e);
          queue.push_back(w);
        }
    }
    std::sort(spanning.nodes.begin(), spanning.nodes.end());
    c.trees.push_back(std::move(spanning));
    for (index e = 0; e < g.edge_count(); ++e)
      if (!edge_in_tree[e]) c.trees.push_back({{g.edge_at(e).i, g.edge_at(e).j}, {e}});
  }

  // greedy edge-disjoint paths: grow from odd-degree nodes first, extending in
  // both directions without revisiting a path node
  {
    std::vector<index> unused_degree(g.node_count(), 0);
    std::vector<char> edge_used(g.edge_count(), 0);
    for (const auto& e : g.edges()) {
      ++unused_degree[e.i];
      ++unused_degree[e.j];
    }
    index remaining = g.edge_count();
    auto pick_start = [&]() -> index {
      for (index i = 0; i < g.node_count(); ++i)
        if (unused_degree[i] % 2 == 1) return i;
      for (index i = 0; i < g.node_count(); ++i)
        if (unused_degree[i] > 0) return i;
      return g.node_count();
    };
    while (remaining > 0) {
      const index start = pick_start();
      assert(start < g.node_count());
      std::vector<index> path = {start};
      std::vector<char> on_path(g.node_count(), 0);
      on_path[start] = 1;
      auto extend = [&](bool front) {
        while (true) {
          const index tip = front ? path.front() : path.back();
          index chosen_edge = g.edge_count();
          index chosen_node = 0;
          for (auto [w, e] : g.neighbors(tip))
            if (!edge_used[e] && !on_path[w] && e < chosen_edge) {
              chosen_edge = e;
              chosen_node = w;
            }
          if (chosen_edge == g.edge_count()) return;
          edge_used[chosen_edge] = 1;
          --unused_degree[tip];
          --unused_degree[chosen_node];
          --remaining;
          on_path[chosen_node] = 1;
          if (front)
            path.insert(path.begin(), chosen_node);
          else
            path.push_back(chosen_node);
        }
      };
      extend(false);
      extend(true);
      assert(path.size() >= 2);
      c.chains.push_back(path_to_chain(g, path));
    }
    if (c.chains.empty()) c.chains.push_back({{0}, {}});  // single node, no edges
    // isolated-in-chain-layer nodes cannot occur on a connected graph, but a
    // node may appear in no chain when n == 1 handled above
  }

  validate_cover(c, g);
  return c;
}

cover build_cover(const graph& g) {
  if (auto shape = g.grid_shape()) return build_grid_cover(g, shape->first, shape->second);
  return build_generic_cover(g);
}

void validate_cover(const cover& c, const graph& g) {
  std::vector<index> node_in_tree(g.node_count(), 0), node_in_chain(g.node_count(), 0);
  std::vector<index> edge_in_tree(g.edge_count(), 0), edge_in_chain(g.edge_count(), 0);

  for (const auto& t : c.trees) {
    if (t.nodes.empty()) throw std::invalid_argument("cover: empty tree");
    if (t.edges.size() + 1 != t.nodes.size())
      throw std::invalid_argument("cover: tree is not acyclic/connected (edge count)");
    std::map<index, index> local;
    for (index i = 0; i < t.nodes.size(); ++i) {
      if (t.nodes[i] >= g.node_count()) throw std::invalid_argument("cover: tree node out of range");
      if (!local.insert({t.nodes[i], i}).second)
        throw std::invalid_argument("cover: duplicate tree node");
      ++node_in_tree[t.nodes[i]];
    }
    // connectivity via union-find over the tree edges
    std::vector<index> parent(t.nodes.size());
    for (index i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](index v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (index e : t.edges) {
      if (e >= g.edge_count()) throw std::invalid_argument("cover: tree edge out of range");
      const auto it_i = local.find(g.edge_at(e).i);
      const auto it_j = local.find(g.edge_at(e).j);
      if (it_i == local.end() || it_j == local.end())
        throw std::invalid_argument("cover: tree edge endpoint outside tree");
      const index a = find(it_i->second), b = find(it_j->second);
      if (a == b) throw std::invalid_argument("cover: tree contains a cycle");
      parent[a] = b;
      ++edge_in_tree[e];
    }
  }

  for (const auto& ch : c.chains) {
    if (ch.nodes.empty()) throw std::invalid_argument("cover: empty chain");
    if (ch.edges.size() + 1 != ch.nodes.size())
      throw std::invalid_argument("cover: chain edge count mismatch");
    std::vector<char> seen(g.node_count(), 0);
    for (index v : ch.nodes) {
      if (v >= g.node_count()) throw std::invalid_argument("cover: chain node out of range");
      if (seen[v]) throw std::invalid_argument("cover: chain revisits a node");
      seen[v] = 1;
      ++node_in_chain[v];
    }
    for (index r = 0; r < ch.edges.size(); ++r) {
      const auto& er = ch.edges[r];
      if (er.id >= g.edge_count()) throw std::invalid_argument("cover: chain edge out of range");
      const edge& e = g.edge_at(er.id);
      const index from = er.reversed ? e.j : e.i;
      const index to = er.reversed ? e.i : e.j;
      if (from != ch.nodes[r] || to != ch.nodes[r + 1])
        throw std::invalid_argument("cover: chain edge does not join consecutive nodes");
      ++edge_in_chain[er.id];
    }
  }

  for (index i = 0; i < g.node_count(); ++i)
    if (node_in_tree[i] == 0 || node_in_chain[i] == 0)
      throw std::invalid_argument("cover: node " + std::to_string(i) + " not covered in both layers");
  for (index e = 0; e < g.edge_count(); ++e)
    if (edge_in_tree[e] == 0 || edge_in_chain[e] == 0)
      throw std::invalid_argument("cover: edge " + std::to_string(e) + " not covered in both layers");
}

}  // namespace bmrf
