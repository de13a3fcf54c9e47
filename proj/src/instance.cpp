#include "bmrf/instance.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>

namespace bmrf {

graph::graph(index node_count, std::vector<edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  std::set<std::pair<index, index>> seen;
  for (auto& e : edges_) {
    if (e.i == e.j) throw std::invalid_argument("graph: self-loop at node " + std::to_string(e.i));
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.j >= node_count_)
      throw std::invalid_argument("graph: edge endpoint " + std::to_string(e.j) + " out of range");
    if (!seen.insert({e.i, e.j}).second)
      throw std::invalid_argument("graph: duplicate edge (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ")");
  }
  adjacency_.resize(node_count_);
  for (index e = 0; e < edges_.size(); ++e) {
    adjacency_[edges_[e].i].push_back({edges_[e].j, e});
    adjacency_[edges_[e].j].push_back({edges_[e].i, e});
  }
}

bool graph::is_path() const {
  if (node_count_ == 0) return false;
  if (edges_.size() != node_count_ - 1) return false;
  std::vector<char> present(node_count_, 0);
  for (const auto& e : edges_) {
    if (e.j != e.i + 1) return false;
    present[e.i] = 1;
  }
  for (index i = 0; i + 1 < node_count_; ++i)
    if (!present[i]) return false;
  return true;
}

std::optional<std::pair<index, index>> graph::grid_shape() const {
  if (node_count_ == 0) return std::nullopt;
  std::set<std::pair<index, index>> actual;
  for (const auto& e : edges_) actual.insert({e.i, e.j});
  for (index rows = 1; rows <= node_count_; ++rows) {
    if (node_count_ % rows != 0) continue;
    const index cols = node_count_ / rows;
    if (edges_.size() != rows * (cols - 1) + (rows - 1) * cols) continue;
    std::set<std::pair<index, index>> expected;
    for (index r = 0; r < rows; ++r)
      for (index c = 0; c < cols; ++c) {
        if (c + 1 < cols) expected.insert({r * cols + c, r * cols + c + 1});
        if (r + 1 < rows) expected.insert({r * cols + c, (r + 1) * cols + c});
      }
    if (expected == actual) return std::make_pair(rows, cols);
  }
  return std::nullopt;
}

bool graph::connected() const {
  if (node_count_ == 0) return false;
  std::vector<char> visited(node_count_, 0);
  std::vector<index> stack = {0};
  visited[0] = 1;
  index count = 1;
  while (!stack.empty()) {
    const index v = stack.back();
    stack.pop_back();
    for (auto [w, e] : adjacency_[v])
      if (!visited[w]) {
        visited[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  return count == node_count_;
}

bottleneck_cost bottleneck_cost::linear(cost weight) {
  if (!(weight >= 0) || !std::isfinite(weight))
    throw std::invalid_argument("zeta linear: weight must be finite and >= 0");
  bottleneck_cost z;
  z.kind_ = kind::linear;
  z.weight_ = weight;
  return z;
}

bottleneck_cost bottleneck_cost::table(std::vector<std::pair<cost, cost>> entries) {
  if (entries.empty()) throw std::invalid_argument("zeta table: empty");
  for (index k = 0; k < entries.size(); ++k) {
    if (!std::isfinite(entries[k].first) || !std::isfinite(entries[k].second))
      throw std::invalid_argument("zeta table: non-finite entry");
    if (k > 0 && !(entries[k - 1].first < entries[k].first))
      throw std::invalid_argument("zeta table: keys not strictly increasing");
  }
  bottleneck_cost z;
  z.kind_ = kind::table;
  z.entries_ = std::move(entries);
  return z;
}

cost bottleneck_cost::operator()(cost b) const {
  switch (kind_) {
    case kind::zero: return 0.0;
    case kind::linear: return weight_ * b;
    case kind::table: {
      auto it = std::lower_bound(entries_.begin(), entries_.end(), b,
                                 [](const std::pair<cost, cost>& e, cost v) { return e.first < v; });
      if (it == entries_.end())
        throw std::logic_error("zeta table: query above largest key");
      return it->second;
    }
  }
  return 0.0;
}

bool bottleneck_cost::operator==(const bottleneck_cost& o) const {
  return kind_ == o.kind_ && weight_ == o.weight_ && entries_ == o.entries_;
}

namespace {

void check_cost_value(cost v, bool allow_inf, const char* what) {
  if (std::isnan(v)) throw std::invalid_argument(std::string(what) + ": NaN cost");
  if (v == -infinity) throw std::invalid_argument(std::string(what) + ": -infinity cost");
  if (!allow_inf && v == infinity)
    throw std::invalid_argument(std::string(what) + ": +infinity not allowed here");
}

}  // namespace

void bottleneck_instance::validate() const {
  const index n = g.node_count();
  if (n == 0) throw std::invalid_argument("instance: empty graph");
  if (label_counts.size() != n) throw std::invalid_argument("instance: label_counts size mismatch");
  for (index i = 0; i < n; ++i)
    if (label_counts[i] == 0)
      throw std::invalid_argument("instance: node " + std::to_string(i) + " has no labels");
  if (theta_unary.size() != n || phi_unary.size() != n)
    throw std::invalid_argument("instance: unary container size mismatch");
  if (theta_pair.size() != g.edge_count() || phi_pair.size() != g.edge_count())
    throw std::invalid_argument("instance: pairwise container size mismatch");
  for (index i = 0; i < n; ++i) {
    if (theta_unary[i].size() != label_counts[i] || phi_unary[i].size() != label_counts[i])
      throw std::invalid_argument("instance: unary costs of node " + std::to_string(i) +
                                  " do not match label count");
    for (cost v : theta_unary[i]) check_cost_value(v, true, "theta_unary");
    for (cost v : phi_unary[i]) check_cost_value(v, false, "phi_unary");
  }
  for (index e = 0; e < g.edge_count(); ++e) {
    const index size = label_counts[g.edge_at(e).i] * label_counts[g.edge_at(e).j];
    if (theta_pair[e].size() != size || phi_pair[e].size() != size)
      throw std::invalid_argument("instance: pairwise costs of edge " + std::to_string(e) +
                                  " do not match label counts");
    for (cost v : theta_pair[e]) check_cost_value(v, true, "theta_pairwise");
    for (cost v : phi_pair[e]) check_cost_value(v, false, "phi_pairwise");
  }
}

std::vector<cost> bottleneck_instance::bottleneck_values() const {
  std::vector<cost> values;
  for (const auto& v : phi_unary) values.insert(values.end(), v.begin(), v.end());
  for (const auto& v : phi_pair) values.insert(values.end(), v.begin(), v.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

namespace {

void check_labeling(const bottleneck_instance& inst, const labeling& x) {
  if (x.size() != inst.node_count())
    throw std::invalid_argument("labeling: size does not match node count");
  for (index i = 0; i < x.size(); ++i)
    if (x[i] >= inst.label_counts[i])
      throw std::invalid_argument("labeling: label out of range at node " + std::to_string(i));
}

}  // namespace

cost linear_energy(const bottleneck_instance& inst, const labeling& x) {
  check_labeling(inst, x);
  cost total = 0.0;
  for (index i = 0; i < inst.node_count(); ++i) total += inst.theta_unary[i][x[i]];
  for (index e = 0; e < inst.g.edge_count(); ++e) {
    const auto& ed = inst.g.edge_at(e);
    total += inst.theta_pair[e][inst.pair_config(e, x[ed.i], x[ed.j])];
  }
  return total;
}

cost bottleneck_of(const bottleneck_instance& inst, const labeling& x) {
  check_labeling(inst, x);
  cost b = -infinity;
  for (index i = 0; i < inst.node_count(); ++i) b = std::max(b, inst.phi_unary[i][x[i]]);
  for (index e = 0; e < inst.g.edge_count(); ++e) {
    const auto& ed = inst.g.edge_at(e);
    b = std::max(b, inst.phi_pair[e][inst.pair_config(e, x[ed.i], x[ed.j])]);
  }
  return b;
}

cost evaluate_energy(const bottleneck_instance& inst, const labeling& x) {
  return linear_energy(inst, x) + inst.zeta(bottleneck_of(inst, x));
}

cost evaluate_energy_optimal_b(const bottleneck_instance& inst, const labeling& x) {
  const cost linear = linear_energy(inst, x);
  const cost lo = bottleneck_of(inst, x);
  const auto values = inst.bottleneck_values();
  cost best = infinity;
  for (auto it = std::lower_bound(values.begin(), values.end(), lo); it != values.end(); ++it)
    best = std::min(best, inst.zeta(*it));
  assert(best < infinity);
  return linear + best;
}

bottleneck_instance restrict_to_bottleneck(const bottleneck_instance& inst, cost b) {
  if (!std::isfinite(b)) throw std::invalid_argument("restrict_to_bottleneck: b must be finite");
  bottleneck_instance out = inst;
  for (index i = 0; i < inst.node_count(); ++i)
    for (index xi = 0; xi < inst.label_counts[i]; ++xi)
      if (inst.phi_unary[i][xi] > b) out.theta_unary[i][xi] = infinity;
  for (index e = 0; e < inst.g.edge_count(); ++e)
    for (index c = 0; c < inst.phi_pair[e].size(); ++c)
      if (inst.phi_pair[e][c] > b) out.theta_pair[e][c] = infinity;
  return out;
}

}  // namespace bmrf
