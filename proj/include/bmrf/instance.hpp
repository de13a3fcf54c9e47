#ifndef BMRF_INSTANCE_HPP
#define BMRF_INSTANCE_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bmrf {

using index = std::size_t;
using cost = double;

constexpr cost infinity = std::numeric_limits<cost>::infinity();

// thrown when a (sub)problem admits no labeling of finite cost
class infeasible_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct edge {
  index i;
  index j;
};

inline bool operator==(const edge& a, const edge& b) { return a.i == b.i && a.j == b.j; }

// undirected graph, edges stored canonically with i < j in declaration order
class graph {
public:
  graph() = default;
  graph(index node_count, std::vector<edge> edges);

  index node_count() const { return node_count_; }
  index edge_count() const { return edges_.size(); }
  const std::vector<edge>& edges() const { return edges_; }
  const edge& edge_at(index e) const { return edges_[e]; }

  // neighbors of a node as (other endpoint, edge id)
  const std::vector<std::pair<index, index>>& neighbors(index i) const { return adjacency_[i]; }

  // true iff edges are exactly {(i, i+1) : i < node_count-1}
  bool is_path() const;

  // (rows, cols) if the edge set is a row-major 4-neighborhood grid
  std::optional<std::pair<index, index>> grid_shape() const;

  bool connected() const;

private:
  index node_count_ = 0;
  std::vector<edge> edges_;
  std::vector<std::vector<std::pair<index, index>>> adjacency_;
};

// zeta: cost of the bottleneck value, defined on the instance's value set B
class bottleneck_cost {
public:
  enum class kind : unsigned char { zero, linear, table };

  bottleneck_cost() = default;

  static bottleneck_cost zero() { return bottleneck_cost(); }
  static bottleneck_cost linear(cost weight);
  static bottleneck_cost table(std::vector<std::pair<cost, cost>> entries);

  kind cost_kind() const { return kind_; }
  cost weight() const { return weight_; }
  const std::vector<std::pair<cost, cost>>& entries() const { return entries_; }

  // table lookup rounds up to the smallest key >= b; above the largest key is an error
  cost operator()(cost b) const;

  bool operator==(const bottleneck_cost& o) const;

private:
  kind kind_ = kind::zero;
  cost weight_ = 0.0;
  std::vector<std::pair<cost, cost>> entries_;
};

using labeling = std::vector<index>;

struct bottleneck_instance {
  graph g;
  std::vector<index> label_counts;
  std::vector<std::vector<cost>> theta_unary;  // [node][x_i]
  std::vector<std::vector<cost>> theta_pair;   // [edge][x_i * |X_j| + x_j], edge (i,j) with i < j
  std::vector<std::vector<cost>> phi_unary;
  std::vector<std::vector<cost>> phi_pair;
  bottleneck_cost zeta;

  index node_count() const { return g.node_count(); }
  index pair_config(index e, index xi, index xj) const {
    return xi * label_counts[g.edge_at(e).j] + xj;
  }

  // throws std::invalid_argument on shape mismatch, -inf/NaN costs or non-finite phi
  void validate() const;

  // the set B: all values taken by phi, sorted strictly increasing
  std::vector<cost> bottleneck_values() const;
};

// sum of theta terms; +infinity if any term is forbidden
cost linear_energy(const bottleneck_instance& inst, const labeling& x);

// max over all unary and pairwise phi values taken by x
cost bottleneck_of(const bottleneck_instance& inst, const labeling& x);

// linear energy plus zeta at the labeling's own bottleneck value
cost evaluate_energy(const bottleneck_instance& inst, const labeling& x);

// linear energy plus min_{b in B, b >= bottleneck_of(x)} zeta(b); for monotone
// zeta this coincides with evaluate_energy
cost evaluate_energy_optimal_b(const bottleneck_instance& inst, const labeling& x);

// copy with theta := +infinity wherever phi > b
bottleneck_instance restrict_to_bottleneck(const bottleneck_instance& inst, cost b);

}  // namespace bmrf

#endif
