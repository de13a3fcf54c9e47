#ifndef BMRF_CHAIN_DAG_HPP
#define BMRF_CHAIN_DAG_HPP

#include <cstdint>
#include <vector>

#include "bmrf/instance.hpp"

namespace bmrf {

// a chain MRF with local node indices 0..n-1; pairwise costs of edge (r, r+1)
// stored row-major in x_r
struct chain_model {
  std::vector<index> label_counts;
  std::vector<std::vector<cost>> theta_unary;
  std::vector<std::vector<cost>> theta_pair;
  std::vector<std::vector<cost>> phi_unary;
  std::vector<std::vector<cost>> phi_pair;

  index node_count() const { return label_counts.size(); }
  void validate() const;
};

// requires inst.g.is_path()
chain_model make_chain_model(const bottleneck_instance& inst);

struct dag_arc {
  enum class origin : unsigned char { source, unary, pairwise, sink };

  index tail;
  index head;
  cost sigma;   // linear cost
  cost omega;   // bottleneck cost; -infinity sentinel on source/sink arcs
  origin kind;
  index position;  // chain node (unary) or left chain node (pairwise)
  index config;    // label, or x_r * k_{r+1} + x_{r+1}
};

// Shortest-path digraph of a chain: each label x_r becomes a node pair
// (x_r, dup(x_r)) joined by an arc carrying the unary costs; pairwise costs
// sit on arcs dup(x_r) -> x_{r+1}; s feeds node 0 and every dup of node n-1
// feeds t with sigma 0. Node ids are topologically ordered. Arcs whose sigma
// is +infinity at construction are dropped.
class layered_dag {
public:
  static layered_dag from_chain(const chain_model& m);

  // arbitrary DAG for tests; arcs must go from lower to higher node id
  static layered_dag from_arcs(index node_count, index source, index sink,
                               std::vector<dag_arc> arcs);

  index node_count() const { return node_count_; }
  index arc_count() const { return arcs_.size(); }
  index source() const { return source_; }
  index sink() const { return sink_; }

  const dag_arc& arc(index a) const { return arcs_[a]; }
  dag_arc& arc(index a) { return arcs_[a]; }
  const std::vector<index>& out_arcs(index w) const { return out_arcs_[w]; }
  const std::vector<index>& in_arcs(index w) const { return in_arcs_[w]; }

  // arc ids stably sorted by (omega, id); sentinels first
  const std::vector<index>& arcs_by_omega() const { return arcs_by_omega_; }

  static constexpr index no_arc = static_cast<index>(-1);

  // arc id per chain factor configuration; no_arc where dropped
  const std::vector<std::vector<index>>& unary_arc_ids() const { return unary_arc_ids_; }
  const std::vector<std::vector<index>>& pair_arc_ids() const { return pair_arc_ids_; }

  index chain_node_count() const { return unary_arc_ids_.size(); }

  // chain (position, label) represented by a DAG node; valid for all nodes but s, t
  std::pair<index, index> position_label(index w) const;

private:
  void finalize();

  index node_count_ = 0;
  index source_ = 0;
  index sink_ = 0;
  std::vector<dag_arc> arcs_;
  std::vector<std::vector<index>> out_arcs_;
  std::vector<std::vector<index>> in_arcs_;
  std::vector<index> arcs_by_omega_;
  std::vector<std::vector<index>> unary_arc_ids_;
  std::vector<std::vector<index>> pair_arc_ids_;
  std::vector<std::pair<index, index>> node_origin_;  // (position, label) per DAG node
};

enum class sweep_direction : unsigned char { forward, backward };

// Incremental single-source shortest path distances over a growing arc set.
// Arcs are activated one at a time; a FIFO wave over active arcs then restores
// exact distances. On a layered DAG each activation touches a node at most
// once, so a full sweep stays within the |A|^2 envelope.
class dsp_engine {
public:
  dsp_engine(const layered_dag& dag, sweep_direction dir);

  void reset();

  // activates the arc, returns the set of nodes whose distance strictly
  // decreased (deduplicated); the reference is valid until the next call
  const std::vector<index>& insert(index arc_id);

  cost distance(index node) const { return dist_[node]; }
  const std::vector<cost>& distances() const { return dist_; }
  bool arc_active(index arc_id) const { return active_[arc_id] != 0; }

  std::uint64_t relax_attempts() const { return relax_attempts_; }
  std::uint64_t distance_updates() const { return distance_updates_; }

private:
  index root() const;
  void relax_from(index node);

  const layered_dag& dag_;
  sweep_direction dir_;
  std::vector<cost> dist_;
  std::vector<char> active_;
  std::vector<char> in_queue_;
  std::vector<index> queue_;
  std::vector<index> decreased_;
  std::vector<char> in_decreased_;
  std::uint64_t relax_attempts_ = 0;
  std::uint64_t distance_updates_ = 0;
};

// from-scratch distances over the active arc subset by topological relaxation;
// oracle counterpart of dsp_engine
std::vector<cost> topological_distances(const layered_dag& dag,
                                        const std::vector<char>& arc_active,
                                        sweep_direction dir);

}  // namespace bmrf

#endif
