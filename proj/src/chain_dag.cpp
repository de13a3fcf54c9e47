#include "bmrf/chain_dag.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace bmrf {

void chain_model::validate() const {
  const index n = label_counts.size();
  if (n == 0) throw std::invalid_argument("chain_model: empty chain");
  if (theta_unary.size() != n || phi_unary.size() != n || theta_pair.size() != n - 1 ||
      phi_pair.size() != n - 1)
    throw std::invalid_argument("chain_model: container sizes do not match node count");
  for (index r = 0; r < n; ++r) {
    if (label_counts[r] == 0) throw std::invalid_argument("chain_model: node without labels");
    if (theta_unary[r].size() != label_counts[r] || phi_unary[r].size() != label_counts[r])
      throw std::invalid_argument("chain_model: unary size mismatch");
  }
  for (index r = 0; r + 1 < n; ++r)
    if (theta_pair[r].size() != label_counts[r] * label_counts[r + 1] ||
        phi_pair[r].size() != label_counts[r] * label_counts[r + 1])
      throw std::invalid_argument("chain_model: pairwise size mismatch");
}

chain_model make_chain_model(const bottleneck_instance& inst) {
  if (!inst.g.is_path()) throw std::invalid_argument("make_chain_model: graph is not a path");
  chain_model m;
  m.label_counts = inst.label_counts;
  m.theta_unary = inst.theta_unary;
  m.phi_unary = inst.phi_unary;
  // path edges may be declared in any order; realign to position order
  m.theta_pair.resize(inst.g.edge_count());
  m.phi_pair.resize(inst.g.edge_count());
  for (index e = 0; e < inst.g.edge_count(); ++e) {
    const index r = inst.g.edge_at(e).i;
    m.theta_pair[r] = inst.theta_pair[e];
    m.phi_pair[r] = inst.phi_pair[e];
  }
  m.validate();
  return m;
}

layered_dag layered_dag::from_chain(const chain_model& m) {
  m.validate();
  const index n = m.node_count();

  layered_dag dag;
  // s, then per chain node its label nodes followed by their duplicates, then t
  std::vector<index> label_base(n);
  index next = 1;
  for (index r = 0; r < n; ++r) {
    label_base[r] = next;
    next += 2 * m.label_counts[r];
  }
  dag.node_count_ = next + 1;
  dag.source_ = 0;
  dag.sink_ = next;

  const auto label_node = [&](index r, index x) { return label_base[r] + x; };
  const auto dup_node = [&](index r, index x) { return label_base[r] + m.label_counts[r] + x; };

  dag.node_origin_.assign(dag.node_count_, {n, 0});
  for (index r = 0; r < n; ++r)
    for (index x = 0; x < m.label_counts[r]; ++x) {
      dag.node_origin_[label_node(r, x)] = {r, x};
      dag.node_origin_[dup_node(r, x)] = {r, x};
    }

  dag.unary_arc_ids_.resize(n);
  dag.pair_arc_ids_.resize(n - 1);

  for (index x = 0; x < m.label_counts[0]; ++x)
    dag.arcs_.push_back({dag.source_, label_node(0, x), 0.0, -infinity, dag_arc::origin::source, 0, x});

  for (index r = 0; r < n; ++r) {
    dag.unary_arc_ids_[r].assign(m.label_counts[r], no_arc);
    for (index x = 0; x < m.label_counts[r]; ++x) {
      if (m.theta_unary[r][x] == infinity) continue;  // cannot lie on a finite path
      dag.unary_arc_ids_[r][x] = dag.arcs_.size();
      dag.arcs_.push_back({label_node(r, x), dup_node(r, x), m.theta_unary[r][x], m.phi_unary[r][x],
                           dag_arc::origin::unary, r, x});
    }
    if (r + 1 < n) {
      dag.pair_arc_ids_[r].assign(m.label_counts[r] * m.label_counts[r + 1], no_arc);
      for (index x = 0; x < m.label_counts[r]; ++x)
        for (index y = 0; y < m.label_counts[r + 1]; ++y) {
          const index cfg = x * m.label_counts[r + 1] + y;
          if (m.theta_pair[r][cfg] == infinity) continue;
          dag.pair_arc_ids_[r][cfg] = dag.arcs_.size();
          dag.arcs_.push_back({dup_node(r, x), label_node(r + 1, y), m.theta_pair[r][cfg],
                               m.phi_pair[r][cfg], dag_arc::origin::pairwise, r, cfg});
        }
    }
  }

  for (index x = 0; x < m.label_counts[n - 1]; ++x)
    dag.arcs_.push_back(
        {dup_node(n - 1, x), dag.sink_, 0.0, -infinity, dag_arc::origin::sink, n - 1, x});

  dag.finalize();
  return dag;
}

layered_dag layered_dag::from_arcs(index node_count, index source, index sink,
                                   std::vector<dag_arc> arcs) {
  layered_dag dag;
  dag.node_count_ = node_count;
  dag.source_ = source;
  dag.sink_ = sink;
  dag.arcs_ = std::move(arcs);
  for (const auto& a : dag.arcs_)
    if (a.tail >= a.head) throw std::invalid_argument("layered_dag: arcs must increase node id");
  dag.node_origin_.assign(node_count, {0, 0});
  dag.finalize();
  return dag;
}

void layered_dag::finalize() {
  out_arcs_.assign(node_count_, {});
  in_arcs_.assign(node_count_, {});
  for (index a = 0; a < arcs_.size(); ++a) {
    assert(arcs_[a].tail < arcs_[a].head);  // topological by node id
    out_arcs_[arcs_[a].tail].push_back(a);
    in_arcs_[arcs_[a].head].push_back(a);
  }
  arcs_by_omega_.resize(arcs_.size());
  for (index a = 0; a < arcs_.size(); ++a) arcs_by_omega_[a] = a;
  std::stable_sort(arcs_by_omega_.begin(), arcs_by_omega_.end(),
                   [this](index a, index b) { return arcs_[a].omega < arcs_[b].omega; });
}

std::pair<index, index> layered_dag::position_label(index w) const {
  assert(w != source_ && w != sink_);
  return node_origin_[w];
}

dsp_engine::dsp_engine(const layered_dag& dag, sweep_direction dir) : dag_(dag), dir_(dir) {
  reset();
}

index dsp_engine::root() const {
  return dir_ == sweep_direction::forward ? dag_.source() : dag_.sink();
}

void dsp_engine::reset() {
  dist_.assign(dag_.node_count(), infinity);
  dist_[root()] = 0.0;
  active_.assign(dag_.arc_count(), 0);
  in_queue_.assign(dag_.node_count(), 0);
  in_decreased_.assign(dag_.node_count(), 0);
  queue_.clear();
  decreased_.clear();
}

const std::vector<index>& dsp_engine::insert(index arc_id) {
  assert(!active_[arc_id]);
  active_[arc_id] = 1;

  for (index w : decreased_) in_decreased_[w] = 0;
  decreased_.clear();

  const dag_arc& a = dag_.arc(arc_id);
  const index from = dir_ == sweep_direction::forward ? a.tail : a.head;
  const index to = dir_ == sweep_direction::forward ? a.head : a.tail;
  ++relax_attempts_;
  if (dist_[from] + a.sigma < dist_[to]) {
    dist_[to] = dist_[from] + a.sigma;
    ++distance_updates_;
    decreased_.push_back(to);
    in_decreased_[to] = 1;
    queue_.push_back(to);
    in_queue_[to] = 1;
  }

  // FIFO wave over active arcs leaving the updated node; layer-monotone arcs
  // make each node settle with its final distance before it is expanded
  index head = 0;
  while (head < queue_.size()) {
    const index p = queue_[head++];
    in_queue_[p] = 0;
    relax_from(p);
  }
  queue_.clear();
  return decreased_;
}

void dsp_engine::relax_from(index p) {
  const auto& fan = dir_ == sweep_direction::forward ? dag_.out_arcs(p) : dag_.in_arcs(p);
  for (index arc_id : fan) {
    if (!active_[arc_id]) continue;
    const dag_arc& a = dag_.arc(arc_id);
    const index q = dir_ == sweep_direction::forward ? a.head : a.tail;
    ++relax_attempts_;
    if (dist_[p] + a.sigma < dist_[q]) {
      dist_[q] = dist_[p] + a.sigma;
      ++distance_updates_;
      if (!in_decreased_[q]) {
        in_decreased_[q] = 1;
        decreased_.push_back(q);
      }
      if (!in_queue_[q]) {
        in_queue_[q] = 1;
        queue_.push_back(q);
      }
    }
  }
}

std::vector<cost> topological_distances(const layered_dag& dag, const std::vector<char>& arc_active,
                                        sweep_direction dir) {
  std::vector<cost> dist(dag.node_count(), infinity);
  if (dir == sweep_direction::forward) {
    dist[dag.source()] = 0.0;
    for (index w = 0; w < dag.node_count(); ++w) {
      if (dist[w] == infinity) continue;
      for (index arc_id : dag.out_arcs(w)) {
        if (!arc_active[arc_id]) continue;
        const dag_arc& a = dag.arc(arc_id);
        dist[a.head] = std::min(dist[a.head], dist[w] + a.sigma);
      }
    }
  } else {
    dist[dag.sink()] = 0.0;
    for (index w = dag.node_count(); w-- > 0;) {
      if (dist[w] == infinity) continue;
      for (index arc_id : dag.in_arcs(w)) {
        if (!arc_active[arc_id]) continue;
        const dag_arc& a = dag.arc(arc_id);
        dist[a.tail] = std::min(dist[a.tail], dist[w] + a.sigma);
      }
    }
  }
  return dist;
}

}  // namespace bmrf
