#include "bmrf/dual_decomposition.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <thread>

#include "bmrf/unary_bottleneck.hpp"

namespace bmrf {

namespace {

void parallel_for(index count, index threads, const std::function<void(index)>& body) {
  threads = std::min(std::max<index>(threads, 1), count);
  if (threads <= 1) {
    for (index i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (index w = 0; w < threads; ++w)
    pool.emplace_back([&, w]() {
      try {
        for (index i = w; i < count; i += threads) body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::pair<cost, labeling> solve_tree_mrf(const cover_tree& tree, const graph& g,
                                         const std::vector<index>& label_counts,
                                         const factor_costs& lambda) {
  const index n = tree.nodes.size();
  assert(lambda.unary.size() == n && lambda.pair.size() == tree.edges.size());

  std::map<index, index> local_of;
  for (index v = 0; v < n; ++v) local_of.emplace(tree.nodes[v], v);
  std::vector<std::vector<std::pair<index, index>>> adj(n);  // (local neighbor, local edge)
  for (index e = 0; e < tree.edges.size(); ++e) {
    const edge& ge = g.edge_at(tree.edges[e]);
    const index a = local_of.at(ge.i), b = local_of.at(ge.j);
    adj[a].push_back({b, e});
    adj[b].push_back({a, e});
  }

  // BFS from local node 0; a valid tree is connected, so the order is total
  std::vector<index> bfs = {0};
  std::vector<index> parent(n, n), parent_edge(n, tree.edges.size());
  std::vector<char> visited(n, 0);
  visited[0] = 1;
  for (index head = 0; head < bfs.size(); ++head)
    for (auto [w, e] : adj[bfs[head]])
      if (!visited[w]) {
        visited[w] = 1;
        parent[w] = bfs[head];
        parent_edge[w] = e;
        bfs.push_back(w);
      }
  if (bfs.size() != n) throw std::invalid_argument("solve_tree_mrf: tree is not connected");

  const auto k_of = [&](index local) { return label_counts[tree.nodes[local]]; };
  // pairwise lookup in canonical orientation; the stride is always |X_j|
  const auto pair_value = [&](index local_edge, index local_tail, index x_tail, index x_head) {
    const edge& ge = g.edge_at(tree.edges[local_edge]);
    const index stride = label_counts[ge.j];
    return tree.nodes[local_tail] == ge.i ? lambda.pair[local_edge][x_tail * stride + x_head]
                                          : lambda.pair[local_edge][x_head * stride + x_tail];
  };

  std::vector<std::vector<cost>> acc(n);
  for (index v = 0; v < n; ++v) acc[v] = lambda.unary[v];
  std::vector<std::vector<index>> choice(n);  // child argmin per parent label

  for (index pos = n; pos-- > 1;) {
    const index v = bfs[pos];
    const index p = parent[v];
    const index e = parent_edge[v];
    choice[v].assign(k_of(p), 0);
    for (index xp = 0; xp < k_of(p); ++xp) {
      cost best = infinity;
      index arg = 0;
      for (index xv = 0; xv < k_of(v); ++xv) {
        const cost c = acc[v][xv] + pair_value(e, p, xp, xv);
        if (c < best) {
          best = c;
          arg = xv;
        }
      }
      acc[p][xp] += best;
      choice[v][xp] = arg;
    }
  }

  cost value = infinity;
  index root_label = 0;
  for (index x = 0; x < k_of(0); ++x)
    if (acc[0][x] < value) {
      value = acc[0][x];
      root_label = x;
    }
  if (value == infinity) throw infeasible_error("solve_tree_mrf: no finite labeling");

  labeling x(n, 0);
  x[0] = root_label;
  for (index pos = 1; pos < n; ++pos) {
    const index v = bfs[pos];
    x[v] = choice[v][x[parent[v]]];
  }
  return {value, x};
}

coupling_result solve_bottleneck_coupling(std::vector<chain_solver>& chains,
                                          const bottleneck_cost& zeta, index threads) {
  if (chains.empty()) throw std::invalid_argument("solve_bottleneck_coupling: no chains");
  parallel_for(chains.size(), threads, [&](index l) { chains[l].solve(); });

  // higher-level graph: one node per chain, labels are the profile entries
  std::vector<std::vector<cost>> h_phi(chains.size()), h_theta(chains.size());
  for (index l = 0; l < chains.size(); ++l)
    for (const auto& entry : chains[l].profile().entries()) {
      h_phi[l].push_back(entry.b);
      h_theta[l].push_back(entry.c);
    }
  const unary_bottleneck_solver higher(std::move(h_phi));
  const auto optimum = select_optimal_bottleneck(higher.solve(h_theta), zeta);

  coupling_result result;
  result.b_star = optimum.b;
  result.chain_values.resize(chains.size());
  result.chain_labelings.resize(chains.size());
  result.value = zeta(optimum.b);
  for (index l = 0; l < chains.size(); ++l) {
    result.chain_values[l] = chains[l].profile().value_at(optimum.b);
    result.chain_labelings[l] = chains[l].extract_labeling(optimum.b);
    result.value += result.chain_values[l];
  }
  return result;
}

dual_solver::dual_solver(const bottleneck_instance& inst, cover c, index threads)
    : inst_(inst), cover_(std::move(c)), threads_(threads) {
  inst_.validate();
  validate_cover(cover_, inst_.g);

  // chain models over phi; linear costs start at zero so every arc survives
  chains_.reserve(cover_.chains.size());
  for (const auto& chain : cover_.chains) {
    chain_model m;
    const index n = chain.nodes.size();
    m.label_counts.resize(n);
    m.theta_unary.resize(n);
    m.phi_unary.resize(n);
    m.theta_pair.resize(n - 1);
    m.phi_pair.resize(n - 1);
    for (index r = 0; r < n; ++r) {
      m.label_counts[r] = inst_.label_counts[chain.nodes[r]];
      m.phi_unary[r] = inst_.phi_unary[chain.nodes[r]];
      m.theta_unary[r].assign(m.label_counts[r], 0.0);
    }
    for (index r = 0; r + 1 < n; ++r) {
      const auto& er = chain.edges[r];
      const index kr = m.label_counts[r], ks = m.label_counts[r + 1];
      m.theta_pair[r].assign(kr * ks, 0.0);
      m.phi_pair[r].resize(kr * ks);
      const auto& global = inst_.phi_pair[er.id];
      for (index xr = 0; xr < kr; ++xr)
        for (index xs = 0; xs < ks; ++xs)
          m.phi_pair[r][xr * ks + xs] = er.reversed ? global[xs * kr + xr] : global[xr * ks + xs];
    }
    chains_.emplace_back(std::move(m));
  }

  tree_node_cover_.resize(inst_.node_count());
  chain_node_cover_.resize(inst_.node_count());
  edge_cover_.resize(inst_.g.edge_count());
  for (index t = 0; t < cover_.trees.size(); ++t) {
    const auto& tree = cover_.trees[t];
    std::map<index, index> local_of;
    for (index v = 0; v < tree.nodes.size(); ++v) {
      local_of.emplace(tree.nodes[v], v);
      tree_node_cover_[tree.nodes[v]].push_back({t, v});
    }
    for (index e = 0; e < tree.edges.size(); ++e) {
      const edge& ge = inst_.g.edge_at(tree.edges[e]);
      edge_cover_[tree.edges[e]].push_back(
          {true, t, e, local_of.at(ge.i), local_of.at(ge.j), false});
    }
  }
  for (index l = 0; l < cover_.chains.size(); ++l) {
    const auto& chain = cover_.chains[l];
    for (index r = 0; r < chain.nodes.size(); ++r)
      chain_node_cover_[chain.nodes[r]].push_back({l, r});
    for (index r = 0; r < chain.edges.size(); ++r) {
      const auto& er = chain.edges[r];
      if (er.reversed)
        edge_cover_[er.id].push_back({false, l, r, r + 1, r, true});
      else
        edge_cover_[er.id].push_back({false, l, r, r, r + 1, false});
    }
  }
}

dual_state dual_solver::initial_state() const {
  dual_state s;
  s.lambda.resize(cover_.trees.size());
  for (index t = 0; t < cover_.trees.size(); ++t) {
    const auto& tree = cover_.trees[t];
    s.lambda[t].unary.resize(tree.nodes.size());
    for (index v = 0; v < tree.nodes.size(); ++v) {
      const index gi = tree.nodes[v];
      const cost share = static_cast<cost>(tree_node_cover_[gi].size());
      s.lambda[t].unary[v].resize(inst_.label_counts[gi]);
      for (index x = 0; x < inst_.label_counts[gi]; ++x)
        s.lambda[t].unary[v][x] = inst_.theta_unary[gi][x] / share;
    }
    s.lambda[t].pair.resize(tree.edges.size());
    for (index e = 0; e < tree.edges.size(); ++e) {
      const index ge = tree.edges[e];
      index tree_count = 0;
      for (const auto& ref : edge_cover_[ge]) tree_count += ref.is_tree ? 1 : 0;
      s.lambda[t].pair[e].resize(inst_.theta_pair[ge].size());
      for (index cfg = 0; cfg < s.lambda[t].pair[e].size(); ++cfg)
        s.lambda[t].pair[e][cfg] = inst_.theta_pair[ge][cfg] / static_cast<cost>(tree_count);
    }
  }
  s.eta.resize(cover_.chains.size());
  for (index l = 0; l < cover_.chains.size(); ++l) {
    const auto& m = chains_[l].model();
    s.eta[l].unary.resize(m.node_count());
    for (index r = 0; r < m.node_count(); ++r) s.eta[l].unary[r].assign(m.label_counts[r], 0.0);
    s.eta[l].pair.resize(m.node_count() - 1);
    for (index r = 0; r + 1 < m.node_count(); ++r)
      s.eta[l].pair[r].assign(m.phi_pair[r].size(), 0.0);
  }
  return s;
}

void dual_solver::set_chain_costs(const dual_state& s) {
  assert(s.eta.size() == chains_.size());
  for (index l = 0; l < chains_.size(); ++l)
    chains_[l].set_linear_costs(s.eta[l].unary, s.eta[l].pair);
}

dual_solver::evaluation dual_solver::evaluate(const dual_state& s) {
  evaluation ev;
  ev.tree_values.resize(cover_.trees.size());
  ev.tree_labelings.resize(cover_.trees.size());
  parallel_for(cover_.trees.size(), threads_, [&](index t) {
    std::tie(ev.tree_values[t], ev.tree_labelings[t]) =
        solve_tree_mrf(cover_.trees[t], inst_.g, inst_.label_counts, s.lambda[t]);
  });
  set_chain_costs(s);
  ev.coupling = solve_bottleneck_coupling(chains_, inst_.zeta, threads_);
  ev.bound = ev.coupling.value;
  for (cost v : ev.tree_values) ev.bound += v;
  return ev;
}

dual_solver::direction dual_solver::supergradient(const evaluation& ev) const {
  direction d;
  d.lambda.resize(cover_.trees.size());
  for (index t = 0; t < cover_.trees.size(); ++t) {
    d.lambda[t].unary.resize(cover_.trees[t].nodes.size());
    for (index v = 0; v < cover_.trees[t].nodes.size(); ++v)
      d.lambda[t].unary[v].assign(inst_.label_counts[cover_.trees[t].nodes[v]], 0.0);
    d.lambda[t].pair.resize(cover_.trees[t].edges.size());
    for (index e = 0; e < cover_.trees[t].edges.size(); ++e)
      d.lambda[t].pair[e].assign(inst_.theta_pair[cover_.trees[t].edges[e]].size(), 0.0);
  }
  d.eta.resize(cover_.chains.size());
  for (index l = 0; l < cover_.chains.size(); ++l) {
    const auto& m = chains_[l].model();
    d.eta[l].unary.resize(m.node_count());
    for (index r = 0; r < m.node_count(); ++r) d.eta[l].unary[r].assign(m.label_counts[r], 0.0);
    d.eta[l].pair.resize(m.node_count() - 1);
    for (index r = 0; r + 1 < m.node_count(); ++r)
      d.eta[l].pair[r].assign(m.phi_pair[r].size(), 0.0);
  }

  // nodes: indicator of each subproblem's argmin label, centered per factor
  for (index i = 0; i < inst_.node_count(); ++i) {
    const index n_cover = tree_node_cover_[i].size() + chain_node_cover_[i].size();
    std::vector<std::pair<index, index>> chosen;  // (label, count)
    auto add_choice = [&](index label) {
      for (auto& [lab, cnt] : chosen)
        if (lab == label) {
          ++cnt;
          return;
        }
      chosen.push_back({label, 1});
    };
    for (auto [t, v] : tree_node_cover_[i]) add_choice(ev.tree_labelings[t][v]);
    for (auto [l, r] : chain_node_cover_[i]) add_choice(ev.coupling.chain_labelings[l][r]);
    if (chosen.size() == 1 && chosen.front().second == n_cover) continue;  // consensus
    for (const auto& [label, cnt] : chosen) {
      const double mean = static_cast<double>(cnt) / static_cast<double>(n_cover);
      for (auto [t, v] : tree_node_cover_[i]) {
        const double val = (ev.tree_labelings[t][v] == label ? 1.0 : 0.0) - mean;
        d.lambda[t].unary[v][label] += val;
        d.norm_sq += val * val;
      }
      for (auto [l, r] : chain_node_cover_[i]) {
        const double val = (ev.coupling.chain_labelings[l][r] == label ? 1.0 : 0.0) - mean;
        d.eta[l].unary[r][label] += val;
        d.norm_sq += val * val;
      }
    }
  }

  // edges: same with configurations in the canonical orientation
  for (index e = 0; e < inst_.g.edge_count(); ++e) {
    const auto& refs = edge_cover_[e];
    const index kj = inst_.label_counts[inst_.g.edge_at(e).j];
    const index ki = inst_.label_counts[inst_.g.edge_at(e).i];
    auto ref_config = [&](const edge_cover_ref& ref) {
      const labeling& lab =
          ref.is_tree ? ev.tree_labelings[ref.sub] : ev.coupling.chain_labelings[ref.sub];
      return std::make_pair(lab[ref.local_i], lab[ref.local_j]);
    };
    std::vector<std::pair<std::pair<index, index>, index>> chosen;  // ((xi,xj), count)
    for (const auto& ref : refs) {
      const auto cfg = ref_config(ref);
      bool found = false;
      for (auto& [c, cnt] : chosen)
        if (c == cfg) {
          ++cnt;
          found = true;
          break;
        }
      if (!found) chosen.push_back({cfg, 1});
    }
    if (chosen.size() == 1 && chosen.front().second == refs.size()) continue;
    for (const auto& [cfg, cnt] : chosen) {
      const double mean = static_cast<double>(cnt) / static_cast<double>(refs.size());
      for (const auto& ref : refs) {
        const double val = (ref_config(ref) == cfg ? 1.0 : 0.0) - mean;
        const index storage =
            ref.transposed ? cfg.second * ki + cfg.first : cfg.first * kj + cfg.second;
        auto& vec = ref.is_tree ? d.lambda[ref.sub].pair[ref.local] : d.eta[ref.sub].pair[ref.local];
        vec[storage] += val;
        d.norm_sq += val * val;
      }
    }
  }
  return d;
}

void dual_solver::apply_step(dual_state& s, const direction& d, double step) {
  auto apply = [step](std::vector<factor_costs>& target, const std::vector<factor_costs>& dir) {
    for (index p = 0; p < target.size(); ++p) {
      for (index v = 0; v < target[p].unary.size(); ++v)
        for (index x = 0; x < target[p].unary[v].size(); ++x)
          target[p].unary[v][x] += step * dir[p].unary[v][x];
      for (index e = 0; e < target[p].pair.size(); ++e)
        for (index c = 0; c < target[p].pair[e].size(); ++c)
          target[p].pair[e][c] += step * dir[p].pair[e][c];
    }
  };
  apply(s.lambda, d.lambda);
  apply(s.eta, d.eta);
}

void dual_solver::aggregate_tree_potentials(const dual_state& s,
                                            std::vector<std::vector<cost>>& unary,
                                            std::vector<std::vector<cost>>& pair) const {
  unary.assign(inst_.node_count(), {});
  for (index i = 0; i < inst_.node_count(); ++i) unary[i].assign(inst_.label_counts[i], 0.0);
  pair.assign(inst_.g.edge_count(), {});
  for (index e = 0; e < inst_.g.edge_count(); ++e)
    pair[e].assign(inst_.theta_pair[e].size(), 0.0);

  for (index i = 0; i < inst_.node_count(); ++i)
    for (auto [t, v] : tree_node_cover_[i])
      for (index x = 0; x < unary[i].size(); ++x) unary[i][x] += s.lambda[t].unary[v][x];
  for (index e = 0; e < inst_.g.edge_count(); ++e) {
    const index ki = inst_.label_counts[inst_.g.edge_at(e).i];
    const index kj = inst_.label_counts[inst_.g.edge_at(e).j];
    for (const auto& ref : edge_cover_[e]) {
      if (!ref.is_tree) continue;
      for (index xi = 0; xi < ki; ++xi)
        for (index xj = 0; xj < kj; ++xj)
          pair[e][xi * kj + xj] += s.lambda[ref.sub].pair[ref.local][xi * kj + xj];
    }
  }
}

double dual_solver::reparameterization_residual(const dual_state& s) const {
  double residual = 0.0;
  for (index i = 0; i < inst_.node_count(); ++i)
    for (index x = 0; x < inst_.label_counts[i]; ++x) {
      cost sum = 0.0;
      for (auto [t, v] : tree_node_cover_[i]) sum += s.lambda[t].unary[v][x];
      for (auto [l, r] : chain_node_cover_[i]) sum += s.eta[l].unary[r][x];
      const cost target = inst_.theta_unary[i][x];
      if (target == infinity || sum == infinity) {
        if (target != sum) return infinity;
      } else {
        residual = std::max(residual, std::abs(sum - target));
      }
    }
  for (index e = 0; e < inst_.g.edge_count(); ++e) {
    const index ki = inst_.label_counts[inst_.g.edge_at(e).i];
    const index kj = inst_.label_counts[inst_.g.edge_at(e).j];
    for (index xi = 0; xi < ki; ++xi)
      for (index xj = 0; xj < kj; ++xj) {
        cost sum = 0.0;
        for (const auto& ref : edge_cover_[e]) {
          const index storage = ref.transposed ? xj * ki + xi : xi * kj + xj;
          sum += ref.is_tree ? s.lambda[ref.sub].pair[ref.local][storage]
                             : s.eta[ref.sub].pair[ref.local][storage];
        }
        const cost target = inst_.theta_pair[e][xi * kj + xj];
        if (target == infinity || sum == infinity) {
          if (target != sum) return infinity;
        } else {
          residual = std::max(residual, std::abs(sum - target));
        }
      }
  }
  return residual;
}

labeling dual_solver::try_round(const dual_state& s, node_order_kind order) const {
  std::vector<std::vector<cost>> unary, pair;
  aggregate_tree_potentials(s, unary, pair);
  try {
    return primal_round(inst_.g, inst_.label_counts, unary, pair,
                        make_node_order(inst_.g, order));
  } catch (const infeasible_error&) {
    return {};
  }
}

dual_report dual_solver::ascend(const dual_config& cfg) {
  dual_report rep;
  dual_state s = initial_state();
  rep.best_duals = s;  // a valid state even when no iteration runs

  auto consider_primal = [&](const labeling& x) {
    if (x.empty()) return;
    const cost energy = evaluate_energy_optimal_b(inst_, x);
    if (energy < rep.best_primal_energy) {
      rep.best_primal_energy = energy;
      rep.best_primal = x;
    }
  };

  cost window_best = -infinity;
  double alpha = cfg.alpha;
  index since_improvement = 0;
  for (index iter = 0; iter < cfg.max_iters; ++iter) {
    const evaluation ev = evaluate(s);
    ++rep.iterations;
    if (ev.bound > rep.lower_bound + cfg.stall_tol)
      since_improvement = 0;
    else
      ++since_improvement;
    if (ev.bound > rep.lower_bound) {
      rep.lower_bound = ev.bound;
      rep.tree_labelings = ev.tree_labelings;
      rep.chain_labelings = ev.coupling.chain_labelings;
      rep.b_star = ev.coupling.b_star;
      rep.best_duals = s;
    }

    consider_primal(try_round(s, cfg.order));
    // a tree argmin spanning every node is itself a feasible labeling
    for (index t = 0; t < cover_.trees.size(); ++t)
      if (cover_.trees[t].nodes.size() == inst_.node_count()) {
        labeling full(inst_.node_count());
        for (index v = 0; v < cover_.trees[t].nodes.size(); ++v)
          full[cover_.trees[t].nodes[v]] = ev.tree_labelings[t][v];
        if (linear_energy(inst_, full) < infinity) consider_primal(full);
      }

    const direction dir = supergradient(ev);
    double step = 0.0;
    bool stop = dir.norm_sq == 0.0;  // all subproblems agree: dual optimum reached
    if (!stop && rep.best_primal_energy < infinity) {
      const double gap = (rep.best_primal_energy - rep.lower_bound) /
                         std::max(1.0, std::abs(rep.lower_bound));
      if (gap < cfg.tol) stop = true;
    }
    if (!stop && iter > 0 && iter % cfg.stall_window == 0) {
      if (rep.lower_bound - window_best < cfg.stall_tol) stop = true;
      window_best = rep.lower_bound;
    }
    if (!stop) {
      // a loose primal target keeps Polyak steps overshooting; shrink alpha
      // whenever the best bound flatlines
      if (since_improvement >= cfg.alpha_patience) {
        alpha = std::max(alpha * 0.5, cfg.alpha_min);
        since_improvement = 0;
      }
      if (rep.best_primal_energy < infinity && rep.best_primal_energy > ev.bound)
        step = alpha * (rep.best_primal_energy - ev.bound) / dir.norm_sq;
      else
        step = cfg.gamma0 / std::sqrt(static_cast<double>(iter + 1));
      apply_step(s, dir, step);
    }
    rep.trace.push_back({iter, ev.bound, rep.lower_bound, step});
    if (stop) break;
  }
  return rep;
}

}  // namespace bmrf
