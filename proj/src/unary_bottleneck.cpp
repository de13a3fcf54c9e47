#include "bmrf/unary_bottleneck.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace bmrf {

unary_bottleneck_solver::unary_bottleneck_solver(std::vector<std::vector<cost>> phi_unary)
    : phi_(std::move(phi_unary)) {
  index total = 0;
  for (const auto& v : phi_) total += v.size();
  sorted_items_.reserve(total);
  for (index i = 0; i < phi_.size(); ++i) {
    if (phi_[i].empty()) throw std::invalid_argument("unary_bottleneck: node without labels");
    for (index x = 0; x < phi_[i].size(); ++x) {
      assert(std::isfinite(phi_[i][x]));
      sorted_items_.push_back({i, x, phi_[i][x]});
    }
  }
  std::stable_sort(sorted_items_.begin(), sorted_items_.end(),
                   [](const item& a, const item& b) { return a.phi < b.phi; });
  ++sort_count_;
}

bottleneck_profile unary_bottleneck_solver::solve(
    const std::vector<std::vector<cost>>& theta_unary) const {
  assert(theta_unary.size() == phi_.size());
  ++sweep_count_;

  const index n = phi_.size();
  std::vector<cost> best(n, infinity);
  std::vector<char> covered(n, 0);
  index covered_count = 0;
  index infinite_count = 0;  // covered nodes whose best label is still forbidden
  cost finite_sum = 0.0;

  bottleneck_profile profile;
  for (const auto& it : sorted_items_) {
    assert(theta_unary[it.node].size() == phi_[it.node].size());
    const cost theta = theta_unary[it.node][it.label];
    if (!covered[it.node]) {
      covered[it.node] = 1;
      ++covered_count;
      best[it.node] = theta;
      if (theta == infinity)
        ++infinite_count;
      else
        finite_sum += theta;
    } else if (theta < best[it.node]) {
      if (best[it.node] == infinity)
        --infinite_count;
      else
        finite_sum -= best[it.node];
      best[it.node] = theta;
      finite_sum += theta;
    }
    if (covered_count == n && infinite_count == 0) profile.record(it.phi, finite_sum);
  }

  if (profile.empty())
    throw infeasible_error("unary bottleneck labeling: a node has no finite-theta label");
  return profile;
}

labeling unary_bottleneck_solver::extract_labeling(
    const std::vector<std::vector<cost>>& theta_unary, cost b_star) const {
  const index n = phi_.size();
  labeling x(n);
  for (index i = 0; i < n; ++i) {
    cost best = infinity;
    index arg = phi_[i].size();
    for (index l = 0; l < phi_[i].size(); ++l)
      if (phi_[i][l] <= b_star && theta_unary[i][l] < best) {
        best = theta_unary[i][l];
        arg = l;
      }
    if (arg == phi_[i].size())
      throw infeasible_error("unary bottleneck labeling: node infeasible at b*");
    x[i] = arg;
  }
  return x;
}

bottleneck_profile solve_unary_bottleneck(const bottleneck_instance& inst) {
  if (inst.g.edge_count() != 0)
    throw std::invalid_argument("solve_unary_bottleneck: instance must be edge-free");
  unary_bottleneck_solver solver(inst.phi_unary);
  return solver.solve(inst.theta_unary);
}

}  // namespace bmrf
