#include "bmrf/brute_force.hpp"
#include "bmrf/chain_bottleneck.hpp"
#include "bmrf/generator.hpp"
#include "bmrf/greedy.hpp"
#include "bmrf/profile.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bmrf;

TEST_CASE("brute force on the counterexample") {
  const auto result = brute_force(make_counterexample(1.0, 0.5));
  REQUIRE(result.feasible);
  CHECK(result.energy == 1.5);
  CHECK(result.x == labeling{0, 0, 0});  // lexicographic tie-break
  CHECK(result.b == 1.5);
}

TEST_CASE("brute force on the all-zero instance") {
  const auto inst = bmrf_test::zero_instance(graph(3, {{0, 1}, {1, 2}}), {2, 2, 2});
  const auto result = brute_force(inst);
  CHECK(result.energy == 0.0);
  CHECK(result.x == labeling{0, 0, 0});
}

TEST_CASE("brute force respects the label space cap") {
  const auto inst = make_random_grid(3, 3, 3, 1);
  CHECK_THROWS_AS(brute_force(inst, 1000), std::invalid_argument);
}

TEST_CASE("brute force minimizes over the admissible bottleneck values") {
  // with a decreasing table zeta the best b can exceed the labeling's own max
  auto inst = bmrf_test::zero_instance(graph(1, {}), {2});
  inst.theta_unary[0] = {0.0, 9.0};
  inst.phi_unary[0] = {1.0, 2.0};
  inst.zeta = bottleneck_cost::table({{1.0, 5.0}, {2.0, 3.0}});
  const auto result = brute_force(inst);
  CHECK(result.energy == 3.0);  // label 0, b = 2 with zeta 3 beats zeta(1) = 5
  CHECK(result.x == labeling{0});
}

TEST_CASE("generators are deterministic per seed") {
  for (const char* kind : {"random_chain(5,3)", "random_grid(2,3,2)", "random_tree(6,2)"}) {
    const auto a = generate(kind, 42);
    const auto b = generate(kind, 42);
    CHECK(a.theta_unary == b.theta_unary);
    CHECK(a.theta_pair == b.theta_pair);
    CHECK(a.phi_unary == b.phi_unary);
    CHECK(a.phi_pair == b.phi_pair);
    CHECK(a.zeta == b.zeta);
    const auto c = generate(kind, 43);
    CHECK(a.theta_unary != c.theta_unary);
  }
  CHECK(generate("random_chain(1,1)", 7).node_count() == 1);
  CHECK_THROWS_AS(generate("mystery(1)", 0), std::invalid_argument);
}

TEST_CASE("fully seeded greedy returns the seeds unchanged") {
  const auto inst = make_random_chain(4, 3, 2);
  std::vector<std::optional<index>> seeds = {index(2), index(0), index(1), index(2)};
  CHECK(greedy_track(inst, seeds) == labeling{2, 0, 1, 2});
}

TEST_CASE("greedy is exact on a chain with consistent potentials") {
  // zero pairwise: the per-node argmin is the global optimum
  auto inst = bmrf_test::zero_instance(graph(4, {{0, 1}, {1, 2}, {2, 3}}), {3, 3, 3, 3});
  splitmix64 rng(17);
  for (auto& row : inst.theta_unary)
    for (auto& v : row) v = rng.uniform();
  std::vector<std::optional<index>> seeds(4);
  index seed_label = 0;
  for (index l = 1; l < 3; ++l)
    if (inst.theta_unary[0][l] < inst.theta_unary[0][seed_label]) seed_label = l;
  seeds[0] = seed_label;
  const auto greedy = greedy_track(inst, seeds);
  chain_solver solver(make_chain_model(inst));
  const auto best = select_optimal_bottleneck(solver.solve(), inst.zeta);
  CHECK(evaluate_energy(inst, greedy) == doctest::Approx(best.objective).epsilon(1e-9));
}

TEST_CASE("adversarial chain: greedy falls into a local optimum") {
  // a cheap first step at node 1 forces a huge edge cost afterwards
  auto inst = bmrf_test::zero_instance(graph(3, {{0, 1}, {1, 2}}), {1, 2, 2});
  inst.theta_unary[1] = {0.0, 0.1};
  inst.theta_pair[0] = {0.0, 0.1};           // edge (0,1): seed label 0 to either
  inst.theta_pair[1] = {10.0, 10.0, 0.0, 0.0};  // edge (1,2): label 0 at node 1 is a trap
  inst.zeta = bottleneck_cost::zero();

  std::vector<std::optional<index>> seeds(3);
  seeds[0] = index(0);
  const auto greedy = greedy_track(inst, seeds);
  CHECK(greedy == labeling{0, 0, 0});  // the trap
  const cost greedy_energy = evaluate_energy(inst, greedy);

  chain_solver solver(make_chain_model(inst));
  const auto best = select_optimal_bottleneck(solver.solve(), inst.zeta);
  CHECK(best.objective == doctest::Approx(0.2));
  CHECK(greedy_energy > best.objective);  // strictly worse
}

TEST_CASE("greedy reports unreachable nodes") {
  // disconnected graph: node 2 cannot be reached from the seed
  auto inst = bmrf_test::zero_instance(graph(3, {{0, 1}}), {2, 2, 2});
  std::vector<std::optional<index>> seeds(3);
  seeds[0] = index(0);
  CHECK_THROWS_AS(greedy_track(inst, seeds), infeasible_error);
}
