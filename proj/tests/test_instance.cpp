#include <algorithm>
#include <cmath>

#include "bmrf/brute_force.hpp"
#include "bmrf/generator.hpp"
#include "bmrf/instance.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bmrf;
using bmrf_test::for_each_labeling;
using bmrf_test::zero_instance;

TEST_CASE("graph canonicalizes and validates edges") {
  graph g(4, {{2, 1}, {0, 3}});
  CHECK(g.edge_at(0).i == 1);
  CHECK(g.edge_at(0).j == 2);
  CHECK_THROWS_AS(graph(2, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(graph(2, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(graph(2, {{0, 2}}), std::invalid_argument);
}

TEST_CASE("path and grid detection") {
  CHECK(graph(3, {{0, 1}, {1, 2}}).is_path());
  CHECK(graph(1, {}).is_path());
  CHECK(!graph(3, {{0, 1}, {0, 2}}).is_path());
  CHECK(!graph(3, {{0, 1}}).is_path());

  const auto shape = make_random_grid(3, 4, 2, 7).g.grid_shape();
  REQUIRE(shape.has_value());
  CHECK(shape->first == 3);
  CHECK(shape->second == 4);
  CHECK(graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}).grid_shape().has_value());  // 1x5
  CHECK(!graph(3, {{0, 1}, {0, 2}, {1, 2}}).grid_shape().has_value());
}

TEST_CASE("zeta kinds") {
  const auto zero = bottleneck_cost::zero();
  CHECK(zero(123.0) == 0.0);
  const auto lin = bottleneck_cost::linear(0.5);
  CHECK(lin(3.0) == 1.5);
  CHECK_THROWS_AS(bottleneck_cost::linear(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(bottleneck_cost::linear(infinity), std::invalid_argument);

  const auto table = bottleneck_cost::table({{1.0, 5.0}, {2.0, 3.0}, {4.0, 9.0}});
  CHECK(table(1.0) == 5.0);
  CHECK(table(1.5) == 3.0);  // rounds up to the next key
  CHECK(table(4.0) == 9.0);
  CHECK(table(0.0) == 5.0);
  CHECK_THROWS_AS(table(4.5), std::logic_error);
  CHECK_THROWS_AS(bottleneck_cost::table({{2.0, 1.0}, {2.0, 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(bottleneck_cost::table({}), std::invalid_argument);
}

TEST_CASE("evaluate_energy on the all-zero instance") {
  const auto inst = zero_instance(graph(3, {{0, 1}, {1, 2}}), {2, 2, 2});
  CHECK(evaluate_energy(inst, {0, 1, 0}) == 0.0);
  CHECK(bottleneck_of(inst, {1, 1, 1}) == 0.0);
  CHECK_THROWS_AS(evaluate_energy(inst, {0, 1}), std::invalid_argument);
}

TEST_CASE("counterexample energies match the analytic values") {
  const auto inst = make_counterexample(1.0, 0.5);
  CHECK(evaluate_energy(inst, {0, 0, 0}) == 1.5);
  CHECK(evaluate_energy(inst, {1, 1, 1}) == 1.5);
  CHECK(bottleneck_of(inst, {1, 1, 1}) == 1.5);
  CHECK(bottleneck_of(inst, {0, 0, 0}) == 1.5);
  CHECK(evaluate_energy(inst, {0, 1, 0}) == infinity);
}

TEST_CASE("energy equals independent term-by-term summation on random instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = make_random_tree(4, 3, seed);
    for_each_labeling(inst.label_counts, [&](const labeling& x) {
      cost linear = 0.0, b = -infinity;
      for (index i = 0; i < inst.node_count(); ++i) {
        linear += inst.theta_unary[i][x[i]];
        b = std::max(b, inst.phi_unary[i][x[i]]);
      }
      for (index e = 0; e < inst.g.edge_count(); ++e) {
        const auto& ed = inst.g.edge_at(e);
        const index cfg = x[ed.i] * inst.label_counts[ed.j] + x[ed.j];
        linear += inst.theta_pair[e][cfg];
        b = std::max(b, inst.phi_pair[e][cfg]);
      }
      CHECK(bottleneck_of(inst, x) == b);
      if (linear == infinity)
        CHECK(evaluate_energy(inst, x) == infinity);
      else
        CHECK(evaluate_energy(inst, x) == doctest::Approx(linear + inst.zeta(b)).epsilon(1e-12));
    });
  }
}

TEST_CASE("energy decomposes into linear part plus zeta of the bottleneck") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = make_random_chain(4, 3, seed);
    for_each_labeling(inst.label_counts, [&](const labeling& x) {
      const cost expected = linear_energy(inst, x) + inst.zeta(bottleneck_of(inst, x));
      if (expected == infinity)
        CHECK(evaluate_energy(inst, x) == infinity);
      else
        CHECK(evaluate_energy(inst, x) == expected);
    });
  }
}

TEST_CASE("restrict_to_bottleneck") {
  const auto inst = make_counterexample(1.0, 0.5);
  const auto values = inst.bottleneck_values();
  CHECK(values == std::vector<cost>{0.0, 1.0, 1.5});

  SUBCASE("b at max(B) keeps the instance unchanged") {
    const auto r = restrict_to_bottleneck(inst, values.back());
    CHECK(r.theta_unary == inst.theta_unary);
    CHECK(r.theta_pair == inst.theta_pair);
  }
  SUBCASE("b below min(B) forbids every configuration") {
    const auto r = restrict_to_bottleneck(inst, values.front() - 1.0);
    for (const auto& v : r.theta_unary)
      for (cost c : v) CHECK(c == infinity);
    for (const auto& v : r.theta_pair)
      for (cost c : v) CHECK(c == infinity);
  }
  SUBCASE("b = a kills both diagonal labelings") {
    // each of (0,0,0) and (1,1,1) uses one arc of value a + eps
    const auto r = restrict_to_bottleneck(inst, 1.0);
    int feasible = 0;
    for_each_labeling(r.label_counts, [&](const labeling& x) {
      if (linear_energy(r, x) < infinity) ++feasible;
    });
    CHECK(feasible == 0);
    CHECK(linear_energy(restrict_to_bottleneck(inst, 1.5), {0, 0, 0}) == 0.0);
  }
}

TEST_CASE("restriction is monotone in b") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = make_random_chain(4, 3, seed);
    const auto values = inst.bottleneck_values();
    for (index k = 0; k + 1 < values.size(); k += 2) {
      const auto lo = restrict_to_bottleneck(inst, values[k]);
      const auto hi = restrict_to_bottleneck(inst, values[k + 1]);
      for_each_labeling(inst.label_counts, [&](const labeling& x) {
        if (linear_energy(lo, x) < infinity) CHECK(linear_energy(hi, x) < infinity);
      });
    }
  }
}

TEST_CASE("zero zeta at full bottleneck budget equals plain MAP") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto inst = make_random_chain(4, 3, seed);
    inst.zeta = bottleneck_cost::zero();
    const auto full = brute_force(inst);
    cost map_opt = infinity;
    for_each_labeling(inst.label_counts, [&](const labeling& x) {
      map_opt = std::min(map_opt, linear_energy(inst, x));
    });
    if (!full.feasible)
      CHECK(map_opt == infinity);
    else
      CHECK(full.energy == map_opt);
  }
}

TEST_CASE("validate rejects malformed instances") {
  auto inst = make_counterexample(1.0, 0.5);
  SUBCASE("phi must be finite") {
    inst.phi_unary[0][0] = infinity;
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
  }
  SUBCASE("negative infinity is rejected") {
    inst.theta_unary[1][0] = -infinity;
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
  }
  SUBCASE("shape mismatch") {
    inst.theta_unary[2].push_back(0.0);
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
  }
}
