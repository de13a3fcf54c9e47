#include <algorithm>

#include "bmrf/brute_force.hpp"
#include "bmrf/chain_bottleneck.hpp"
#include "bmrf/generator.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace bmrf;
using bmrf_test::for_each_labeling;

TEST_CASE("counterexample profile has a single entry at a+eps") {
  const auto inst = make_counterexample(1.0, 0.5);
  chain_solver solver(make_chain_model(inst));
  const auto& profile = solver.solve();
  REQUIRE(profile.size() == 1);
  CHECK(profile.entries()[0].b == 1.5);
  CHECK(profile.entries()[0].c == 0.0);
  CHECK(profile.value_at(1.0) == infinity);

  const auto best = select_optimal_bottleneck(profile, inst.zeta);
  CHECK(best.b == 1.5);
  CHECK(best.objective == 1.5);

  const auto x = solver.extract_labeling(1.5);
  CHECK((x == labeling{0, 0, 0} || x == labeling{1, 1, 1}));
  CHECK(linear_energy(inst, x) == 0.0);
}

TEST_CASE("single label per node gives a one-entry profile") {
  auto inst = bmrf_test::zero_instance(graph(3, {{0, 1}, {1, 2}}), {1, 1, 1});
  inst.theta_unary = {{1.0}, {2.0}, {3.0}};
  inst.phi_unary = {{0.5}, {4.0}, {0.25}};
  inst.phi_pair = {{2.0}, {1.0}};
  chain_solver solver(make_chain_model(inst));
  const auto& profile = solver.solve();
  REQUIRE(profile.size() == 1);
  CHECK(profile.entries()[0].b == 4.0);  // max phi along the only labeling
  CHECK(profile.entries()[0].c == 6.0);
  CHECK(solver.extract_labeling(4.0) == labeling{0, 0, 0});
}

TEST_CASE("chain optimum equals brute force on random chains") {
  index checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = make_random_chain(2 + seed % 5, 1 + seed % 4, seed);
    const auto oracle = brute_force(inst);
    try {
      chain_solver solver(make_chain_model(inst));
      const auto best = select_optimal_bottleneck(solver.solve(), inst.zeta);
      REQUIRE(oracle.feasible);
      CHECK(best.objective ==
            doctest::Approx(oracle.energy).epsilon(1e-9));
      // the labeling at b* realizes the profile value
      const auto x = solver.extract_labeling(best.b);
      CHECK(bottleneck_of(inst, x) <= best.b);
      CHECK(linear_energy(inst, x) == doctest::Approx(best.c).epsilon(1e-9));
      ++checked;
    } catch (const infeasible_error&) {
      CHECK(!oracle.feasible);
    }
  }
  CHECK(checked >= 150);  // forbidden entries rarely make whole chains infeasible
}

TEST_CASE("profile c never increases in b") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto inst = make_random_chain(5, 4, seed);
    try {
      chain_solver solver(make_chain_model(inst));
      const auto& entries = solver.solve().entries();
      for (index k = 1; k < entries.size(); ++k) {
        CHECK(entries[k].b > entries[k - 1].b);
        CHECK(entries[k].c <= entries[k - 1].c);
      }
    } catch (const infeasible_error&) {
    }
  }
}

TEST_CASE("arc sort is reused across solves with different linear costs") {
  const auto inst = make_random_chain(4, 3, 5);
  chain_solver solver(make_chain_model(inst));
  (void)solver.solve();
  auto unary = inst.theta_unary;
  for (auto& row : unary)
    for (auto& v : row) v *= 2.0;
  auto pair = solver.model().theta_pair;
  solver.set_linear_costs(unary, pair);
  (void)solver.solve();
  CHECK(solver.sort_count() == 1);
  CHECK(solver.solve_count() == 2);
}

TEST_CASE("distance updates stay within the quadratic envelope") {
  // adversarial omega order: cheap late arcs upstream force long re-updates
  auto inst = bmrf_test::zero_instance(graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}),
                                       {2, 2, 2, 2, 2, 2});
  splitmix64 rng(99);
  for (auto& row : inst.phi_pair)
    for (auto& v : row) v = rng.uniform();
  for (index i = 0; i < inst.node_count(); ++i)
    for (index x = 0; x < 2; ++x) {
      inst.phi_unary[i][x] = 2.0 - 0.1 * static_cast<cost>(i);  // upstream arcs arrive last
      inst.theta_unary[i][x] = rng.uniform();
    }
  chain_solver solver(make_chain_model(inst));
  (void)solver.solve();
  const std::uint64_t arcs = solver.dag().arc_count();
  CHECK(solver.distance_updates() <= arcs * arcs);
}

TEST_CASE("fully forbidden chain reports infeasibility") {
  auto inst = bmrf_test::zero_instance(graph(2, {{0, 1}}), {2, 2});
  inst.theta_pair[0] = {infinity, infinity, infinity, infinity};
  chain_solver solver(make_chain_model(inst));
  CHECK_THROWS_AS(solver.solve(), infeasible_error);
}

TEST_CASE("extraction below the feasibility threshold fails") {
  const auto inst = make_counterexample(1.0, 0.5);
  chain_solver solver(make_chain_model(inst));
  solver.solve();
  CHECK_THROWS_AS(solver.extract_labeling(1.0), infeasible_error);
}

TEST_CASE("the whole profile matches restricted brute force at every threshold") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = make_random_chain(2 + seed % 4, 1 + seed % 3, seed * 3 + 2);
    bottleneck_profile profile;
    try {
      chain_solver solver(make_chain_model(inst));
      profile = solver.solve();
      for (cost b : inst.bottleneck_values()) {
        // oracle: cheapest linear energy among labelings feasible at b
        cost expected = infinity;
        bmrf_test::for_each_labeling(inst.label_counts, [&](const labeling& x) {
          if (bottleneck_of(inst, x) <= b) expected = std::min(expected, linear_energy(inst, x));
        });
        if (expected == infinity)
          CHECK(profile.value_at(b) == infinity);
        else
          CHECK(profile.value_at(b) == doctest::Approx(expected).epsilon(1e-9));
      }
      // every feasible threshold admits a consistent extraction
      for (const auto& entry : profile.entries()) {
        const auto x = solver.extract_labeling(entry.b);
        CHECK(bottleneck_of(inst, x) <= entry.b);
        CHECK(linear_energy(inst, x) == doctest::Approx(entry.c).epsilon(1e-9));
      }
    } catch (const infeasible_error&) {
      CHECK(!brute_force(inst).feasible);
    }
  }
}
