#include <cstdlib>
#include <sstream>

#include "bmrf/generator.hpp"
#include "bmrf/instance_io.hpp"
#include "doctest.h"

using namespace bmrf;

namespace {

bottleneck_instance roundtrip(const bottleneck_instance& inst) {
  std::stringstream buffer;
  save_instance(inst, buffer);
  return load_instance(buffer);
}

void check_bitwise_equal(const bottleneck_instance& a, const bottleneck_instance& b) {
  CHECK(a.node_count() == b.node_count());
  CHECK(a.label_counts == b.label_counts);
  CHECK(a.g.edges().size() == b.g.edges().size());
  for (index e = 0; e < a.g.edge_count(); ++e) CHECK(a.g.edge_at(e) == b.g.edge_at(e));
  CHECK(a.theta_unary == b.theta_unary);
  CHECK(a.theta_pair == b.theta_pair);
  CHECK(a.phi_unary == b.phi_unary);
  CHECK(a.phi_pair == b.phi_pair);
  CHECK(a.zeta == b.zeta);
}

}  // namespace

TEST_CASE("minimal one-node file") {
  std::stringstream in(
      "# tiny instance\n"
      "BMRF 1\n"
      "nodes 1\n"
      "1\n"
      "edges 0\n"
      "theta_unary\n0.25\n"
      "theta_pairwise\n"
      "phi_unary\n2\n"
      "phi_pairwise\n"
      "zeta zero\n");
  const auto inst = load_instance(in);
  CHECK(inst.node_count() == 1);
  CHECK(inst.theta_unary[0][0] == 0.25);
  CHECK(inst.phi_unary[0][0] == 2.0);
  CHECK(inst.zeta.cost_kind() == bottleneck_cost::kind::zero);
}

TEST_CASE("shipped counterexample file equals the generator output") {
  const char* data_dir = std::getenv("BMRF_DATA");
  REQUIRE(data_dir != nullptr);
  const auto from_file = load_instance(std::string(data_dir) + "/counterexample.bmrf");
  check_bitwise_equal(from_file, make_counterexample(1.0, 0.5));
}

TEST_CASE("random instances round-trip bit-exactly") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = make_random_grid(2, 3, 3, seed);
    // exercise awkward values: subnormals, negatives, signed zero, table zeta
    inst.theta_unary[0][0] = -0.0;
    inst.theta_unary[0][1] = 5e-324;
    inst.theta_unary[1][0] = -1.0 / 3.0;
    inst.theta_unary[1][1] = 1e308;
    if (seed % 2 == 0) inst.zeta = bottleneck_cost::table({{0.25, 1.0 / 3.0}, {1.0, 0.125}});
    check_bitwise_equal(inst, roundtrip(inst));
  }
}

TEST_CASE("infinity markers survive the round-trip") {
  auto inst = make_counterexample(1.0, 0.5);
  const auto r = roundtrip(inst);
  CHECK(r.theta_pair[0][1] == infinity);
  CHECK(r.theta_pair[0][2] == infinity);
}

TEST_CASE("parse errors carry line and column") {
  auto expect_error = [](const std::string& text, std::size_t line) {
    std::stringstream in(text);
    try {
      load_instance(in);
      FAIL("expected parse_error");
    } catch (const parse_error& ex) {
      CHECK(ex.line() == line);
    }
  };
  expect_error("BMRF 2\n", 1);
  expect_error("BMRF 1\nnodes -1\n", 2);
  expect_error("BMRF 1\nnodes 1\n0\n", 3);  // zero label count
  expect_error(
      "BMRF 1\nnodes 1\n1\nedges 0\ntheta_unary\n-inf\ntheta_pairwise\nphi_unary\n0\n"
      "phi_pairwise\nzeta zero\n",
      6);
  expect_error(
      "BMRF 1\nnodes 1\n1\nedges 0\ntheta_unary\n0\ntheta_pairwise\nphi_unary\ninf\n"
      "phi_pairwise\nzeta zero\n",
      9);  // phi must be finite
  expect_error(
      "BMRF 1\nnodes 1\n1\nedges 0\ntheta_unary\n0\ntheta_pairwise\nphi_unary\n0\n"
      "phi_pairwise\nzeta table 2\n3 1\n2 1\n",
      11);  // keys not increasing
}

TEST_CASE("truncated file reports end of input") {
  std::stringstream in("BMRF 1\nnodes 2\n2 2\nedges 1\n0 1\ntheta_unary\n0 0\n");
  CHECK_THROWS_AS(load_instance(in), parse_error);
}
