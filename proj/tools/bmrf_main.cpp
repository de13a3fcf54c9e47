#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bmrf/brute_force.hpp"
#include "bmrf/chain_bottleneck.hpp"
#include "bmrf/generator.hpp"
#include "bmrf/greedy.hpp"
#include "bmrf/instance.hpp"
#include "bmrf/instance_io.hpp"
#include "bmrf/profile.hpp"
#include "bmrf/solver.hpp"
#include "bmrf/unary_bottleneck.hpp"

namespace {

using json = nlohmann::ordered_json;

struct solve_options {
  std::string method;
  std::string input;
  std::string trace_file;
  bmrf::index max_iters = 1000;
  double tol = 1e-6;
  std::string order = "row-major";
  bmrf::index threads = 1;
  long long seed_node = 0;
  long long seed_label = -1;
};

json labeling_to_json(const bmrf::labeling& x) {
  json arr = json::array();
  for (bmrf::index l : x) arr.push_back(static_cast<std::uint64_t>(l));
  return arr;
}

bmrf::index default_threads() {
  if (const char* env = std::getenv("BMRF_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<bmrf::index>(v);
  }
  return 1;
}

int run_solve(const solve_options& opt) {
  const bmrf::bottleneck_instance inst = bmrf::load_instance(opt.input);
  json record;
  record["method"] = opt.method;

  const auto start = std::chrono::steady_clock::now();
  bmrf::labeling x;
  double energy = 0;
  bmrf::index iterations = 0;
  std::optional<double> lower_bound;
  std::optional<double> gap;
  std::vector<bmrf::iteration_record> trace;

  if (opt.method == "brute") {
    const auto r = bmrf::brute_force(inst);
    if (!r.feasible) throw bmrf::infeasible_error("instance has no feasible labeling");
    x = r.x;
    energy = r.energy;
    gap = 0.0;
  } else if (opt.method == "unary") {
    if (inst.g.edge_count() != 0)
      throw std::runtime_error("method 'unary' requires an edge-free instance");
    bmrf::unary_bottleneck_solver solver(inst.phi_unary);
    const auto profile = solver.solve(inst.theta_unary);
    const auto best = bmrf::select_optimal_bottleneck(profile, inst.zeta);
    x = solver.extract_labeling(inst.theta_unary, best.b);
    energy = best.objective;
    gap = 0.0;
  } else if (opt.method == "chain") {
    if (!inst.g.is_path()) throw std::runtime_error("method 'chain' requires a path graph");
    bmrf::chain_solver solver(bmrf::make_chain_model(inst));
    const auto best = bmrf::select_optimal_bottleneck(solver.solve(), inst.zeta);
    x = solver.extract_labeling(best.b);
    energy = best.objective;
    gap = 0.0;
  } else if (opt.method == "greedy") {
    std::vector<std::optional<bmrf::index>> seeds(inst.node_count());
    const auto node = static_cast<bmrf::index>(opt.seed_node);
    if (node >= inst.node_count()) throw std::runtime_error("seed node out of range");
    bmrf::index label = 0;
    if (opt.seed_label >= 0) {
      label = static_cast<bmrf::index>(opt.seed_label);
    } else {
      for (bmrf::index l = 1; l < inst.label_counts[node]; ++l)
        if (inst.theta_unary[node][l] < inst.theta_unary[node][label]) label = l;
    }
    seeds[node] = label;
    x = bmrf::greedy_track(inst, seeds);
    energy = bmrf::evaluate_energy_optimal_b(inst, x);
  } else {  // decomp
    bmrf::dual_config cfg;
    cfg.max_iters = opt.max_iters;
    cfg.tol = opt.tol;
    cfg.threads = opt.threads;
    cfg.order = opt.order == "bfs" ? bmrf::node_order_kind::bfs : bmrf::node_order_kind::row_major;
    const auto r = bmrf::solve_decomposition(inst, cfg);
    x = r.primal;
    energy = r.primal_energy;
    iterations = r.report.iterations;
    lower_bound = r.report.lower_bound;
    gap = (energy - *lower_bound) / std::max(1.0, std::abs(*lower_bound));
    trace = r.report.trace;
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;

  record["energy"] = energy;
  if (lower_bound) record["lower_bound"] = *lower_bound;
  if (gap)
    record["gap"] = *gap;
  else
    record["gap"] = nullptr;
  record["bottleneck"] = bmrf::bottleneck_of(inst, x);
  record["labeling"] = labeling_to_json(x);
  record["wall_time_ms"] =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count();
  record["iterations"] = static_cast<std::uint64_t>(iterations);
  std::cout << record.dump() << "\n";

  if (!opt.trace_file.empty()) {
    if (opt.method != "decomp") {
      std::cerr << "note: --trace is only produced by method 'decomp'\n";
    } else {
      std::ofstream out(opt.trace_file);
      if (!out) throw std::runtime_error("cannot open trace file '" + opt.trace_file + "'");
      for (const auto& it : trace) {
        json rec;
        rec["iter"] = static_cast<std::uint64_t>(it.iter);
        rec["bound"] = it.bound;
        rec["best_bound"] = it.best_bound;
        rec["step"] = it.step;
        out << rec.dump() << "\n";
      }
    }
  }
  return 0;
}

int run_check(const std::string& input) {
  try {
    const bmrf::bottleneck_instance inst = bmrf::load_instance(input);
    // every solver needs zeta defined on all of B
    const auto values = inst.bottleneck_values();
    if (!values.empty()) inst.zeta(values.back());
  } catch (const std::exception& ex) {
    std::cerr << "invalid: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAP inference in MRFs with bottleneck potentials"};
  app.require_subcommand(1);

  solve_options opt;
  opt.threads = default_threads();
  CLI::App* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("--method", opt.method, "solver")
      ->required()
      ->check(CLI::IsMember({"brute", "unary", "chain", "decomp", "greedy"}));
  solve->add_option("--input", opt.input, "instance file")->required();
  solve->add_option("--max-iters", opt.max_iters, "dual iterations (decomp)");
  solve->add_option("--tol", opt.tol, "relative gap tolerance (decomp)");
  solve->add_option("--order", opt.order, "rounding order (decomp)")
      ->check(CLI::IsMember({"row-major", "bfs"}));
  solve->add_option("--trace", opt.trace_file, "write per-iteration records (decomp)");
  solve->add_option("--threads", opt.threads, "worker threads (decomp)");
  solve->add_option("--seed-node", opt.seed_node, "seeded node (greedy)");
  solve->add_option("--seed-label", opt.seed_label, "seed label (greedy; default: best unary)");

  std::string kind, output;
  std::uint64_t seed = 0;
  CLI::App* generate = app.add_subcommand("generate", "write a generated instance");
  generate->add_option("--kind", kind, "counterexample(a,eps) | random_chain(n,k) | random_grid(n1,n2,k) | random_tree(n,k)")
      ->required();
  generate->add_option("--seed", seed, "generator seed")->required();
  generate->add_option("--output", output, "output file")->required();

  std::string check_input;
  CLI::App* check = app.add_subcommand("check", "validate an instance file");
  check->add_option("--input", check_input, "instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return run_solve(opt);
    if (generate->parsed()) {
      bmrf::bottleneck_instance inst;
      try {
        inst = bmrf::generate(kind, seed);
      } catch (const std::invalid_argument& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return 2;
      }
      bmrf::save_instance(inst, output);
      return 0;
    }
    if (check->parsed()) return run_check(check_input);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
