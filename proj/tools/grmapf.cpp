// Command line front end: solve, bench, gen, validate, animate.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grmapf/animate.hpp"
#include "grmapf/bench.hpp"
#include "grmapf/io.hpp"
#include "grmapf/refine.hpp"
#include "grmapf/solvers.hpp"

using namespace grmapf;

namespace {

struct InstanceArgs {
  std::string instance, map, scen, dims = "18x18", pattern = "random";
  double density = 1.0 / 3.0;
  int agents = -1;
  std::uint64_t seed = 0;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& a) {
  cmd->add_option("--instance", a.instance, "Instance JSON file");
  cmd->add_option("--map", a.map, "Grid benchmark map file");
  cmd->add_option("--scen", a.scen, "Scenario file (needs --map)");
  cmd->add_option("--agents", a.agents, "Scenario entries to use (default all)");
  cmd->add_option("--dims", a.dims, "Generated grid size, m1xm2 or m1xm2xm3")->capture_default_str();
  cmd->add_option("--density", a.density, "Generated agent density")->capture_default_str();
  cmd->add_option("--pattern", a.pattern, "random, squares, blocks or sortation")->capture_default_str();
  cmd->add_option("--seed", a.seed, "Generator and solver seed")->capture_default_str();
}

Instance load_instance(const InstanceArgs& a) {
  if (!a.instance.empty()) return instance_from_json(read_file(a.instance));
  if (!a.scen.empty()) {
    if (a.map.empty()) throw PreconditionError("--scen needs --map");
    return instance_from_scenario(load_map(a.map), load_scenario(a.scen), a.agents);
  }
  InstanceSpec s = parse_dims(a.dims);
  s.density = a.density;
  s.pattern = parse_pattern(a.pattern);
  s.seed = a.seed;
  return generate_instance(s);
}

struct SolverArgs {
  std::string algo = "grh", matching = "hall";
  bool refine = false, column_first = false;
};

void add_solver_options(CLI::App* cmd, SolverArgs& a) {
  cmd->add_option("--algo", a.algo, "grm2, grm4, grh, grlm or arbitrary_half")->capture_default_str();
  cmd->add_option("--matching", a.matching, "hall or lba")->capture_default_str();
  cmd->add_flag("--refine", a.refine, "Desynchronize the plan afterwards");
  cmd->add_flag("--column-first", a.column_first, "Column, row, column phase order (2D GRH/GRLM)");
}

SolverConfig config_of(const SolverArgs& a, int dimension, std::uint64_t seed) {
  SolverConfig c;
  c.algorithm = parse_algorithm(a.algo);
  c.matching = parse_matching(a.matching);
  c.refine = a.refine;
  c.column_first = a.column_first;
  c.dimension = dimension;
  c.seed = seed;
  return c;
}

void print_metrics(const Instance& inst, const Plan& plan) {
  const auto m = compute_metrics(inst, plan);
  std::cout << "agents " << inst.size() << "\nmakespan " << m.makespan << "\nsoc " << m.soc << "\nmanhattan_lb "
            << m.manhattan_lb << "\nratio " << (m.optimality_ratio ? std::to_string(*m.optimality_ratio) : "undefined")
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid rearrangement multi-agent path planner"};
  app.require_subcommand(1);

  InstanceArgs solve_in;
  SolverArgs solve_cfg;
  std::string solve_out;
  bool show_trace = false;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  add_instance_options(solve_cmd, solve_in);
  add_solver_options(solve_cmd, solve_cfg);
  solve_cmd->add_option("--out", solve_out, "Write the plan JSON here");
  solve_cmd->add_flag("--trace", show_trace, "Print the phase spans");

  std::vector<std::string> bench_dims{"18x18"}, bench_algos{"grh"};
  std::vector<double> bench_density{1.0 / 3.0};
  std::string bench_pattern = "random", bench_matching = "hall", bench_out = "bench_out";
  bool bench_refine = false;
  int bench_seeds = 20, bench_jobs = 1;
  std::uint64_t bench_seed = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark sweep");
  bench_cmd->add_option("--dims", bench_dims, "Grid sizes")->capture_default_str();
  bench_cmd->add_option("--density", bench_density, "Densities")->capture_default_str();
  bench_cmd->add_option("--pattern", bench_pattern, "Instance pattern")->capture_default_str();
  bench_cmd->add_option("--algo", bench_algos, "Algorithms")->capture_default_str();
  bench_cmd->add_option("--matching", bench_matching, "hall or lba")->capture_default_str();
  bench_cmd->add_flag("--refine", bench_refine, "Refine every plan");
  bench_cmd->add_option("--seeds", bench_seeds, "Seeds per cell")->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed, "First seed")->capture_default_str();
  bench_cmd->add_option("--jobs", bench_jobs, "Worker threads")->capture_default_str();
  bench_cmd->add_option("--out", bench_out, "Output directory")->capture_default_str();

  InstanceArgs gen_in;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance");
  add_instance_options(gen_cmd, gen_in);
  gen_cmd->add_option("--out", gen_out, "Instance JSON file (stdout when omitted)");

  std::string val_instance, val_plan;
  auto* val_cmd = app.add_subcommand("validate", "Check a plan against an instance");
  val_cmd->add_option("--instance", val_instance, "Instance JSON")->required();
  val_cmd->add_option("--plan", val_plan, "Plan JSON")->required();

  std::string anim_instance, anim_plan, anim_out = "frames";
  auto* anim_cmd = app.add_subcommand("animate", "Write one SVG frame per time step");
  anim_cmd->add_option("--instance", anim_instance, "Instance JSON")->required();
  anim_cmd->add_option("--plan", anim_plan, "Plan JSON")->required();
  anim_cmd->add_option("--out", anim_out, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      const Instance inst = load_instance(solve_in);
      const auto cfg = config_of(solve_cfg, inst.grid().is_3d() ? 3 : 2, solve_in.seed);
      const auto res = solve(inst, cfg);
      const auto report = validate_plan(inst, res.plan);
      if (!report.ok()) {
        std::cerr << "plan failed validation\n" << report.summary();
        return 2;
      }
      print_metrics(inst, res.plan);
      std::cout << "shuffle_makespan " << res.trace.shuffle_makespan() << "\n";
      if (show_trace) {
        for (const auto& p : res.trace.phases) std::cout << "  " << p.name << " [" << p.begin << ", " << p.end << ")\n";
      }
      if (!solve_out.empty()) write_file(solve_out, plan_to_json(res.plan, inst.grid().is_3d()));
    } else if (*bench_cmd) {
      BenchmarkSweep sweep;
      for (const auto& d : bench_dims) {
        for (double rho : bench_density) {
          InstanceSpec s = parse_dims(d);
          s.density = rho;
          s.pattern = parse_pattern(bench_pattern);
          sweep.shapes.push_back(s);
        }
      }
      for (const auto& a : bench_algos) {
        SolverArgs sa;
        sa.algo = a;
        sa.matching = bench_matching;
        sa.refine = bench_refine;
        bool any3d = false;
        for (const auto& s : sweep.shapes) any3d = any3d || s.layers > 1;
        sweep.configs.push_back(config_of(sa, any3d ? 3 : 2, 0));
      }
      sweep.seeds = bench_seeds;
      sweep.base_seed = bench_seed;
      sweep.jobs = bench_jobs;
      const auto records = run_benchmark(sweep);
      write_benchmark(records, bench_out);
      std::cout << summary_table(records, true);
    } else if (*gen_cmd) {
      const std::string text = instance_to_json(load_instance(gen_in), 1);
      if (gen_out.empty()) std::cout << text << "\n";
      else write_file(gen_out, text);
    } else if (*val_cmd) {
      const Instance inst = instance_from_json(read_file(val_instance));
      const Plan plan = plan_from_json(read_file(val_plan));
      const auto report = validate_plan(inst, plan);
      if (!report.ok()) {
        std::cout << "invalid\n" << report.summary();
        return 1;
      }
      std::cout << "valid\n";
      print_metrics(inst, plan);
    } else if (*anim_cmd) {
      const Instance inst = instance_from_json(read_file(anim_instance));
      const Plan plan = plan_from_json(read_file(anim_plan));
      const auto report = validate_plan(inst, plan);
      if (!report.ok()) {
        std::cerr << "plan failed validation\n" << report.summary();
        return 1;
      }
      const auto files = export_animation(inst, plan, anim_out);
      std::cout << files.size() << " frames written to " << anim_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
