// rcsp: command-line front end for the budget-reset shortest path planner.
//
//   rcsp plan SCENARIO [--levels N] [--output FILE] [--svg FILE] ...
//   rcsp compare SCENARIO --deltas 2,4,8 [--markdown]
//   rcsp verify SCENARIO [--oracle-spacing EPS]
//   rcsp render SCENARIO SOLUTION [--output FILE]
//   rcsp generate --count M --bounds X0,Y0,X1,Y1 --budget Q --seed S
//
// Exit codes: 0 success, 1 input or validation error, 2 infeasible,
// 3 solver failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rcsp/rcsp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitSolver = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string num(double v, const char* fmt = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

struct PlanFlags {
  std::string scenario;
  std::optional<int> levels;
  std::optional<double> tol;
  double feastol = 1e-7;
  double gaptol = 1e-7;
  int max_iter = 50000;
  std::string dump_graph;
  std::string output;
  std::string svg;
  double oracle_spacing = 0.01;
};

rcsp::PlanOptions plan_options(const PlanFlags& f) {
  rcsp::PlanOptions o;
  o.levels = f.levels;
  o.tol = f.tol;
  o.solver.feastol = f.feastol;
  o.solver.gaptol = f.gaptol;
  o.solver.max_iter = f.max_iter;
  o.keep_graph = !f.dump_graph.empty();
  return o;
}

int exit_code(rcsp::PlanStatus s) {
  switch (s) {
    case rcsp::PlanStatus::solved:
      return kExitOk;
    case rcsp::PlanStatus::infeasible:
      return kExitInfeasible;
    case rcsp::PlanStatus::solver_failure:
      return kExitSolver;
  }
  return kExitSolver;
}

int run_plan(const PlanFlags& f) {
  const rcsp::Scenario scn = rcsp::load_scenario(read_file(f.scenario));
  for (const auto& note : scn.notes) std::cerr << "note: " << note << "\n";
  const rcsp::PlanResult res = rcsp::plan(scn, plan_options(f));

  if (!f.dump_graph.empty() && res.graph) write_output(f.dump_graph, rcsp::graph_to_json(*res.graph).dump() + "\n");
  if (res.status == rcsp::PlanStatus::infeasible) {
    std::cerr << res.message << "\n";
    return kExitInfeasible;
  }
  if (res.status == rcsp::PlanStatus::solver_failure) std::cerr << "error[solver]: " << res.message << "\n";

  std::cerr << "straight-line length: " << num((scn.end - scn.start).norm()) << "\n";
  if (res.graph_solution) {
    std::cerr << "graph-only length: " << num(res.graph_solution->total_length) << " (" << res.num_nodes
              << " nodes, " << res.num_edges << " edges)\n";
  }
  std::cerr << rcsp::to_string(res.solution.method) << " length: " << num(res.solution.total_length) << "\n";

  nlohmann::json j = rcsp::solution_to_json(res.solution);
  if (res.graph_solution) j["graph_solution"] = rcsp::solution_to_json(*res.graph_solution);
  write_output(f.output, j.dump(2) + "\n");
  if (!f.svg.empty()) {
    const rcsp::PathSolution* g = res.graph_solution ? &*res.graph_solution : nullptr;
    write_output(f.svg, rcsp::render_svg(rcsp::apply_overrides(scn, plan_options(f)), &res.solution, g));
  }
  return exit_code(res.status);
}

int run_compare(const PlanFlags& f, const std::vector<int>& deltas, bool markdown) {
  if (deltas.empty()) {
    std::cerr << "error[usage]: --deltas needs at least one level count\n";
    return kExitInput;
  }
  const rcsp::Scenario scn = rcsp::load_scenario(read_file(f.scenario));
  std::ostringstream out;
  if (markdown) {
    out << "| delta | nodes | graph_len | refined_len | ms |\n|---|---|---|---|---|\n";
  } else {
    out << "delta,nodes,graph_len,refined_len,ms\n";
  }
  int code = kExitOk;
  for (int d : deltas) {
    PlanFlags fd = f;
    fd.levels = d;
    const auto t0 = std::chrono::steady_clock::now();
    const rcsp::PlanResult res = rcsp::plan(scn, plan_options(fd));
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    const std::string graph_len =
        res.graph_solution ? num(res.graph_solution->total_length, "%.9f")
                           : (res.status == rcsp::PlanStatus::solved ? num(res.solution.total_length, "%.9f") : "inf");
    const std::string refined_len =
        res.status == rcsp::PlanStatus::solved ? num(res.solution.total_length, "%.9f") : "inf";
    if (markdown) {
      out << "| " << d << " | " << res.num_nodes << " | " << graph_len << " | " << refined_len << " | "
          << num(ms, "%.1f") << " |\n";
    } else {
      out << d << "," << res.num_nodes << "," << graph_len << "," << refined_len << "," << num(ms, "%.1f") << "\n";
    }
    if (res.status != rcsp::PlanStatus::solved) code = std::max(code, exit_code(res.status));
  }
  write_output(f.output, out.str());
  return code;
}

int run_verify(const PlanFlags& f) {
  const rcsp::Scenario scn = rcsp::load_scenario(read_file(f.scenario));
  const rcsp::PlanResult res = rcsp::plan(scn, plan_options(f));
  const auto oracle = rcsp::dense_oracle(rcsp::apply_overrides(scn, plan_options(f)), f.oracle_spacing);
  if (res.status == rcsp::PlanStatus::infeasible || !oracle) {
    const bool agree = (res.status == rcsp::PlanStatus::infeasible) == !oracle;
    std::cerr << "planner: " << (res.status == rcsp::PlanStatus::infeasible ? "infeasible" : "feasible")
              << ", oracle: " << (oracle ? "feasible" : "infeasible") << "\n";
    if (!agree) return kExitSolver;
    return kExitInfeasible;
  }
  const double planned = res.solution.total_length;
  std::cout << "planner_length," << num(planned, "%.9f") << "\n";
  std::cout << "oracle_length," << num(oracle->length, "%.9f") << "\n";
  std::cout << "oracle_nodes," << oracle->num_nodes << "\n";
  const bool same_sequence = oracle->sequence == res.solution.sequence;
  std::cout << "same_sequence," << (same_sequence ? "true" : "false") << "\n";
  std::cout << "gap," << num(oracle->length - planned, "%.9f") << "\n";
  if (planned > oracle->length + 1e-6) {
    std::cerr << "error[verify]: oracle found a shorter path than the planner\n";
    return kExitSolver;
  }
  return res.status == rcsp::PlanStatus::solved ? kExitOk : kExitSolver;
}

int run_render(const std::string& scenario_path, const std::string& solution_path, const std::string& output) {
  const rcsp::Scenario scn = rcsp::load_scenario(read_file(scenario_path));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(solution_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw rcsp::ParseError(std::string("malformed solution JSON: ") + e.what());
  }
  const rcsp::PathSolution sol = rcsp::solution_from_json(j);
  std::optional<rcsp::PathSolution> graph;
  if (j.contains("graph_solution")) graph = rcsp::solution_from_json(j.at("graph_solution"));
  write_output(output, rcsp::render_svg(scn, &sol, graph ? &*graph : nullptr));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shortest paths under a travel budget that resets inside convex regions"};
  app.require_subcommand(1);

  PlanFlags flags;
  const auto add_plan_flags = [&](CLI::App* cmd) {
    cmd->add_option("scenario", flags.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--levels", flags.levels, "Wavefront level count (overrides the scenario)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", flags.tol, "Geometric tolerance (overrides the scenario)");
    cmd->add_option("--feastol", flags.feastol, "Refinement feasibility tolerance");
    cmd->add_option("--gaptol", flags.gaptol, "Refinement optimality gap, relative to the budget");
    cmd->add_option("--max-iter", flags.max_iter, "Refinement Newton iteration cap");
    cmd->add_option("-o,--output", flags.output, "Output file (default stdout)");
  };

  auto* plan_cmd = app.add_subcommand("plan", "Plan a path for a scenario");
  add_plan_flags(plan_cmd);
  plan_cmd->add_option("--dump-graph", flags.dump_graph, "Write the candidate graph as JSON");
  plan_cmd->add_option("--svg", flags.svg, "Also render the result as SVG");

  auto* compare_cmd = app.add_subcommand("compare", "Tabulate graph-only and refined lengths per level count");
  add_plan_flags(compare_cmd);
  std::vector<int> deltas;
  bool markdown = false;
  compare_cmd->add_option("--deltas", deltas, "Level counts, e.g. 2,4,8")->delimiter(',');
  compare_cmd->add_flag("--markdown", markdown, "Markdown table instead of CSV");

  auto* verify_cmd = app.add_subcommand("verify", "Compare the planner against the dense boundary oracle");
  add_plan_flags(verify_cmd);
  verify_cmd->add_option("--oracle-spacing", flags.oracle_spacing, "Oracle boundary sample spacing")
      ->check(CLI::PositiveNumber);

  auto* render_cmd = app.add_subcommand("render", "Render a scenario and solution as SVG");
  std::string render_scenario, render_solution, render_output;
  render_cmd->add_option("scenario", render_scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  render_cmd->add_option("solution", render_solution, "Solution JSON file")->required()->check(CLI::ExistingFile);
  render_cmd->add_option("-o,--output", render_output, "SVG output file (default stdout)");

  auto* gen_cmd = app.add_subcommand("generate", "Generate a random scenario");
  rcsp::GeneratorOptions gen;
  std::vector<double> bounds{gen.xmin, gen.ymin, gen.xmax, gen.ymax};
  std::string gen_output;
  gen_cmd->add_option("-m,--count", gen.count, "Number of regions")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--bounds", bounds, "xmin,ymin,xmax,ymax")->delimiter(',')->expected(4);
  gen_cmd->add_option("--budget", gen.budget, "Travel budget Q")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--levels", gen.levels, "Wavefront level count")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--min-radius", gen.min_radius, "Smallest polygon circumradius");
  gen_cmd->add_option("--max-radius", gen.max_radius, "Largest polygon circumradius");
  gen_cmd->add_option("--clearance", gen.clearance, "Minimum gap between regions");
  gen_cmd->add_option("--corridor", gen.corridor, "Draw centers within this distance of the start-end segment (0: anywhere)");
  gen_cmd->add_option("-o,--output", gen_output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*plan_cmd) return run_plan(flags);
    if (*compare_cmd) return run_compare(flags, deltas, markdown);
    if (*verify_cmd) return run_verify(flags);
    if (*render_cmd) return run_render(render_scenario, render_solution, render_output);
    if (*gen_cmd) {
      gen.xmin = bounds[0];
      gen.ymin = bounds[1];
      gen.xmax = bounds[2];
      gen.ymax = bounds[3];
      write_output(gen_output, rcsp::save_scenario(rcsp::generate_scenario(gen)));
      return kExitOk;
    }
  } catch (const rcsp::ParseError& e) {
    std::cerr << "error[parse]: " << e.what() << "\n";
    return kExitInput;
  } catch (const rcsp::ValidationError& e) {
    std::cerr << "error[validation:" << e.invariant() << "]: " << e.what() << "\n";
    return kExitInput;
  } catch (const rcsp::GenerationFailed& e) {
    std::cerr << "error[generate]: " << e.what() << "\n";
    return kExitInput;
  } catch (const rcsp::NumericalBreakdown& e) {
    std::cerr << "error[solver]: " << e.what() << "\n";
    return kExitSolver;
  } catch (const rcsp::SequenceRepetition& e) {
    std::cerr << "error[solver]: " << e.what() << "\n";
    return kExitSolver;
  } catch (const rcsp::TooManyNodes& e) {
    std::cerr << "error[oracle]: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
