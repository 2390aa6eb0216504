// experiment harness: generate benchmark models, solve them with the exact,
// heuristic, evolutionary, or single-objective solvers, compare result
// frontiers, and run scaling sweeps.  emits json results and csv summaries.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "bmdp/bmdp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitTruncated = 2;
constexpr int kExitInvalid = 3;

struct GenerateOptions {
  std::string family;
  std::string out = "model.json";
  std::uint64_t seed = 0;
  double gamma = 0.9;
  bmdp::QueueConfig queue;
  bmdp::GridConfig grid;
  bmdp::AntgConfig antg;
};

int run_generate(const GenerateOptions& opt) {
  bmdp::IntervalModel model;
  if (opt.family == "queue") {
    bmdp::QueueConfig cfg = opt.queue;
    cfg.rng_seed = opt.seed;
    cfg.gamma = opt.gamma;
    model = bmdp::gen_queue(cfg);
  } else if (opt.family == "grid") {
    bmdp::GridConfig cfg = opt.grid;
    cfg.rng_seed = opt.seed;
    cfg.gamma = opt.gamma;
    model = bmdp::gen_grid(cfg);
  } else {
    bmdp::AntgConfig cfg = opt.antg;
    cfg.gamma = opt.gamma;
    model = bmdp::gen_antg(cfg);
  }
  const std::vector<std::string> problems = bmdp::validate(model);
  if (!problems.empty()) {
    for (const std::string& p : problems) std::cerr << "invalid model: " << p << "\n";
    return kExitInvalid;
  }
  bmdp::save_model(opt.out, model);
  std::cout << "wrote " << opt.out << ": n_states=" << model.n_states
            << " n_actions=" << model.n_actions << " gamma=" << model.gamma << "\n";
  return kExitOk;
}

struct SolveOptions {
  std::string model_path;
  std::string algorithm = "heuristic";
  std::string out;
  std::string csv;
  std::string format;
  double epsilon = 1e-8;
  int max_iters = 100000;
  std::string solver = "auto";
  std::size_t max_policies = 50000;
  double wall_clock = 0.0;
  double tol = bmdp::kDominanceTol;
  int jobs = 1;
  std::uint64_t seed = 0;
  int spea2_pop = 100;
  int spea2_archive = 50000;
  double spea2_time = 1000.0;
  int spea2_generations = 0;
  bool no_warm_start = false;
};

int run_solve(const SolveOptions& opt) {
  bmdp::LoadedModel loaded = bmdp::load_model(opt.model_path);
  const bmdp::IntervalModel& model = loaded.model;
  const std::vector<std::string> problems = bmdp::validate(model);
  if (!problems.empty()) {
    for (const std::string& p : problems) std::cerr << "invalid model: " << p << "\n";
    return kExitInvalid;
  }

  bmdp::SolveConfig cfg;
  cfg.epsilon = opt.epsilon;
  cfg.max_iters = opt.max_iters;
  cfg.linear_solver = opt.solver == "direct"      ? bmdp::LinearSolver::direct
                      : opt.solver == "iterative" ? bmdp::LinearSolver::iterative
                                                  : bmdp::LinearSolver::automatic;
  bmdp::SearchBudget budget;
  budget.max_policies = opt.max_policies;
  budget.wall_clock_seconds = opt.wall_clock;

  bmdp::ExperimentResult result;
  result.instance_id = loaded.instance_id;
  result.algorithm = opt.algorithm;
  result.config = {{"algorithm", opt.algorithm},
                   {"epsilon", opt.epsilon},
                   {"max_iters", opt.max_iters},
                   {"solver", opt.solver},
                   {"max_policies", opt.max_policies},
                   {"wall_clock", opt.wall_clock},
                   {"tol", opt.tol},
                   {"jobs", opt.jobs},
                   {"seed", opt.seed},
                   {"gamma", model.gamma}};

  bmdp::Stopwatch clock;
  bmdp::FrontierSet frontier;
  if (opt.algorithm == "exact") {
    frontier = bmdp::pareto_exact(model, cfg, budget, nullptr, opt.tol, opt.jobs);
  } else if (opt.algorithm == "heuristic") {
    frontier = bmdp::pareto_heuristic(model, cfg, budget, opt.tol);
  } else if (opt.algorithm == "spea2") {
    bmdp::EvoConfig evo;
    evo.population_size = opt.spea2_pop;
    evo.archive_size = opt.spea2_archive;
    evo.time_limit_seconds = opt.spea2_time;
    evo.max_generations = opt.spea2_generations;
    evo.rng_seed = opt.seed;
    evo.warm_start = !opt.no_warm_start;
    result.config["spea2"] = {{"population_size", evo.population_size},
                              {"archive_size", evo.archive_size},
                              {"time_limit_seconds", evo.time_limit_seconds},
                              {"max_generations", evo.max_generations},
                              {"warm_start", evo.warm_start}};
    frontier = bmdp::spea2_run(model, evo, cfg, opt.tol, opt.jobs);
  } else {
    bmdp::OptimalResult single;
    if (opt.algorithm == "lower") single = bmdp::optimal_lower(model, cfg);
    else if (opt.algorithm == "upper") single = bmdp::optimal_upper(model, cfg);
    else single = bmdp::optimal_avg(model, cfg);
    bmdp::ValueTriple triple = bmdp::eval_policy(model, single.policy, cfg);
    frontier.entries.push_back({std::move(single.policy), std::move(triple)});
    frontier.eval_count = 1;
  }
  result.wall_seconds = clock.seconds();
  result.policy_count = frontier.size();
  result.eval_count = frontier.eval_count;
  result.truncated = frontier.truncated;
  result.frontier = frontier.entries;

  if (!opt.out.empty()) bmdp::save_result(opt.out, result);
  const std::string header =
      "instance_id,algorithm,n_states,n_actions,policy_count,eval_count,wall_seconds,truncated";
  const std::string row = bmdp::csv_join({result.instance_id, result.algorithm,
                                          std::to_string(model.n_states),
                                          std::to_string(model.n_actions),
                                          std::to_string(result.policy_count),
                                          std::to_string(result.eval_count),
                                          bmdp::format_double(result.wall_seconds),
                                          result.truncated ? "1" : "0"});
  if (!opt.csv.empty()) bmdp::append_csv_row(opt.csv, header, row);

  if (opt.format == "json") {
    std::cout << bmdp::result_to_json(result).dump(2) << "\n";
  } else if (opt.format == "csv") {
    std::cout << header << "\n" << row << "\n";
  } else {
    std::cout << "instance=" << result.instance_id << " algorithm=" << result.algorithm
              << " policies=" << result.policy_count << " evals=" << result.eval_count
              << " seconds=" << result.wall_seconds
              << (result.truncated ? " (budget truncated)" : "") << "\n";
  }
  return result.truncated ? kExitTruncated : kExitOk;
}

struct CompareOptions {
  std::string result_x;
  std::string result_y;
  std::string csv;
  double tol = bmdp::kDominanceTol;
};

int run_compare(const CompareOptions& opt) {
  const bmdp::ExperimentResult rx = bmdp::load_result(opt.result_x);
  const bmdp::ExperimentResult ry = bmdp::load_result(opt.result_y);
  if (rx.instance_id != ry.instance_id) {
    std::cerr << "compare: results are for different instances (" << rx.instance_id
              << " vs " << ry.instance_id << ")\n";
    return kExitUsage;
  }
  std::vector<bmdp::ValueTriple> vx, vy;
  for (const bmdp::FrontierEntry& e : rx.frontier) vx.push_back(e.value);
  for (const bmdp::FrontierEntry& e : ry.frontier) vy.push_back(e.value);
  const bmdp::CoverageReport rep = bmdp::coverage(vx, vy, opt.tol);
  const std::string header = "instance_id,algo_x,algo_y,c_xy,c_yx,size_x,size_y,t_x,t_y";
  const std::string row = bmdp::csv_join(
      {rx.instance_id, rx.algorithm, ry.algorithm, bmdp::format_double(rep.c_xy),
       bmdp::format_double(rep.c_yx), std::to_string(rep.size_x), std::to_string(rep.size_y),
       bmdp::format_double(rx.wall_seconds), bmdp::format_double(ry.wall_seconds)});
  if (!opt.csv.empty()) bmdp::append_csv_row(opt.csv, header, row);
  std::cout << header << "\n" << row << "\n";
  return kExitOk;
}

struct BenchOptions {
  std::string family;
  std::string out = "bench.csv";
  int size_min = 5;
  int size_max = 20;
  int size_step = 5;
  int seeds = 4;
  std::size_t budget = 50000;
  double gamma = 0.9;
  double epsilon = 1e-8;
  int queue_c = 3;
};

int run_bench(const BenchOptions& opt) {
  const std::string header =
      "family,param,seed,n_states,policy_count,eval_count,wall_seconds,seconds_per_policy";
  // touch the csv so an empty sweep still leaves a header behind
  bmdp::write_text_file(opt.out, header + "\n");
  bmdp::SolveConfig cfg;
  cfg.epsilon = opt.epsilon;
  bmdp::SearchBudget budget;
  budget.max_policies = opt.budget;
  for (int size = opt.size_min; size <= opt.size_max; size += opt.size_step) {
    for (int seed = 0; seed < opt.seeds; ++seed) {
      bmdp::IntervalModel model;
      if (opt.family == "grid") {
        bmdp::GridConfig gcfg;
        gcfg.n_rows = size;
        gcfg.m_cols = size;
        gcfg.rng_seed = static_cast<std::uint64_t>(seed);
        gcfg.gamma = opt.gamma;
        model = bmdp::gen_grid(gcfg);
      } else if (opt.family == "antg") {
        bmdp::AntgConfig acfg;
        acfg.n = size;
        acfg.gamma = opt.gamma;
        model = bmdp::gen_antg(acfg);
        if (seed > 0) continue;  // deterministic family, one run per size
      } else {
        bmdp::QueueConfig qcfg;
        qcfg.m = size;
        qcfg.c = opt.queue_c;
        qcfg.rng_seed = static_cast<std::uint64_t>(seed);
        qcfg.gamma = opt.gamma;
        model = bmdp::gen_queue(qcfg);
      }
      bmdp::Stopwatch clock;
      const bmdp::FrontierSet frontier = bmdp::pareto_heuristic(model, cfg, budget);
      const double seconds = clock.seconds();
      const double per_policy =
          frontier.size() > 0 ? seconds / static_cast<double>(frontier.size()) : seconds;
      const std::string row = bmdp::csv_join(
          {opt.family, std::to_string(size), std::to_string(seed),
           std::to_string(model.n_states), std::to_string(frontier.size()),
           std::to_string(frontier.eval_count), bmdp::format_double(seconds),
           bmdp::format_double(per_policy)});
      bmdp::append_csv_row(opt.out, header, row);
      std::cout << row << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pareto frontier solvers for bounded-parameter mdps"};
  app.require_subcommand(1);

  GenerateOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("generate", "generate a benchmark model");
  cmd_gen->require_subcommand(1);
  CLI::App* gen_queue = cmd_gen->add_subcommand("queue", "energy-aware server queue");
  gen_queue->add_option("--m", gen.queue.m, "queue capacity");
  gen_queue->add_option("--c", gen.queue.c, "server count");
  gen_queue->add_option("--p", gen.queue.p, "arrival probability per slot");
  gen_queue->add_option("--q", gen.queue.q, "service completion probability");
  gen_queue->add_option("--nu", gen.queue.nu, "start completion probability");
  gen_queue->add_option("--omega1", gen.queue.omega1, "energy weight of on");
  gen_queue->add_option("--omega2", gen.queue.omega2, "energy weight of start");
  gen_queue->add_option("--omega3", gen.queue.omega3, "energy weight of off");
  gen_queue->add_option("--noise-sd", gen.queue.noise_sd, "interval widening noise sd");
  CLI::App* gen_grid = cmd_gen->add_subcommand("grid", "random dirichlet grid");
  gen_grid->add_option("--rows", gen.grid.n_rows, "grid rows");
  gen_grid->add_option("--cols", gen.grid.m_cols, "grid columns (= actions)");
  gen_grid->add_option("--reward-mean", gen.grid.reward_mean, "reward mean");
  gen_grid->add_option("--reward-var", gen.grid.reward_var, "reward variance");
  gen_grid->add_option("--alpha-match", gen.grid.alpha_match, "matched-column concentration");
  gen_grid->add_option("--alpha-other", gen.grid.alpha_other, "other-column concentration");
  gen_grid->add_option("--noise-sd", gen.grid.noise_sd, "interval widening noise sd");
  CLI::App* gen_antg = cmd_gen->add_subcommand("antg", "antique gallery grid");
  gen_antg->add_option("--n", gen.antg.n, "grid side (n >= 10)");
  gen_antg->add_flag("--diagonal-upper", gen.antg.diagonal_upper,
                     "give diagonal cells the upper-triangle action pair");
  for (CLI::App* sub : {gen_queue, gen_grid, gen_antg}) {
    sub->add_option("--seed", gen.seed, "rng seed");
    sub->add_option("--gamma", gen.gamma, "discount factor");
    sub->add_option("--out", gen.out, "output model path");
  }

  SolveOptions solve;
  CLI::App* cmd_solve = app.add_subcommand("solve", "compute a pareto frontier");
  cmd_solve->add_option("model", solve.model_path, "model json path")->required();
  cmd_solve->add_option("--algorithm", solve.algorithm, "exact|heuristic|spea2|lower|upper|avg")
      ->check(CLI::IsMember({"exact", "heuristic", "spea2", "lower", "upper", "avg"}));
  cmd_solve->add_option("--out", solve.out, "result json path");
  cmd_solve->add_option("--csv", solve.csv, "append a summary csv row here");
  cmd_solve->add_option("--format", solve.format, "stdout format: json|csv")
      ->check(CLI::IsMember({"json", "csv", ""}));
  cmd_solve->add_option("--epsilon", solve.epsilon, "value iteration precision");
  cmd_solve->add_option("--max-iters", solve.max_iters, "iteration cap");
  cmd_solve->add_option("--solver", solve.solver, "linear solver: auto|direct|iterative")
      ->check(CLI::IsMember({"auto", "direct", "iterative"}));
  cmd_solve->add_option("--max-policies", solve.max_policies, "policy evaluation budget");
  cmd_solve->add_option("--wall-clock", solve.wall_clock, "time budget in seconds (0 = off)");
  cmd_solve->add_option("--tol", solve.tol, "dominance tolerance");
  cmd_solve->add_option("--jobs", solve.jobs, "worker thread cap");
  cmd_solve->add_option("--seed", solve.seed, "rng seed (spea2)");
  cmd_solve->add_option("--spea2-pop", solve.spea2_pop, "spea2 population size");
  cmd_solve->add_option("--spea2-archive", solve.spea2_archive, "spea2 archive size");
  cmd_solve->add_option("--spea2-time", solve.spea2_time, "spea2 time limit seconds");
  cmd_solve->add_option("--spea2-generations", solve.spea2_generations,
                        "spea2 generation cap (0 = none)");
  cmd_solve->add_flag("--no-warm-start", solve.no_warm_start,
                      "skip seeding spea2 with the single-objective optima");

  CompareOptions comp;
  CLI::App* cmd_compare = app.add_subcommand("compare", "coverage between two result files");
  cmd_compare->add_option("result_x", comp.result_x, "first result json")->required();
  cmd_compare->add_option("result_y", comp.result_y, "second result json")->required();
  cmd_compare->add_option("--csv", comp.csv, "append the coverage row here");
  cmd_compare->add_option("--tol", comp.tol, "dominance tolerance");

  BenchOptions bench;
  CLI::App* cmd_bench = app.add_subcommand("bench", "heuristic scaling sweep");
  cmd_bench->require_subcommand(1);
  CLI::App* bench_grid = cmd_bench->add_subcommand("grid", "square dirichlet grids");
  CLI::App* bench_antg = cmd_bench->add_subcommand("antg", "antique gallery sizes");
  CLI::App* bench_queue = cmd_bench->add_subcommand("queue", "queue capacities");
  bench_queue->add_option("--c", bench.queue_c, "server count");
  for (CLI::App* sub : {bench_grid, bench_antg, bench_queue}) {
    sub->add_option("--size-min", bench.size_min, "smallest size parameter");
    sub->add_option("--size-max", bench.size_max, "largest size parameter");
    sub->add_option("--size-step", bench.size_step, "size increment");
    sub->add_option("--seeds", bench.seeds, "seeds per size");
    sub->add_option("--budget", bench.budget, "policy evaluation budget");
    sub->add_option("--gamma", bench.gamma, "discount factor");
    sub->add_option("--epsilon", bench.epsilon, "value iteration precision");
    sub->add_option("--out", bench.out, "csv output path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_gen->parsed()) {
      gen.family = gen_queue->parsed() ? "queue" : gen_grid->parsed() ? "grid" : "antg";
      return run_generate(gen);
    }
    if (cmd_solve->parsed()) return run_solve(solve);
    if (cmd_compare->parsed()) return run_compare(comp);
    if (cmd_bench->parsed()) {
      bench.family = bench_grid->parsed() ? "grid" : bench_antg->parsed() ? "antg" : "queue";
      return run_bench(bench);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
