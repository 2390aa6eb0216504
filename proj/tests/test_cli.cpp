#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "bmdp/bmdp.hpp"
#include "helpers.hpp"

using namespace bmdp;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& stem) {
    static int counter = 0;
    path = (std::filesystem::temp_directory_path() /
            (stem + "_" + std::to_string(++counter) + "_" +
             std::to_string(static_cast<unsigned>(::getpid())) + ".tmp"))
               .string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

struct CommandResult {
  int status = -1;
  std::string output;
};

// runs the experiment binary with the given arguments, capturing the exit
// status and combined stdout/stderr
CommandResult run_cli(const std::string& args) {
  TempFile capture("bmdp_cli_capture");
  const std::string cmd =
      std::string(BMDP_CLI_PATH) + " " + args + " > " + capture.path + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CommandResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.output = read_text_file(capture.path);
  return r;
}

}  // namespace

TEST_CASE("generate queue writes a valid model", "[cli]") {
  TempFile model("cli_queue");
  const CommandResult r = run_cli("generate queue --seed 3 --out " + model.path);
  CHECK(r.status == 0);
  CHECK(r.output.find("n_states=30") != std::string::npos);
  const LoadedModel loaded = load_model(model.path);
  CHECK(loaded.model.n_states == 30);
  CHECK(loaded.model.n_actions == 3);
  CHECK(validate(loaded.model).empty());

  SECTION("reruns are byte identical") {
    TempFile again("cli_queue_again");
    CHECK(run_cli("generate queue --seed 3 --out " + again.path).status == 0);
    CHECK(read_text_file(again.path) == read_text_file(model.path));
  }
  SECTION("a different seed changes the file") {
    TempFile other("cli_queue_other");
    CHECK(run_cli("generate queue --seed 4 --out " + other.path).status == 0);
    CHECK(read_text_file(other.path) != read_text_file(model.path));
  }
}

TEST_CASE("generate covers the other families", "[cli]") {
  SECTION("gallery") {
    TempFile model("cli_antg");
    const CommandResult r = run_cli("generate antg --n 10 --out " + model.path);
    CHECK(r.status == 0);
    CHECK(load_model(model.path).model.n_states == 100);
  }
  SECTION("grid") {
    TempFile model("cli_grid");
    const CommandResult r =
        run_cli("generate grid --rows 3 --cols 3 --seed 1 --out " + model.path);
    CHECK(r.status == 0);
    const LoadedModel loaded = load_model(model.path);
    CHECK(loaded.model.n_states == 9);
    CHECK(loaded.model.n_actions == 3);
  }
  SECTION("gallery rejects undersized grids") {
    TempFile model("cli_antg_small");
    const CommandResult r = run_cli("generate antg --n 5 --out " + model.path);
    CHECK(r.status == 3);
  }
}

TEST_CASE("solve computes frontiers end to end", "[cli]") {
  TempFile model("cli_model");
  save_model(model.path, testutil::appendix_model());
  TempFile result("cli_result");
  const CommandResult r = run_cli("solve " + model.path +
                                  " --algorithm exact --format json --out " + result.path);
  CHECK(r.status == 0);
  const ExperimentResult loaded = load_result(result.path);
  CHECK(loaded.algorithm == "exact");
  CHECK(loaded.policy_count == loaded.frontier.size());
  CHECK_FALSE(loaded.truncated);
  std::vector<FrontierEntry> entries = loaded.frontier;
  CHECK(testutil::distinct_values(entries, 1e-6) == 2);
  CHECK(loaded.config.at("gamma").get<double>() == 0.9);
  CHECK(r.output.find("\"algorithm\": \"exact\"") != std::string::npos);
}

TEST_CASE("solve single-objective algorithms give singleton frontiers", "[cli]") {
  TempFile model("cli_model_single");
  save_model(model.path, testutil::appendix_model());
  for (const std::string algo : {"lower", "upper", "avg"}) {
    TempFile result("cli_single_" + algo);
    const CommandResult r =
        run_cli("solve " + model.path + " --algorithm " + algo + " --out " + result.path);
    CAPTURE(algo);
    CHECK(r.status == 0);
    CHECK(load_result(result.path).frontier.size() == 1);
  }
}

TEST_CASE("compare reports full self coverage", "[cli]") {
  TempFile model("cli_model_cmp");
  save_model(model.path, testutil::appendix_model());
  TempFile exact("cli_cmp_exact"), heur("cli_cmp_heur");
  REQUIRE(run_cli("solve " + model.path + " --algorithm exact --out " + exact.path).status == 0);
  REQUIRE(run_cli("solve " + model.path + " --algorithm heuristic --out " + heur.path).status == 0);

  SECTION("self comparison") {
    const CommandResult r = run_cli("compare " + exact.path + " " + exact.path);
    CHECK(r.status == 0);
    CHECK(r.output.find("exact,exact,1,1,") != std::string::npos);
  }
  SECTION("heuristic matches exact on the reference model") {
    TempFile csv("cli_cmp_csv");
    const CommandResult r =
        run_cli("compare " + heur.path + " " + exact.path + " --csv " + csv.path);
    CHECK(r.status == 0);
    CHECK(r.output.find("heuristic,exact,1,1,") != std::string::npos);
    const std::string written = read_text_file(csv.path);
    CHECK(written.find("instance_id,algo_x,algo_y,c_xy,c_yx") != std::string::npos);
  }
}

TEST_CASE("compare refuses results from different instances", "[cli]") {
  TempFile model_a("cli_cmp_ma"), model_b("cli_cmp_mb");
  save_model(model_a.path, testutil::appendix_model());
  QueueConfig qcfg;
  qcfg.m = 1;
  qcfg.c = 1;
  save_model(model_b.path, gen_queue(qcfg));
  TempFile ra("cli_cmp_ra"), rb("cli_cmp_rb");
  REQUIRE(run_cli("solve " + model_a.path + " --algorithm exact --out " + ra.path).status == 0);
  REQUIRE(run_cli("solve " + model_b.path + " --algorithm heuristic --out " + rb.path).status == 0);
  const CommandResult r = run_cli("compare " + ra.path + " " + rb.path);
  CHECK(r.status == 1);
  CHECK(r.output.find("different instances") != std::string::npos);
}

TEST_CASE("budget truncation sets the dedicated exit code", "[cli]") {
  TempFile model("cli_trunc_model");
  QueueConfig qcfg;
  save_model(model.path, gen_queue(qcfg));
  TempFile result("cli_trunc_result");
  const CommandResult r = run_cli("solve " + model.path +
                                  " --algorithm exact --max-policies 2 --out " + result.path);
  CHECK(r.status == 2);
  CHECK(load_result(result.path).truncated);
}

TEST_CASE("invalid models are refused with the validation exit code", "[cli]") {
  TempFile model("cli_invalid_model");
  json j = model_to_json(testutil::appendix_model());
  j["gamma"] = 1.5;
  write_text_file(model.path, j.dump(2) + "\n");
  const CommandResult r = run_cli("solve " + model.path + " --algorithm exact");
  CHECK(r.status == 3);
  CHECK(r.output.find("invalid model") != std::string::npos);
}

TEST_CASE("usage errors exit with one", "[cli]") {
  CHECK(run_cli("solve").status == 1);                     // missing model argument
  CHECK(run_cli("frobnicate").status == 1);                // unknown subcommand
  CHECK(run_cli("solve x.json --no-such-flag").status == 1);
  CHECK(run_cli("solve x.json --algorithm warp").status == 1);
  CHECK(run_cli("solve /nonexistent/model.json").status == 1);  // unreadable file
}

TEST_CASE("bench writes a header even for an empty sweep", "[cli]") {
  TempFile csv("cli_bench_empty");
  const CommandResult r =
      run_cli("bench grid --size-min 3 --size-max 2 --out " + csv.path);
  CHECK(r.status == 0);
  CHECK(read_text_file(csv.path) ==
        "family,param,seed,n_states,policy_count,eval_count,wall_seconds,"
        "seconds_per_policy\n");
}

TEST_CASE("bench runs a small sweep", "[cli]") {
  TempFile csv("cli_bench_small");
  const CommandResult r =
      run_cli("bench grid --size-min 2 --size-max 2 --seeds 1 --out " + csv.path);
  CHECK(r.status == 0);
  const std::string text = read_text_file(csv.path);
  CHECK(text.find("grid,2,0,4,") != std::string::npos);  // 2x2 grid: four states
}

TEST_CASE("spea2 runs from the command line", "[cli]") {
  TempFile model("cli_spea2_model");
  save_model(model.path, testutil::appendix_model());
  TempFile result("cli_spea2_result");
  const CommandResult r = run_cli(
      "solve " + model.path +
      " --algorithm spea2 --spea2-pop 16 --spea2-generations 5 --seed 9 --out " + result.path);
  CHECK(r.status == 0);
  const ExperimentResult loaded = load_result(result.path);
  CHECK(loaded.algorithm == "spea2");
  std::vector<FrontierEntry> entries = loaded.frontier;
  CHECK(testutil::distinct_values(entries, 1e-6) == 2);
}
