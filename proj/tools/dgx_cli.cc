// Command-line front end. Talks to the library through the C API only.
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dgx_c.h"

namespace {

constexpr int kExitUsage = 1;

struct Overrides {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
  std::optional<std::string> preprocess;
  std::optional<double> alpha;
  std::optional<std::string> explainer;
  std::optional<std::string> convention;
};

void AddConfigFlags(CLI::App* cmd, Overrides& o, bool stage_flags) {
  cmd->add_option("--config", o.config_path, "key = value run configuration file");
  cmd->add_option("--seed", o.seed, "seed (overrides the config)");
  cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--alpha", o.alpha, "teleport probability of the lapnorm operator");
  if (stage_flags) {
    cmd->add_option("--preprocess", o.preprocess, "symm | lapnorm")
        ->check(CLI::IsMember({"symm", "lapnorm"}));
    cmd->add_option("--explainer", o.explainer, "gnn | pg")->check(CLI::IsMember({"gnn", "pg"}));
  }
  cmd->add_option("--convention", o.convention, "standard | paper_literal")
      ->check(CLI::IsMember({"standard", "paper_literal"}));
}

void PrintError() { std::fprintf(stderr, "%s\n", dgx_last_error_json()); }

int UsageError(const std::string& message) {
  const nlohmann::json record = {{"error", "usage"}, {"message", message}, {"exit", kExitUsage}};
  std::fprintf(stderr, "%s\n", record.dump().c_str());
  return kExitUsage;
}

// Returns the exit code; prints the error record on failure.
int Check(dgx_status status) {
  if (status == DGX_OK) return 0;
  PrintError();
  return dgx_exit_code(status);
}

class Config {
 public:
  ~Config() { dgx_config_free(handle_); }

  int Build(const Overrides& o) {
    const dgx_status s = o.config_path.empty() ? dgx_config_new(&handle_)
                                               : dgx_config_load(o.config_path.c_str(), &handle_);
    if (s != DGX_OK) return Check(s);
    auto set = [&](const char* key, const std::string& value) {
      return Check(dgx_config_set(handle_, key, value.c_str()));
    };
    int rc = 0;
    if (o.seed && (rc = set("seed", std::to_string(*o.seed)))) return rc;
    if (o.jobs && (rc = set("jobs", std::to_string(*o.jobs)))) return rc;
    if (o.out && (rc = set("out", *o.out))) return rc;
    if (o.preprocess && (rc = set("preprocess", *o.preprocess))) return rc;
    if (o.alpha) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", *o.alpha);
      if ((rc = set("alpha", buf))) return rc;
    }
    if (o.explainer && (rc = set("explainer", *o.explainer))) return rc;
    if (o.convention && (rc = set("convention", *o.convention))) return rc;
    return 0;
  }

  const dgx_config* get() const { return handle_; }

 private:
  dgx_config* handle_ = nullptr;
};

// `result` is passed by reference: it is filled by the call producing `status`.
int PrintResult(dgx_status status, dgx_result*& result) {
  if (status == DGX_OK) {
    std::printf("%s\n", dgx_result_text(result));
    dgx_result_free(result);
    return 0;
  }
  return Check(status);
}

std::vector<uint64_t> ParseSeeds(const std::string& text) {
  std::vector<uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t used = 0;
    const unsigned long long v = std::stoull(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    seeds.push_back(v);
  }
  if (seeds.empty()) throw std::invalid_argument(text);
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direction-aware GNN explanation toolkit"};
  app.require_subcommand(1);

  Overrides stage;
  using StageFn = dgx_status (*)(const dgx_config*, dgx_result**);
  const std::pair<const char*, StageFn> stages[] = {
      {"generate", dgx_generate},
      {"train", dgx_train},
      {"explain", dgx_explain},
      {"evaluate", dgx_evaluate},
  };
  const char* stage_help[] = {
      "write the dataset CSVs and meta.json",
      "train the GCN; exit 3 if it misses the accuracy gate",
      "explain the selected target nodes",
      "score the explanations and write the metrics report",
  };
  std::vector<CLI::App*> stage_cmds;
  for (size_t i = 0; i < std::size(stages); ++i) {
    CLI::App* cmd = app.add_subcommand(stages[i].first, stage_help[i]);
    AddConfigFlags(cmd, stage, true);
    stage_cmds.push_back(cmd);
  }

  Overrides t1;
  std::string seeds_text = "0,1,2";
  CLI::App* table1 = app.add_subcommand("reproduce-table1", "AUC sweep over the synthetic datasets");
  AddConfigFlags(table1, t1, false);
  table1->add_option("--seeds", seeds_text, "comma-separated seed list");

  Overrides t2;
  std::vector<std::string> manifests;
  int sample_nodes = 200;
  bool all_nodes = false;
  CLI::App* table2 = app.add_subcommand("table2", "fidelity sweep on real-world fixtures");
  AddConfigFlags(table2, t2, false);
  table2->add_option("--manifest", manifests, "dataset manifest JSON (repeatable)")->required();
  table2->add_option("--sample-nodes", sample_nodes, "explained test nodes per dataset");
  table2->add_flag("--all-test-nodes", all_nodes, "explain every test node");

  Overrides oracle_o;
  std::string oracle_kind;
  CLI::App* oracle = app.add_subcommand("oracle", "run an oracle suite");
  AddConfigFlags(oracle, oracle_o, false);
  oracle->add_option("kind", oracle_kind, "theorem1 | entropy")
      ->required()
      ->check(CLI::IsMember({"theorem1", "entropy"}));

  std::string dot_input;
  std::string dot_output;
  std::string dot_truth;
  int dot_target = -1;
  CLI::App* dot = app.add_subcommand("export-dot", "render an explanation as a DOT digraph");
  dot->add_option("explanation", dot_input, "explanation JSON or JSON lines file")->required();
  dot->add_option("--out", dot_output, "output .dot path")->required();
  dot->add_option("--target", dot_target, "node to render (default: first)");
  dot->add_option("--ground-truth", dot_truth, "ground_truth.csv to outline motif edges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return UsageError(e.what());
  }

  for (size_t i = 0; i < stage_cmds.size(); ++i) {
    if (!stage_cmds[i]->parsed()) continue;
    Config config;
    if (int rc = config.Build(stage)) return rc;
    dgx_result* result = nullptr;
    return PrintResult(stages[i].second(config.get(), &result), result);
  }

  if (table1->parsed()) {
    std::vector<uint64_t> seeds;
    try {
      seeds = ParseSeeds(seeds_text);
    } catch (const std::exception&) {
      return UsageError("--seeds expects a comma-separated list of integers");
    }
    Config config;
    if (int rc = config.Build(t1)) return rc;
    dgx_result* result = nullptr;
    const dgx_status s = dgx_reproduce_table1(config.get(), seeds.data(), seeds.size(), &result);
    if (s != DGX_OK) return Check(s);
    std::printf("%s", dgx_result_text(result));
    dgx_result_free(result);
    return 0;
  }

  if (table2->parsed()) {
    Config config;
    if (int rc = config.Build(t2)) return rc;
    int worst = 0;
    for (const std::string& m : manifests) {
      dgx_result* result = nullptr;
      const int rc = PrintResult(
          dgx_table2(config.get(), m.c_str(), all_nodes ? 0 : sample_nodes, &result), result);
      worst = std::max(worst, rc);
    }
    return worst;
  }

  if (oracle->parsed()) {
    Config config;
    if (int rc = config.Build(oracle_o)) return rc;
    dgx_result* result = nullptr;
    return PrintResult(dgx_oracle(config.get(), oracle_kind.c_str(), &result), result);
  }

  if (dot->parsed()) {
    return Check(dgx_export_dot(dot_input.c_str(), dot_target,
                                dot_truth.empty() ? nullptr : dot_truth.c_str(),
                                dot_output.c_str()));
  }
  return UsageError("no subcommand");
}
