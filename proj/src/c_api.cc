#include "dgx_c.h"

#include <set>
#include <sstream>
#include <string>

#include "dgx/harness.h"

struct dgx_config {
  dgx::RunConfig config;
};

struct dgx_result {
  std::string text;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_error_json;

void ClearError() {
  g_last_error.clear();
  g_last_error_json.clear();
}

dgx_status Fail(const dgx::Error& e) {
  g_last_error = e.what();
  g_last_error_json = dgx::ErrorRecord(e).dump();
  return static_cast<dgx_status>(static_cast<int>(e.code()));
}

dgx_status FailInternal(const char* what) {
  g_last_error = what;
  g_last_error_json =
      nlohmann::json{{"error", "internal"}, {"message", what}, {"exit", 3}}.dump();
  return DGX_INTERNAL;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
dgx_status Guard(Fn&& fn) {
  ClearError();
  try {
    fn();
    return DGX_OK;
  } catch (const dgx::Error& e) {
    return Fail(e);
  } catch (const std::exception& e) {
    return FailInternal(e.what());
  }
}

void Emit(dgx_result** out, std::string text) {
  if (out != nullptr) *out = new dgx_result{std::move(text)};
}

void RequireArg(bool ok, const char* message) {
  dgx::Require(ok, dgx::ErrorCode::kInvalidArgument, message);
}

}  // namespace

extern "C" {

const char* dgx_last_error(void) { return g_last_error.c_str(); }

const char* dgx_last_error_json(void) { return g_last_error_json.c_str(); }

const char* dgx_status_name(dgx_status status) {
  if (status == DGX_OK) return "ok";
  if (status == DGX_INTERNAL) return "internal";
  if (status >= DGX_INVALID_ARGUMENT && status <= DGX_VALIDATION_GATE) {
    return dgx::ErrorCodeName(static_cast<dgx::ErrorCode>(status));
  }
  return "unknown";
}

int dgx_exit_code(dgx_status status) {
  if (status == DGX_OK) return 0;
  if (status >= DGX_INVALID_ARGUMENT && status <= DGX_VALIDATION_GATE) {
    return static_cast<int>(dgx::ExitCodeFor(static_cast<dgx::ErrorCode>(status)));
  }
  return static_cast<int>(dgx::ExitCode::kValidation);
}

dgx_status dgx_config_new(dgx_config** out) {
  return Guard([&] {
    RequireArg(out != nullptr, "null output handle");
    *out = new dgx_config{};
  });
}

dgx_status dgx_config_load(const char* path, dgx_config** out) {
  return Guard([&] {
    RequireArg(path != nullptr && out != nullptr, "null argument");
    *out = new dgx_config{dgx::RunConfig::FromFile(path)};
  });
}

dgx_status dgx_config_set(dgx_config* config, const char* key, const char* value) {
  return Guard([&] {
    RequireArg(config != nullptr && key != nullptr && value != nullptr, "null argument");
    config->config.Set(key, value);
  });
}

dgx_status dgx_config_canonical(const dgx_config* config, dgx_result** out) {
  return Guard([&] {
    RequireArg(config != nullptr && out != nullptr, "null argument");
    Emit(out, config->config.Canonical());
  });
}

dgx_status dgx_config_hash(const dgx_config* config, char* buffer, size_t size) {
  return Guard([&] {
    RequireArg(config != nullptr && buffer != nullptr, "null argument");
    const std::string hash = config->config.Hash();
    RequireArg(size > hash.size(), "hash buffer too small");
    hash.copy(buffer, hash.size());
    buffer[hash.size()] = '\0';
  });
}

void dgx_config_free(dgx_config* config) { delete config; }

const char* dgx_result_text(const dgx_result* result) {
  return result != nullptr ? result->text.c_str() : "";
}

void dgx_result_free(dgx_result* result) { delete result; }

dgx_status dgx_generate(const dgx_config* config, dgx_result** summary) {
  return Guard([&] {
    RequireArg(config != nullptr, "null config");
    dgx::StageGenerate(config->config);
    const auto paths = dgx::StagePaths::Under(config->config.Out());
    nlohmann::json meta = dgx::ReadJsonFile(paths.dataset_dir / "meta.json");
    meta["path"] = paths.dataset_dir.string();
    Emit(summary, meta.dump(2));
  });
}

dgx_status dgx_train(const dgx_config* config, dgx_result** summary) {
  return Guard([&] {
    RequireArg(config != nullptr, "null config");
    dgx::StageTrain(config->config);
    const auto paths = dgx::StagePaths::Under(config->config.Out());
    nlohmann::json log = dgx::ReadJsonFile(paths.train_log);
    log.erase("history");
    log["checkpoint"] = paths.checkpoint.string();
    Emit(summary, log.dump(2));
  });
}

dgx_status dgx_explain(const dgx_config* config, dgx_result** summary) {
  return Guard([&] {
    RequireArg(config != nullptr, "null config");
    dgx::StageExplain(config->config);
    const auto paths = dgx::StagePaths::Under(config->config.Out());
    Emit(summary, nlohmann::json{{"config_hash", config->config.Hash()},
                                 {"explainer", dgx::ExplainerKindName(config->config.Explainer())},
                                 {"path", paths.explanations.string()}}
                      .dump(2));
  });
}

dgx_status dgx_evaluate(const dgx_config* config, dgx_result** summary) {
  return Guard([&] {
    RequireArg(config != nullptr, "null config");
    const dgx::MetricsReport report = dgx::StageEvaluate(config->config);
    nlohmann::json j = report.ToJson();
    j.erase("nodes");
    Emit(summary, j.dump(2));
  });
}

dgx_status dgx_reproduce_table1(const dgx_config* config, const uint64_t* seeds,
                                size_t num_seeds, dgx_result** summary) {
  return Guard([&] {
    RequireArg(config != nullptr, "null config");
    RequireArg(seeds != nullptr && num_seeds > 0, "at least one seed is required");
    dgx::Table1Config t = dgx::Table1Config::FromRunConfig(config->config);
    t.seeds.assign(seeds, seeds + num_seeds);
    const dgx::Table1Report report = dgx::RunTable1(t);
    const std::filesystem::path out = config->config.Out();
    const std::string json = report.ToJson().dump(2) + "\n";
    dgx::WriteTextFile(out / "table1.json", json);
    dgx::WriteTextFile(out / "table1_seeds.csv", report.PerSeedCsv());
    dgx::WriteTextFile(out / "table1.txt", report.GridText());
    Emit(summary, json);
  });
}

dgx_status dgx_table2(const dgx_config* config, const char* manifest_path, int sample_nodes,
                      dgx_result** summary) {
  return Guard([&] {
    RequireArg(config != nullptr && manifest_path != nullptr, "null argument");
    const dgx::RunConfig& rc = config->config;
    const dgx::Dataset dataset = dgx::LoadReal(dgx::RealDatasetManifest::Load(manifest_path));
    dgx::Table2Config t;
    t.sample_nodes = sample_nodes;
    t.all_test_nodes = sample_nodes <= 0;
    t.seed = rc.Seed();
    t.alpha = rc.Alpha();
    t.model = rc.Model();
    t.train = rc.Train();
    t.gnn = rc.ExplainerSettings(dgx::ExplainerKind::kGnn);
    t.pg = rc.ExplainerSettings(dgx::ExplainerKind::kPg);
    t.eval = rc.Eval(0);
    const dgx::Table2Report report = dgx::RunTable2(dataset, t);
    nlohmann::json j = report.ToJson();
    j["config_hash"] = rc.Hash();
    const std::string json = j.dump(2) + "\n";
    std::string csv = report.ToCsv();
    // Prefix every CSV row with the config hash.
    std::istringstream in(csv);
    std::string line;
    std::string stamped;
    bool header = true;
    while (std::getline(in, line)) {
      stamped += (header ? std::string("config_hash") : rc.Hash()) + "," + line + "\n";
      header = false;
    }
    const std::filesystem::path out = rc.Out();
    dgx::WriteTextFile(out / ("table2_" + dataset.name + ".json"), json);
    dgx::WriteTextFile(out / ("table2_" + dataset.name + ".csv"), stamped);
    Emit(summary, json);
  });
}

dgx_status dgx_oracle(const dgx_config* config, const char* kind, dgx_result** summary) {
  return Guard([&] {
    RequireArg(config != nullptr && kind != nullptr, "null argument");
    const std::string k = kind;
    nlohmann::json j;
    if (k == "theorem1") {
      dgx::Theorem1Config t;
      t.seed = config->config.Seed();
      j = dgx::RunTheorem1Suite(t).ToJson();
    } else if (k == "entropy") {
      dgx::EntropySuiteConfig e;
      e.seed = config->config.Seed();
      e.dataset_seed = config->config.Seed();
      e.alpha = config->config.Alpha();
      j = dgx::RunEntropySuite(e).ToJson();
    } else {
      throw dgx::Error(dgx::ErrorCode::kInvalidArgument,
                       "unknown oracle '" + k + "' (expected theorem1 or entropy)");
    }
    j["config_hash"] = config->config.Hash();
    const std::string json = j.dump(2) + "\n";
    dgx::WriteTextFile(config->config.Out() / ("oracle_" + k + ".json"), json);
    Emit(summary, json);
  });
}

dgx_status dgx_export_dot(const char* explanation_path, int target, const char* ground_truth_csv,
                          const char* out_path) {
  return Guard([&] {
    RequireArg(explanation_path != nullptr && out_path != nullptr, "null argument");
    const std::string text = dgx::ReadTextFile(explanation_path);
    std::optional<dgx::Explanation> chosen;
    std::istringstream in(text);
    std::string line;
    bool single_object = false;
    try {
      // A pretty-printed single object spans lines; try it first.
      const nlohmann::json j = nlohmann::json::parse(text);
      single_object = j.is_object();
      if (single_object) chosen = dgx::ExplanationFromJson(j);
    } catch (const nlohmann::json::exception&) {
    }
    if (!single_object) {
      while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
          throw dgx::Error(dgx::ErrorCode::kParse,
                           std::string(explanation_path) + ": " + e.what());
        }
        dgx::Explanation e = dgx::ExplanationFromJson(j);
        if (target < 0 || e.target == target) {
          chosen = std::move(e);
          break;
        }
      }
    }
    dgx::Require(chosen.has_value(), target < 0 ? dgx::ErrorCode::kParse
                                                : dgx::ErrorCode::kInvalidArgument,
                 target < 0 ? "no explanation in file"
                            : "no explanation for node " + std::to_string(target));
    std::set<dgx::Edge> truth;
    if (ground_truth_csv != nullptr) {
      for (const dgx::Edge& e : dgx::ReadEdgePairs(ground_truth_csv)) truth.insert(e);
    }
    dgx::WriteTextFile(out_path, dgx::ExplanationToDot(*chosen, truth));
  });
}

}  // extern "C"
