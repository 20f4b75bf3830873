#include "dgx/harness.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "dgx/graph_io.h"
#include "dgx/rng.h"

namespace dgx {
namespace fs = std::filesystem;

namespace {

enum class KeyType { kString, kInt, kUint, kDouble, kBool, kDataset, kPipeline, kExplainer,
                     kConvention, kBudget };

struct KeySpec {
  const char* name;
  KeyType type;
  bool hashed;
};

// Sorted by name; Canonical() relies on the order.
constexpr KeySpec kKeys[] = {
    {"alpha", KeyType::kDouble, true},
    {"attachment", KeyType::kInt, true},
    {"base_nodes", KeyType::kInt, true},
    {"budget", KeyType::kBudget, true},
    {"convention", KeyType::kConvention, true},
    {"dataset", KeyType::kDataset, true},
    {"epochs", KeyType::kInt, true},
    {"explainer", KeyType::kExplainer, true},
    {"explainer.entropy_penalty", KeyType::kDouble, true},
    {"explainer.epochs", KeyType::kInt, true},
    {"explainer.feature_mask", KeyType::kBool, true},
    {"explainer.hidden", KeyType::kInt, true},
    {"explainer.lr", KeyType::kDouble, true},
    {"explainer.samples", KeyType::kInt, true},
    {"explainer.size_penalty", KeyType::kDouble, true},
    {"explainer.tau_end", KeyType::kDouble, true},
    {"explainer.tau_start", KeyType::kDouble, true},
    {"hidden", KeyType::kInt, true},
    {"jobs", KeyType::kInt, false},
    {"k", KeyType::kInt, true},
    {"layers", KeyType::kInt, true},
    {"lr", KeyType::kDouble, true},
    {"manifest", KeyType::kString, true},
    {"motif_count", KeyType::kInt, true},
    {"noise", KeyType::kBool, true},
    {"noise_fraction", KeyType::kDouble, true},
    {"out", KeyType::kString, false},
    {"patience", KeyType::kInt, true},
    {"preprocess", KeyType::kPipeline, true},
    {"reciprocal_credit", KeyType::kBool, true},
    {"seed", KeyType::kUint, true},
    {"targets", KeyType::kInt, true},
    {"tree_depth", KeyType::kInt, true},
    {"w_plus", KeyType::kDouble, true},
    {"weight_decay", KeyType::kDouble, true},
};

const KeySpec* FindKey(std::string_view key) {
  for (const KeySpec& k : kKeys) {
    if (key == k.name) return &k;
  }
  return nullptr;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value, const char* expected) {
  throw Error(ErrorCode::kInvalidArgument, "config key '" + std::string(key) + "': '" +
                                               std::string(value) + "' is not " + expected);
}

int64_t ParseInt(std::string_view key, std::string_view value) {
  int64_t out = 0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) BadValue(key, value, "an integer");
  return out;
}

uint64_t ParseUint(std::string_view key, std::string_view value) {
  uint64_t out = 0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) {
    BadValue(key, value, "a non-negative integer");
  }
  return out;
}

double ParseDouble(std::string_view key, std::string_view value) {
  const std::string s(value);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(out)) {
    BadValue(key, value, "a finite number");
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  BadValue(key, value, "a boolean");
}

Budget ParseBudget(std::string_view value) {
  if (value == "nodes") return Budget::kNodes;
  if (value == "edges") return Budget::kEdges;
  throw Error(ErrorCode::kInvalidArgument, "unknown budget '" + std::string(value) + "'");
}

const char* BudgetName(Budget b) { return b == Budget::kNodes ? "nodes" : "edges"; }

void Validate(const KeySpec& spec, std::string_view value) {
  switch (spec.type) {
    case KeyType::kString: break;
    case KeyType::kInt: ParseInt(spec.name, value); break;
    case KeyType::kUint: ParseUint(spec.name, value); break;
    case KeyType::kDouble: ParseDouble(spec.name, value); break;
    case KeyType::kBool: ParseBool(spec.name, value); break;
    case KeyType::kDataset: ParseDatasetKind(value); break;
    case KeyType::kPipeline: ParseProvenance(value); break;
    case KeyType::kExplainer: ParseExplainerKind(value); break;
    case KeyType::kConvention: ParseFidelityConvention(value); break;
    case KeyType::kBudget: ParseBudget(value); break;
  }
}

std::string FormatDouble(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string FormatBool(bool b) { return b ? "true" : "false"; }

// Runs fn(0..n-1) on up to `jobs` threads. Results must be written by index.
void ParallelFor(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += jobs) {
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void CheckHash(const std::string& found, const std::string& expected, const std::string& what) {
  Require(found == expected, ErrorCode::kHashMismatch,
          what + " was produced under config hash " + (found.empty() ? "<none>" : found) +
              ", current config hash is " + expected);
}

Dataset LoadStageDataset(const RunConfig& config, const StagePaths& paths) {
  Require(fs::exists(paths.dataset_dir / "meta.json"), ErrorCode::kMissingArtifact,
          "dataset not generated yet (" + (paths.dataset_dir / "meta.json").string() + ")");
  const nlohmann::json meta = ReadJsonFile(paths.dataset_dir / "meta.json");
  CheckHash(meta.value("config_hash", ""), config.Hash(), "dataset");
  return LoadDataset(paths.dataset_dir);
}

nn::GcnModel LoadStageModel(const RunConfig& config, const StagePaths& paths) {
  Require(fs::exists(paths.checkpoint), ErrorCode::kMissingArtifact,
          "model not trained yet (" + paths.checkpoint.string() + ")");
  nn::GcnModel model = nn::LoadCheckpoint(paths.checkpoint);
  CheckHash(model.config_hash(), config.Hash(), "checkpoint");
  return model;
}

std::vector<Explanation> ExplainTargets(const ExplainContext& ctx, std::span<const int> targets,
                                        ExplainerKind kind, const ExplainerConfig& settings,
                                        int jobs) {
  std::vector<Explanation> out(targets.size());
  if (kind == ExplainerKind::kGnn) {
    ParallelFor(static_cast<int>(targets.size()), jobs,
                [&](int i) { out[i] = GnnExplainer(ctx, targets[i], settings); });
  } else {
    const PgExplainerNet net = PgExplainerTrain(ctx, targets, settings);
    ParallelFor(static_cast<int>(targets.size()), jobs,
                [&](int i) { out[i] = PgExplainerExplain(net, ctx, targets[i]); });
  }
  return out;
}

}  // namespace

ExitCode ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return ExitCode::kUsage;
    case ErrorCode::kMissingArtifact: return ExitCode::kMissingArtifact;
    default: return ExitCode::kValidation;
  }
}

nlohmann::json ErrorRecord(const Error& error) {
  return {{"error", ErrorCodeName(error.code())},
          {"message", error.what()},
          {"exit", static_cast<int>(ExitCodeFor(error.code()))}};
}

// ---- RunConfig --------------------------------------------------------------

void RunConfig::Set(std::string_view key, std::string_view value) {
  key = Trim(key);
  value = Trim(value);
  const KeySpec* spec = FindKey(key);
  Require(spec != nullptr, ErrorCode::kInvalidArgument,
          "unknown config key '" + std::string(key) + "'");
  // "auto" is how the canonical dump spells an unset k.
  if (key == "k" && value == "auto") {
    entries_.erase(std::string(key));
    return;
  }
  Validate(*spec, value);
  entries_[std::string(key)] = std::string(value);
}

bool RunConfig::Has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

RunConfig RunConfig::Parse(std::string_view text) {
  RunConfig config;
  int line_no = 0;
  while (!text.empty()) {
    const size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    Require(eq != std::string_view::npos, ErrorCode::kInvalidArgument,
            "config line " + std::to_string(line_no) + ": expected key = value");
    config.Set(line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

RunConfig RunConfig::FromFile(const fs::path& path) {
  Require(fs::exists(path), ErrorCode::kMissingArtifact,
          "config file '" + path.string() + "' not found");
  return Parse(ReadTextFile(path));
}

std::string RunConfig::Raw(std::string_view key, std::string_view fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? std::string(fallback) : it->second;
}

SyntheticSpec RunConfig::DatasetSpec() const {
  const DatasetKind kind = ParseDatasetKind(Raw("dataset", "ba_shapes"));
  SyntheticSpec spec = SyntheticSpec::Defaults(kind, Seed());
  if (Has("base_nodes")) spec.base_nodes = static_cast<int>(ParseInt("base_nodes", Raw("base_nodes", "")));
  if (Has("attachment")) spec.attachment = static_cast<int>(ParseInt("attachment", Raw("attachment", "")));
  if (Has("motif_count")) spec.motif_count = static_cast<int>(ParseInt("motif_count", Raw("motif_count", "")));
  if (Has("tree_depth")) spec.tree_depth = static_cast<int>(ParseInt("tree_depth", Raw("tree_depth", "")));
  if (Has("noise")) spec.noise = ParseBool("noise", Raw("noise", ""));
  if (Has("noise_fraction")) spec.noise_fraction = ParseDouble("noise_fraction", Raw("noise_fraction", ""));
  return spec;
}

std::string RunConfig::Manifest() const { return Raw("manifest", ""); }

Provenance RunConfig::Pipeline() const { return ParseProvenance(Raw("preprocess", "lapnorm")); }

double RunConfig::Alpha() const { return ParseDouble("alpha", Raw("alpha", "0.1")); }

nn::GcnConfig RunConfig::Model() const {
  nn::GcnConfig m;
  if (Has("layers")) m.layers = static_cast<int>(ParseInt("layers", Raw("layers", "")));
  if (Has("hidden")) m.hidden = static_cast<int>(ParseInt("hidden", Raw("hidden", "")));
  return m;
}

nn::TrainConfig RunConfig::Train() const {
  nn::TrainConfig t;
  if (Has("epochs")) t.epochs = static_cast<int>(ParseInt("epochs", Raw("epochs", "")));
  if (Has("lr")) t.learning_rate = ParseDouble("lr", Raw("lr", ""));
  if (Has("weight_decay")) t.weight_decay = ParseDouble("weight_decay", Raw("weight_decay", ""));
  if (Has("patience")) t.patience = static_cast<int>(ParseInt("patience", Raw("patience", "")));
  t.seed = Seed();
  return t;
}

ExplainerKind RunConfig::Explainer() const { return ParseExplainerKind(Raw("explainer", "gnn")); }

ExplainerConfig RunConfig::ExplainerSettings() const { return ExplainerSettings(Explainer()); }

ExplainerConfig RunConfig::ExplainerSettings(ExplainerKind kind) const {
  ExplainerConfig c = ExplainerConfig::Defaults(kind);
  auto get_int = [&](const char* key, int& field) {
    if (Has(key)) field = static_cast<int>(ParseInt(key, Raw(key, "")));
  };
  auto get_double = [&](const char* key, double& field) {
    if (Has(key)) field = ParseDouble(key, Raw(key, ""));
  };
  get_int("explainer.epochs", c.epochs);
  get_double("explainer.lr", c.learning_rate);
  get_double("explainer.size_penalty", c.size_penalty);
  get_double("explainer.entropy_penalty", c.entropy_penalty);
  if (Has("explainer.feature_mask")) {
    c.feature_mask = ParseBool("explainer.feature_mask", Raw("explainer.feature_mask", ""));
  }
  get_double("explainer.tau_start", c.tau_start);
  get_double("explainer.tau_end", c.tau_end);
  get_int("explainer.samples", c.samples);
  get_int("explainer.hidden", c.hidden);
  c.seed = Seed();
  c.Validate();
  return c;
}

int RunConfig::Targets() const {
  const int t = static_cast<int>(ParseInt("targets", Raw("targets", "40")));
  Require(t >= 0, ErrorCode::kInvalidArgument, "targets must be >= 0");
  return t;
}

int RunConfig::K(int motif_size) const {
  if (Has("k")) {
    const int k = static_cast<int>(ParseInt("k", Raw("k", "")));
    Require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
    return k;
  }
  return motif_size > 0 ? motif_size : 10;
}

EvalOptions RunConfig::Eval(int motif_size) const {
  EvalOptions e;
  e.k = K(motif_size);
  e.w_plus = ParseDouble("w_plus", Raw("w_plus", "0.5"));
  Require(e.w_plus >= 0.0 && e.w_plus <= 1.0, ErrorCode::kInvalidArgument,
          "w_plus must lie in [0, 1]");
  e.w_minus = 1.0 - e.w_plus;
  e.convention = ParseFidelityConvention(Raw("convention", "standard"));
  e.reciprocal_credit = ParseBool("reciprocal_credit", Raw("reciprocal_credit", "true"));
  e.budget = ParseBudget(Raw("budget", "nodes"));
  return e;
}

uint64_t RunConfig::Seed() const { return ParseUint("seed", Raw("seed", "0")); }

fs::path RunConfig::Out() const { return Raw("out", "out"); }

int RunConfig::Jobs() const {
  const int j = static_cast<int>(ParseInt("jobs", Raw("jobs", "1")));
  Require(j >= 1, ErrorCode::kInvalidArgument, "jobs must be >= 1");
  return j;
}

std::string RunConfig::Canonical() const {
  const SyntheticSpec spec = DatasetSpec();
  const nn::GcnConfig model = Model();
  const nn::TrainConfig train = Train();
  const ExplainerConfig ex = ExplainerSettings();
  const EvalOptions eval = Eval(0);
  std::map<std::string, std::string> v;
  v["alpha"] = FormatDouble(Alpha());
  v["attachment"] = std::to_string(spec.attachment);
  v["base_nodes"] = std::to_string(spec.base_nodes);
  v["budget"] = BudgetName(eval.budget);
  v["convention"] = FidelityConventionName(eval.convention);
  v["dataset"] = DatasetKindName(spec.kind);
  v["epochs"] = std::to_string(train.epochs);
  v["explainer"] = ExplainerKindName(Explainer());
  v["explainer.entropy_penalty"] = FormatDouble(ex.entropy_penalty);
  v["explainer.epochs"] = std::to_string(ex.epochs);
  v["explainer.feature_mask"] = FormatBool(ex.feature_mask);
  v["explainer.hidden"] = std::to_string(ex.hidden);
  v["explainer.lr"] = FormatDouble(ex.learning_rate);
  v["explainer.samples"] = std::to_string(ex.samples);
  v["explainer.size_penalty"] = FormatDouble(ex.size_penalty);
  v["explainer.tau_end"] = FormatDouble(ex.tau_end);
  v["explainer.tau_start"] = FormatDouble(ex.tau_start);
  v["hidden"] = std::to_string(model.hidden);
  v["k"] = Has("k") ? std::to_string(K(0)) : "auto";
  v["layers"] = std::to_string(model.layers);
  v["lr"] = FormatDouble(train.learning_rate);
  v["manifest"] = Manifest();
  v["motif_count"] = std::to_string(spec.motif_count);
  v["noise"] = FormatBool(spec.noise);
  v["noise_fraction"] = FormatDouble(spec.noise_fraction);
  v["patience"] = std::to_string(train.patience);
  v["preprocess"] = ProvenanceName(Pipeline());
  v["reciprocal_credit"] = FormatBool(eval.reciprocal_credit);
  v["seed"] = std::to_string(Seed());
  v["targets"] = std::to_string(Targets());
  v["tree_depth"] = std::to_string(spec.tree_depth);
  v["w_plus"] = FormatDouble(eval.w_plus);
  v["weight_decay"] = FormatDouble(train.weight_decay);
  std::string out;
  for (const KeySpec& k : kKeys) {
    if (!k.hashed) continue;
    out += k.name;
    out += '=';
    out += v.at(k.name);
    out += '\n';
  }
  return out;
}

std::string RunConfig::Hash() const { return Sha256Hex(Canonical()).substr(0, 16); }

// ---- Stages -----------------------------------------------------------------

StagePaths StagePaths::Under(const fs::path& out) {
  StagePaths p;
  p.dataset_dir = out / "dataset";
  p.checkpoint = out / "model.ckpt";
  p.train_log = out / "train.json";
  p.explanations = out / "explanations.jsonl";
  p.report_json = out / "metrics.json";
  p.report_csv = out / "metrics.csv";
  return p;
}

Dataset BuildDataset(const RunConfig& config) {
  if (!config.Manifest().empty()) return LoadReal(RealDatasetManifest::Load(config.Manifest()));
  return Generate(config.DatasetSpec());
}

std::vector<int> SelectTargets(const Dataset& dataset, int count, uint64_t seed) {
  const DiGraph& g = dataset.graph;
  std::vector<int> pool;
  if (g.ground_truth() && !g.ground_truth()->empty()) {
    std::vector<bool> incident(static_cast<size_t>(g.num_nodes()), false);
    for (int e : *g.ground_truth()) {
      incident[g.edge(e).src] = true;
      incident[g.edge(e).dst] = true;
    }
    // Labels also carried by nodes outside the ground truth belong to the base.
    std::set<int> base_labels;
    for (int v = 0; v < g.num_nodes(); ++v) {
      if (!incident[v]) base_labels.insert(g.labels()[v]);
    }
    for (int v = 0; v < g.num_nodes(); ++v) {
      if (incident[v] && !base_labels.count(g.labels()[v])) pool.push_back(v);
    }
  } else {
    pool = dataset.split.Nodes(SplitRole::kTest);
  }
  Require(!pool.empty(), ErrorCode::kInvalidArgument, "dataset has no explainable nodes");
  if (count > 0 && count < static_cast<int>(pool.size())) {
    Rng rng = MakeRng(seed, "targets");
    for (int i = 0; i < count; ++i) {
      std::swap(pool[i], pool[i + UniformIndex(rng, pool.size() - i)]);
    }
    pool.resize(count);
  }
  std::sort(pool.begin(), pool.end());
  return pool;
}

void StageGenerate(const RunConfig& config) {
  const StagePaths paths = StagePaths::Under(config.Out());
  const Dataset dataset = BuildDataset(config);
  const SyntheticSpec spec = config.DatasetSpec();
  nlohmann::json meta;
  meta["config_hash"] = config.Hash();
  if (config.Manifest().empty()) {
    meta["spec"] = {{"dataset", DatasetKindName(spec.kind)},
                    {"base_nodes", spec.base_nodes},
                    {"attachment", spec.attachment},
                    {"motif_count", spec.motif_count},
                    {"tree_depth", spec.tree_depth},
                    {"noise", spec.noise},
                    {"noise_fraction", spec.noise_fraction},
                    {"seed", spec.seed}};
  } else {
    meta["manifest"] = config.Manifest();
  }
  SaveDataset(dataset, paths.dataset_dir, meta);
}

void StageTrain(const RunConfig& config) {
  const StagePaths paths = StagePaths::Under(config.Out());
  const Dataset dataset = LoadStageDataset(config, paths);
  const ProcessedGraph processed = Preprocess(dataset.graph, config.Pipeline(), config.Alpha());
  Dataset trained_on = dataset;
  trained_on.graph = processed.graph;
  const nn::GcnModel init = nn::GcnModel::Initialize(
      static_cast<int>(nn::ModelInput(dataset.graph).cols()), dataset.num_classes,
      config.Model(), config.Seed());
  nn::TrainResult result = nn::Train(init, trained_on, processed.prop, config.Train());
  result.model.set_config_hash(config.Hash());
  nn::SaveCheckpoint(result.model, paths.checkpoint);

  const bool valid = PassesAccuracyGate(result.best_val_accuracy, dataset.num_classes);
  nlohmann::json log;
  log["config_hash"] = config.Hash();
  log["best_epoch"] = result.best_epoch;
  log["best_val_accuracy"] = result.best_val_accuracy;
  log["test_accuracy"] = result.test_accuracy;
  log["model_valid"] = valid;
  log["history"] = nlohmann::json::array();
  for (const nn::EpochRecord& r : result.history) {
    log["history"].push_back({{"epoch", r.epoch},
                              {"train_loss", r.train_loss},
                              {"train_accuracy", r.train_accuracy},
                              {"val_loss", r.val_loss},
                              {"val_accuracy", r.val_accuracy}});
  }
  WriteTextFile(paths.train_log, log.dump(2) + "\n");
  Require(valid, ErrorCode::kValidationGate,
          "model failed the accuracy gate (best validation accuracy " +
              FormatDouble(result.best_val_accuracy) + ")");
}

void StageExplain(const RunConfig& config) {
  const StagePaths paths = StagePaths::Under(config.Out());
  const Dataset dataset = LoadStageDataset(config, paths);
  const nn::GcnModel model = LoadStageModel(config, paths);
  const ProcessedGraph processed = Preprocess(dataset.graph, config.Pipeline(), config.Alpha());
  const ExplainContext ctx(model, processed);
  const std::vector<int> targets = SelectTargets(dataset, config.Targets(), config.Seed());
  const std::vector<Explanation> explanations =
      ExplainTargets(ctx, targets, config.Explainer(), config.ExplainerSettings(), config.Jobs());
  std::string text;
  for (const Explanation& e : explanations) text += ExplanationToJson(e).dump() + "\n";
  WriteTextFile(paths.explanations, text);
}

MetricsReport StageEvaluate(const RunConfig& config) {
  const StagePaths paths = StagePaths::Under(config.Out());
  const Dataset dataset = LoadStageDataset(config, paths);
  const nn::GcnModel model = LoadStageModel(config, paths);
  Require(fs::exists(paths.explanations), ErrorCode::kMissingArtifact,
          "no explanations yet (" + paths.explanations.string() + ")");
  std::vector<Explanation> explanations;
  {
    std::istringstream in(ReadTextFile(paths.explanations));
    std::string line;
    while (std::getline(in, line)) {
      if (Trim(line).empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParse, paths.explanations.string() + ": " + e.what());
      }
      explanations.push_back(ExplanationFromJson(j));
      CheckHash(explanations.back().config_hash, config.Hash(), "explanation");
    }
  }
  const ProcessedGraph processed = Preprocess(dataset.graph, config.Pipeline(), config.Alpha());
  const ExplainContext ctx(model, processed);
  MetricsReport report = EvaluateExplanations(ctx, explanations, config.Eval(dataset.motif_size));
  report.dataset = dataset.name;
  report.explainer = ExplainerKindName(config.Explainer());
  report.pipeline = ProvenanceName(config.Pipeline());
  report.config_hash = config.Hash();
  report.seed = config.Seed();
  report.threads = config.Jobs();
  // The eigensolver is cubic; skip the entropy record on large graphs.
  if (dataset.graph.num_nodes() <= 2500) {
    report.entropy = EntropyOf(dataset.graph, dataset.name, dataset.seed, config.Alpha(), 1e-2);
  }
  WriteTextFile(paths.report_json, report.ToJson().dump(2) + "\n");
  WriteTextFile(paths.report_csv, report.ToCsv());
  return report;
}

// ---- Table 1 ----------------------------------------------------------------

Table1Config Table1Config::FromRunConfig(const RunConfig& config) {
  Table1Config t;
  t.alpha = config.Alpha();
  t.model = config.Model();
  t.train = config.Train();
  t.gnn = config.ExplainerSettings(ExplainerKind::kGnn);
  t.pg = config.ExplainerSettings(ExplainerKind::kPg);
  t.eval = config.Eval(0);
  t.targets = config.Targets();
  t.jobs = config.Jobs();
  t.config_hash = config.Hash();
  return t;
}

namespace {

std::vector<Table1Cell> RunTable1Unit(const Table1Config& config, DatasetKind kind,
                                      uint64_t seed) {
  const Dataset dataset = Generate(SyntheticSpec::Defaults(kind, seed));
  const std::vector<int> targets = SelectTargets(dataset, config.targets, seed);
  std::vector<Table1Cell> cells;
  for (Provenance pipeline : {Provenance::kSymm, Provenance::kLapNorm}) {
    const ProcessedGraph processed = Preprocess(dataset.graph, pipeline, config.alpha);
    Dataset trained_on = dataset;
    trained_on.graph = processed.graph;
    const nn::GcnModel init = nn::GcnModel::Initialize(
        static_cast<int>(nn::ModelInput(dataset.graph).cols()), dataset.num_classes,
        config.model, seed);
    nn::TrainConfig train = config.train;
    train.seed = seed;
    const nn::TrainResult trained = nn::Train(init, trained_on, processed.prop, train);
    const ExplainContext ctx(trained.model, processed);
    EvalOptions eval = config.eval;
    eval.k = dataset.motif_size > 0 ? dataset.motif_size : eval.k;
    for (ExplainerKind kind_e : {ExplainerKind::kGnn, ExplainerKind::kPg}) {
      ExplainerConfig settings = kind_e == ExplainerKind::kGnn ? config.gnn : config.pg;
      settings.seed = seed;
      const std::vector<Explanation> explanations =
          ExplainTargets(ctx, targets, kind_e, settings, 1);
      const MetricsReport report = EvaluateExplanations(ctx, explanations, eval);
      Table1Cell cell;
      cell.dataset = kind;
      cell.seed = seed;
      cell.explainer = kind_e;
      cell.pipeline = pipeline;
      cell.auc = report.auc;
      cell.auc_undefined = report.auc_undefined;
      cell.characterization = report.characterization;
      cell.test_accuracy = trained.test_accuracy;
      cell.best_val_accuracy = trained.best_val_accuracy;
      cell.model_valid = PassesAccuracyGate(trained.best_val_accuracy, dataset.num_classes);
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace

Table1Report RunTable1(const Table1Config& config) {
  Require(!config.datasets.empty() && !config.seeds.empty(), ErrorCode::kInvalidArgument,
          "Table 1 sweep needs datasets and seeds");
  const int units = static_cast<int>(config.datasets.size() * config.seeds.size());
  std::vector<std::vector<Table1Cell>> results(static_cast<size_t>(units));
  ParallelFor(units, config.jobs, [&](int u) {
    const DatasetKind kind = config.datasets[u / config.seeds.size()];
    const uint64_t seed = config.seeds[u % config.seeds.size()];
    results[u] = RunTable1Unit(config, kind, seed);
  });
  Table1Report report;
  report.config = config;
  for (auto& r : results) {
    for (Table1Cell& c : r) report.cells.push_back(c);
  }
  return report;
}

std::optional<double> Table1Report::MeanAuc(DatasetKind dataset, ExplainerKind explainer,
                                            Provenance pipeline) const {
  double sum = 0.0;
  int count = 0;
  for (const Table1Cell& c : cells) {
    if (c.dataset == dataset && c.explainer == explainer && c.pipeline == pipeline && c.auc) {
      sum += c.auc->mean;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

bool Table1Report::AnyInvalidModel(DatasetKind dataset) const {
  for (const Table1Cell& c : cells) {
    if (c.dataset == dataset && !c.model_valid) return true;
  }
  return false;
}

std::vector<GateResult> Table1Report::Gates() const {
  std::vector<GateResult> gates;
  auto present = [&](DatasetKind k) {
    return std::find(config.datasets.begin(), config.datasets.end(), k) != config.datasets.end();
  };
  auto fmt = [](std::optional<double> x) {
    if (!x) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *x);
    return std::string(buf);
  };
  const ExplainerKind explainers[] = {ExplainerKind::kGnn, ExplainerKind::kPg};

  {
    GateResult g{"directionality", true, ""};
    bool any = false;
    for (DatasetKind k : {DatasetKind::kDiLinkMotif, DatasetKind::kDiLinkBase}) {
      if (!present(k)) continue;
      for (ExplainerKind e : explainers) {
        const auto b = MeanAuc(k, e, Provenance::kSymm);
        const auto l = MeanAuc(k, e, Provenance::kLapNorm);
        const bool ok = b && l && *l - *b >= 0.05;
        any = true;
        g.pass = g.pass && ok;
        g.detail += std::string(DatasetKindName(k)) + "/" + ExplainerKindName(e) + " L-B=" +
                    (b && l ? fmt(*l - *b) : "n/a") + (ok ? " ok; " : " FAIL; ");
      }
    }
    if (!any) g.pass = false;
    gates.push_back(g);
  }
  {
    GateResult g{"parity", true, ""};
    bool any = false;
    for (DatasetKind k : {DatasetKind::kBaShapes, DatasetKind::kBaCommunity,
                          DatasetKind::kTreeCycles, DatasetKind::kTreeGrid}) {
      if (!present(k)) continue;
      for (ExplainerKind e : explainers) {
        const auto b = MeanAuc(k, e, Provenance::kSymm);
        const auto l = MeanAuc(k, e, Provenance::kLapNorm);
        const bool ok = b && l && std::abs(*l - *b) <= 0.05;
        any = true;
        g.pass = g.pass && ok;
        g.detail += std::string(DatasetKindName(k)) + "/" + ExplainerKindName(e) + " |L-B|=" +
                    (b && l ? fmt(std::abs(*l - *b)) : "n/a") + (ok ? " ok; " : " FAIL; ");
      }
    }
    if (!any) g.pass = false;
    gates.push_back(g);
  }
  {
    GateResult g{"floor", true, ""};
    bool any = false;
    for (DatasetKind k : {DatasetKind::kBaShapes, DatasetKind::kTreeCycles}) {
      if (!present(k)) continue;
      for (ExplainerKind e : explainers) {
        const double floor = e == ExplainerKind::kPg ? 0.85 : 0.80;
        for (Provenance p : {Provenance::kSymm, Provenance::kLapNorm}) {
          const auto a = MeanAuc(k, e, p);
          const bool ok = a && *a >= floor;
          any = true;
          g.pass = g.pass && ok;
          g.detail += std::string(DatasetKindName(k)) + "/" + ExplainerKindName(e) + "/" +
                      ProvenanceName(p) + "=" + fmt(a) + (ok ? " ok; " : " FAIL; ");
        }
      }
    }
    if (!any) g.pass = false;
    gates.push_back(g);
  }
  for (DatasetKind k : config.datasets) {
    if (AnyInvalidModel(k)) {
      gates.push_back({std::string("model_valid/") + DatasetKindName(k), false,
                       "a base model failed the accuracy gate"});
    }
  }
  return gates;
}

std::string Table1Report::PerSeedCsv() const {
  std::string out =
      "config_hash,dataset,seed,explainer,pipeline,auc,auc_std,auc_count,auc_undefined,char,"
      "test_accuracy,best_val_accuracy,model_valid\n";
  char line[512];
  for (const Table1Cell& c : cells) {
    std::snprintf(line, sizeof(line), "%s,%s,%llu,%s,%s,%s,%s,%d,%d,%.17g,%.17g,%.17g,%s\n",
                  config.config_hash.c_str(), DatasetKindName(c.dataset),
                  static_cast<unsigned long long>(c.seed),
                  ExplainerKindName(c.explainer), ProvenanceName(c.pipeline),
                  c.auc ? FormatDouble(c.auc->mean).c_str() : "",
                  c.auc ? FormatDouble(c.auc->stddev).c_str() : "", c.auc ? c.auc->count : 0,
                  c.auc_undefined, c.characterization.mean, c.test_accuracy,
                  c.best_val_accuracy, c.model_valid ? "true" : "false");
    out += line;
  }
  return out;
}

std::string Table1Report::GridText() const {
  std::string out = "config_hash " + config.config_hash + "\nExplanation AUC (mean over seeds";
  for (size_t i = 0; i < config.seeds.size(); ++i) {
    out += (i == 0 ? " " : ",") + std::to_string(config.seeds[i]);
  }
  out += ")\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-16s", "");
  out += buf;
  for (DatasetKind k : config.datasets) {
    std::snprintf(buf, sizeof(buf), " %13s", DatasetKindName(k));
    out += buf;
  }
  out += "\n";
  for (ExplainerKind e : {ExplainerKind::kGnn, ExplainerKind::kPg}) {
    for (Provenance p : {Provenance::kSymm, Provenance::kLapNorm}) {
      std::snprintf(buf, sizeof(buf), "%-16s",
                    (std::string(ExplainerKindName(e)) + "(" +
                     (p == Provenance::kSymm ? "B" : "L") + ")")
                        .c_str());
      out += buf;
      for (DatasetKind k : config.datasets) {
        const auto a = MeanAuc(k, e, p);
        if (a) {
          std::snprintf(buf, sizeof(buf), " %12.3f%s", *a, AnyInvalidModel(k) ? "*" : " ");
        } else {
          std::snprintf(buf, sizeof(buf), " %13s", "n/a");
        }
        out += buf;
      }
      out += "\n";
    }
  }
  out += "Gates:\n";
  for (const GateResult& g : Gates()) {
    out += "  " + g.name + ": " + (g.pass ? "PASS" : "FAIL") + "  " + g.detail + "\n";
  }
  return out;
}

nlohmann::json Table1Report::ToJson() const {
  nlohmann::json j;
  j["config_hash"] = config.config_hash;
  j["seeds"] = config.seeds;
  j["targets"] = config.targets;
  j["alpha"] = config.alpha;
  j["cells"] = nlohmann::json::array();
  for (const Table1Cell& c : cells) {
    nlohmann::json cell = {{"dataset", DatasetKindName(c.dataset)},
                           {"seed", c.seed},
                           {"explainer", ExplainerKindName(c.explainer)},
                           {"pipeline", ProvenanceName(c.pipeline)},
                           {"auc_undefined", c.auc_undefined},
                           {"char", c.characterization.mean},
                           {"test_accuracy", c.test_accuracy},
                           {"best_val_accuracy", c.best_val_accuracy},
                           {"model_valid", c.model_valid}};
    cell["auc"] = c.auc ? nlohmann::json(c.auc->mean) : nlohmann::json(nullptr);
    j["cells"].push_back(cell);
  }
  j["grid"] = nlohmann::json::array();
  for (DatasetKind k : config.datasets) {
    for (ExplainerKind e : {ExplainerKind::kGnn, ExplainerKind::kPg}) {
      for (Provenance p : {Provenance::kSymm, Provenance::kLapNorm}) {
        const auto a = MeanAuc(k, e, p);
        j["grid"].push_back({{"dataset", DatasetKindName(k)},
                             {"explainer", ExplainerKindName(e)},
                             {"pipeline", ProvenanceName(p)},
                             {"auc", a ? nlohmann::json(*a) : nlohmann::json(nullptr)}});
      }
    }
  }
  j["gates"] = nlohmann::json::array();
  for (const GateResult& g : Gates()) {
    j["gates"].push_back({{"name", g.name}, {"pass", g.pass}, {"detail", g.detail}});
  }
  return j;
}

}  // namespace dgx
