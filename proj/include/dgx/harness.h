#ifndef DGX_HARNESS_H_
#define DGX_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dgx/datagen.h"
#include "dgx/error.h"
#include "dgx/eval.h"
#include "dgx/explain.h"
#include "dgx/nn/gcn.h"
#include "dgx/nn/train.h"
#include "dgx/preprocess.h"
#include "dgx/realworld.h"

namespace dgx {

// Process exit statuses of the command-line tool.
enum class ExitCode { kOk = 0, kUsage = 1, kMissingArtifact = 2, kValidation = 3 };

ExitCode ExitCodeFor(ErrorCode code);

// Machine-readable error record: {"error": <code name>, "message": ..., "exit": n}.
nlohmann::json ErrorRecord(const Error& error);

// Key-value run configuration. One `key = value` per line; '#' starts a
// comment. Unset keys take defaults that depend on `dataset` and `explainer`,
// so later changes of those two keep explicit overrides.
//
//   dataset         ba_shapes | ba_community | tree_cycles | tree_grid |
//                   dilink_motif | dilink_base
//   base_nodes, attachment, motif_count, tree_depth, noise, noise_fraction
//   manifest        real-world manifest path (replaces the synthetic dataset)
//   preprocess      symm | lapnorm          alpha
//   layers, hidden, epochs, lr, weight_decay, patience
//   explainer       gnn | pg
//   explainer.epochs, explainer.lr, explainer.size_penalty,
//   explainer.entropy_penalty, explainer.feature_mask, explainer.tau_start,
//   explainer.tau_end, explainer.samples, explainer.hidden
//   targets         explained nodes per run, 0 = all
//   k               node budget (default: the dataset's motif size, else 10)
//   w_plus, convention (standard | paper_literal), reciprocal_credit,
//   budget (nodes | edges)
//   seed, out, jobs
//
// `out` and `jobs` do not enter the hash.
class RunConfig {
 public:
  // Throws kInvalidArgument for unknown keys or malformed values.
  void Set(std::string_view key, std::string_view value);
  bool Has(std::string_view key) const;
  static RunConfig Parse(std::string_view text);
  static RunConfig FromFile(const std::filesystem::path& path);

  SyntheticSpec DatasetSpec() const;
  std::string Manifest() const;
  Provenance Pipeline() const;
  double Alpha() const;
  nn::GcnConfig Model() const;
  nn::TrainConfig Train() const;
  ExplainerKind Explainer() const;
  ExplainerConfig ExplainerSettings() const;
  // Settings for another explainer kind, with the same explainer.* overrides.
  ExplainerConfig ExplainerSettings(ExplainerKind kind) const;
  int Targets() const;
  // `motif_size` of the dataset when k is unset and the dataset has one.
  int K(int motif_size) const;
  EvalOptions Eval(int motif_size) const;
  uint64_t Seed() const;
  std::filesystem::path Out() const;
  int Jobs() const;

  // Sorted `key=value` lines of every hashed key with its effective value.
  std::string Canonical() const;
  // First 16 hex digits of SHA-256(Canonical()).
  std::string Hash() const;

 private:
  std::string Raw(std::string_view key, std::string_view fallback) const;
  std::map<std::string, std::string, std::less<>> entries_;
};

// Artifact layout under RunConfig::out.
struct StagePaths {
  std::filesystem::path dataset_dir;
  std::filesystem::path checkpoint;
  std::filesystem::path train_log;
  std::filesystem::path explanations;  // JSON lines, one object per target
  std::filesystem::path report_json;
  std::filesystem::path report_csv;

  static StagePaths Under(const std::filesystem::path& out);
};

// Dataset named by the config: the manifest's fixture or a fresh synthetic one.
Dataset BuildDataset(const RunConfig& config);

// Explained nodes: a seeded sample of motif nodes, or of test nodes when the
// graph has no ground truth. Sorted.
std::vector<int> SelectTargets(const Dataset& dataset, int count, uint64_t seed);

void StageGenerate(const RunConfig& config);
void StageTrain(const RunConfig& config);
void StageExplain(const RunConfig& config);
MetricsReport StageEvaluate(const RunConfig& config);

// ---- Table 1 sweep ---------------------------------------------------------

struct Table1Config {
  std::vector<DatasetKind> datasets{std::begin(kAllDatasetKinds), std::end(kAllDatasetKinds)};
  std::vector<uint64_t> seeds{0, 1, 2};
  int targets = 40;
  double alpha = 0.1;
  nn::GcnConfig model;
  nn::TrainConfig train;
  ExplainerConfig gnn = ExplainerConfig::Defaults(ExplainerKind::kGnn);
  ExplainerConfig pg = ExplainerConfig::Defaults(ExplainerKind::kPg);
  EvalOptions eval;  // k is replaced by each dataset's motif size
  int jobs = 1;
  std::string config_hash;  // stamped into every report file

  // Model, training, explainer and eval settings of a run config.
  static Table1Config FromRunConfig(const RunConfig& config);
};

struct Table1Cell {
  DatasetKind dataset = DatasetKind::kBaShapes;
  uint64_t seed = 0;
  ExplainerKind explainer = ExplainerKind::kGnn;
  Provenance pipeline = Provenance::kSymm;
  std::optional<Aggregate> auc;
  int auc_undefined = 0;
  Aggregate characterization;
  double test_accuracy = 0.0;
  double best_val_accuracy = 0.0;
  bool model_valid = true;
};

struct GateResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Table1Report {
  Table1Config config;
  std::vector<Table1Cell> cells;  // dataset-major, then seed, pipeline, explainer

  // Mean over seeds of the per-seed mean AUC; nullopt when no seed has one.
  std::optional<double> MeanAuc(DatasetKind dataset, ExplainerKind explainer,
                                Provenance pipeline) const;
  bool AnyInvalidModel(DatasetKind dataset) const;
  // Directionality gain, undirected parity and absolute floor.
  std::vector<GateResult> Gates() const;

  std::string PerSeedCsv() const;
  std::string GridText() const;
  nlohmann::json ToJson() const;
};

Table1Report RunTable1(const Table1Config& config);

}  // namespace dgx

#endif  // DGX_HARNESS_H_
