#ifndef DGX_REALWORLD_H_
#define DGX_REALWORLD_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "dgx/eval.h"
#include "dgx/explain.h"
#include "dgx/graph.h"
#include "dgx/graph_io.h"
#include "dgx/nn/gcn.h"
#include "dgx/nn/train.h"
#include "dgx/preprocess.h"

namespace dgx {

// Manifest JSON:
//   {"name": "cora",
//    "paths": {"edges": "edges.csv", "labels": "labels.csv", "features": "features.csv"},
//    "n": 2708, "edges": 5429, "classes": 7,
//    "sha256": {"edges": "<hex>", "labels": "<hex>", "features": "<hex>"},
//    "split_seed": 0}
// Relative paths resolve against the manifest's directory. Every listed path
// needs a checksum.
struct RealDatasetManifest {
  std::string name;
  std::map<std::string, std::filesystem::path> paths;
  int num_nodes = 0;
  int num_edges = 0;
  int num_classes = 0;
  std::map<std::string, std::string> sha256;
  uint64_t split_seed = 0;

  static RealDatasetManifest FromJson(const nlohmann::json& j,
                                      const std::filesystem::path& base_dir = {});
  static RealDatasetManifest Load(const std::filesystem::path& manifest_path);
  nlohmann::json ToJson() const;
};

// Lowercase hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path& path);
std::string Sha256Hex(const std::string& bytes);

// Verifies files, checksums and counts, then loads the directed graph.
// Errors: kMissingArtifact, kChecksumMismatch, kCountMismatch.
Dataset LoadReal(const RealDatasetManifest& manifest);

struct DirectionReport {
  int edges = 0;
  int non_reciprocated = 0;
  double fraction = 0.0;
  bool preserved = false;  // fraction > kDirectionThreshold
};

inline constexpr double kDirectionThreshold = 0.05;

DirectionReport CheckDirection(const DiGraph& g);

struct Table2Config {
  int sample_nodes = 200;
  bool all_test_nodes = false;
  uint64_t seed = 0;
  double alpha = 0.1;
  nn::GcnConfig model;
  nn::TrainConfig train;
  ExplainerConfig gnn = ExplainerConfig::Defaults(ExplainerKind::kGnn);
  ExplainerConfig pg = ExplainerConfig::Defaults(ExplainerKind::kPg);
  EvalOptions eval{.k = 10};
};

struct Table2Cell {
  ExplainerKind explainer = ExplainerKind::kGnn;
  Provenance pipeline = Provenance::kSymm;
  MetricsReport report;
};

struct Table2Report {
  std::string dataset;
  DirectionReport direction;
  std::vector<int> nodes;
  // Pipeline -> best validation accuracy and whether it cleared the gate.
  std::map<std::string, double> val_accuracy;
  std::map<std::string, bool> model_valid;
  std::vector<Table2Cell> cells;  // {gnn, pg} x {symm, lapnorm}
  std::vector<std::string> flags;

  const Table2Cell& cell(ExplainerKind explainer, Provenance pipeline) const;
  nlohmann::json ToJson() const;
  std::string ToCsv() const;
};

// Seeded sample of test nodes (sorted), or every test node.
std::vector<int> SampleTestNodes(const Dataset& dataset, int count, bool all, uint64_t seed);

// Accuracy gate: best validation accuracy at least chance + 0.2.
bool PassesAccuracyGate(double best_val_accuracy, int num_classes);

Table2Report RunTable2(const Dataset& dataset, const Table2Config& config);

}  // namespace dgx

#endif  // DGX_REALWORLD_H_
