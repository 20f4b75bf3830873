#ifndef DGX_EVAL_H_
#define DGX_EVAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dgx/datagen.h"
#include "dgx/explain.h"
#include "dgx/graph.h"

namespace dgx {

enum class FidelityConvention { kStandard, kPaperLiteral };

const char* FidelityConventionName(FidelityConvention c);
FidelityConvention ParseFidelityConvention(std::string_view name);

struct FidelityResult {
  double fid_plus = 0.0;
  double fid_minus = 0.0;
  int predicted = -1;
  double p_full = 0.0;     // P_yhat(G)
  double p_without = 0.0;  // P_yhat(G \ G_s)
  double p_only = 0.0;     // P_yhat(G_s)
};

// Combines the three confidences under a convention.
//   standard:       Fid+ = P(G) - P(G \ G_s),  Fid- = P(G) - P(G_s)
//   paper-literal:  Fid+ = P(G_s) - P(G),      Fid- = P(G) - P(G \ G_s)
FidelityResult CombineFidelity(double p_full, double p_without, double p_only,
                               FidelityConvention convention);

// G_s = TopKSubgraph(explanation, k). Removing an edge sets its mask to 0.
// Keeping only G_s masks the other candidate edges; edges outside the
// computation subgraph are left in place.
FidelityResult Fidelity(const ExplainContext& ctx, const Explanation& explanation, int k,
                        FidelityConvention convention = FidelityConvention::kStandard,
                        Budget budget = Budget::kNodes);

// Weighted harmonic mean of Fid+ and 1 - Fid-, after clamping both to [0, 1].
// `clamped` is set when either input was outside [0, 1].
double Characterization(double fid_plus, double fid_minus, double w_plus = 0.5,
                        double w_minus = 0.5, bool* clamped = nullptr);

// Mann-Whitney AUC with average ranks for ties; nullopt when a class is empty.
std::optional<double> RankAuc(std::span<const double> scores, std::span<const int> labels);

struct AucOutcome {
  std::optional<double> auc;
  int positives = 0;
  int negatives = 0;
};

// Ground-truth label of every candidate edge of the explanation. With
// reciprocal credit an edge added by symmetrization takes its source's label.
std::vector<int> CandidateLabels(const Explanation& explanation, const DiGraph& explained,
                                 bool reciprocal_credit);

AucOutcome ExplanationAuc(const Explanation& explanation, const DiGraph& explained,
                          bool reciprocal_credit);

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // population
  int count = 0;
};

// Mean and deviation, accumulated in the given order.
Aggregate Summarize(std::span<const double> values);

struct NodeRecord {
  int v = 0;
  double fid_plus = 0.0;
  double fid_minus = 0.0;
  double characterization = 0.0;
  std::optional<double> auc;
};

struct EntropyRecord {
  std::string name;
  uint64_t seed = 0;
  int num_nodes = 0;
  int num_edges = 0;
  double alpha = 0.0;
  double directed = 0.0;
  double symmetrized = 0.0;
  double gap = 0.0;
  bool violation = false;
};

struct MetricsReport {
  std::string dataset;
  std::string explainer;
  std::string pipeline;
  std::string convention = "standard";
  int k = 0;
  double w_plus = 0.5;
  double w_minus = 0.5;
  std::vector<NodeRecord> nodes;
  Aggregate fid_plus;
  Aggregate fid_minus;
  Aggregate characterization;
  std::optional<Aggregate> auc;  // only with ground truth
  int auc_undefined = 0;
  int clamped = 0;
  std::optional<EntropyRecord> entropy;
  std::string config_hash;
  uint64_t seed = 0;
  int threads = 1;

  // Fills the aggregates from the per-node records.
  void Recompute(bool has_ground_truth);
  nlohmann::json ToJson() const;
  std::string ToCsv() const;
};

struct EvalOptions {
  int k = 6;
  double w_plus = 0.5;
  double w_minus = 0.5;
  FidelityConvention convention = FidelityConvention::kStandard;
  bool reciprocal_credit = true;
  Budget budget = Budget::kNodes;
};

// Per-node metrics for a batch of explanations of one model.
MetricsReport EvaluateExplanations(const ExplainContext& ctx,
                                   std::span<const Explanation> explanations,
                                   const EvalOptions& options);

// ---- Oracle suites -------------------------------------------------------

struct Theorem1Config {
  int instances = 100;
  int planted = 20;
  int n_min = 4;
  int n_max = 6;
  double edge_probability = 0.35;
  int k = 4;
  double alpha = 0.1;
  uint64_t seed = 0;
  // Tiny per-instance models.
  int layers = 2;
  int hidden = 8;
  int epochs = 300;
  double learning_rate = 0.05;
  double weight_decay = 5e-4;
};

struct Theorem1Instance {
  uint64_t seed = 0;
  bool planted = false;
  int num_nodes = 0;
  int num_edges = 0;
  int target = -1;
  int directed_candidates = 0;
  int symmetrized_candidates = 0;
  double directed_mi = 0.0;
  double symmetrized_mi = 0.0;
  EdgeSet directed_best;
  EdgeSet symmetrized_best;
  bool violation = false;  // directed < symmetrized - 1e-9
  bool strict = false;     // directed > symmetrized + 1e-9
};

struct Theorem1Report {
  Theorem1Config config;
  std::vector<Theorem1Instance> instances;
  int random_instances = 0;
  int random_violations = 0;
  int planted_instances = 0;
  int planted_violations = 0;
  int planted_strict = 0;

  double PassRate() const;
  nlohmann::json ToJson() const;
};

inline constexpr double kTheorem1Tolerance = 1e-9;

// Digraph with labels 1 = out-degree exceeds in-degree, else 0. Resamples
// deterministically until both labels occur and the target's candidate sets
// fit the exhaustive search.
Dataset Theorem1RandomInstance(const Theorem1Config& config, uint64_t seed);
// Disjoint directed pairs; sources are labeled 1, sinks 0.
Dataset Theorem1PlantedInstance(uint64_t seed);
Theorem1Instance RunTheorem1Instance(const Theorem1Config& config, const Dataset& dataset,
                                     uint64_t seed, bool planted);
Theorem1Report RunTheorem1Suite(const Theorem1Config& config);

struct EntropySuiteConfig {
  double alpha = 0.1;
  std::vector<DatasetKind> datasets{std::begin(kAllDatasetKinds), std::end(kAllDatasetKinds)};
  uint64_t dataset_seed = 0;
  int random_digraphs = 50;
  int n_min = 4;
  int n_max = 20;
  double edge_probability = 0.3;
  uint64_t seed = 0;
  double tolerance = 1e-2;  // gap >= -tolerance counts as consistent
};

struct EntropyReport {
  EntropySuiteConfig config;
  std::vector<EntropyRecord> records;
  int violations = 0;

  double PassRate() const;
  nlohmann::json ToJson() const;
};

EntropyRecord EntropyOf(const DiGraph& g, std::string name, uint64_t seed, double alpha,
                        double tolerance);
EntropyReport RunEntropySuite(const EntropySuiteConfig& config);

}  // namespace dgx

#endif  // DGX_EVAL_H_
