#ifndef DGX_EXPLAIN_H_
#define DGX_EXPLAIN_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dgx/graph.h"
#include "dgx/nn/gcn.h"
#include "dgx/preprocess.h"
#include "dgx/rng.h"

namespace dgx {

enum class ExplainerKind { kGnn, kPg };

const char* ExplainerKindName(ExplainerKind kind);
ExplainerKind ParseExplainerKind(std::string_view name);

struct ExplainerConfig {
  int epochs = 100;
  double learning_rate = 0.01;
  double size_penalty = 0.005;    // lambda_1, on the summed mask
  double entropy_penalty = 1.0;   // lambda_2, on the mean binary entropy
  bool feature_mask = false;
  double tau_start = 5.0;
  double tau_end = 1.0;
  int samples = 1;                // concrete samples per target and step
  int hidden = 64;                // explainer network width
  uint64_t seed = 0;

  static ExplainerConfig Defaults(ExplainerKind kind);
  void Validate() const;
};

struct Explanation {
  int target = -1;
  std::vector<int> candidate_edges;        // edge indices of the explained graph, ascending
  std::vector<Edge> candidate_endpoints;   // parallel to candidate_edges
  std::vector<double> edge_importance;     // parallel to candidate_edges
  std::vector<double> feature_importance;  // empty unless a feature mask was learned
  std::string explainer;
  std::string config_hash;
  uint64_t seed = 0;
  // Objective before and after optimization (GNNExplainer only).
  std::optional<double> initial_loss;
  std::optional<double> final_loss;

  void Validate() const;
};

// Everything the explainers read from a trained model on one graph. Holds
// references; the model and processed graph must outlive it.
class ExplainContext {
 public:
  ExplainContext(const nn::GcnModel& model, const ProcessedGraph& processed);

  const nn::GcnModel& model() const { return *model_; }
  const DiGraph& graph() const { return processed_->graph; }
  const PropagationMatrix& prop() const { return processed_->prop; }
  const nn::Tensor& input() const { return input_; }
  // Unmasked class probabilities, n x classes.
  const nn::Tensor& probs() const { return probs_; }
  // Last hidden layer on the unmasked graph.
  const nn::Tensor& embeddings() const { return embeddings_; }
  int Predicted(int v) const;
  // ComputationEdges for this model's depth.
  std::vector<int> CandidateEdges(int v) const;

 private:
  const nn::GcnModel* model_;
  const ProcessedGraph* processed_;
  nn::Tensor input_;
  nn::Tensor probs_;
  nn::Tensor embeddings_;
};

// Edges induced by the `layers`-hop neighborhood of v (both directions),
// sorted ascending.
std::vector<int> ComputationEdges(const DiGraph& g, int v, int layers);

// Mask optimization for one target node.
Explanation GnnExplainer(const ExplainContext& ctx, int v, const ExplainerConfig& config);

// Value and logit gradient of the GNNExplainer objective at the given
// candidate-edge logits (no feature mask).
struct MaskObjective {
  double loss = 0.0;
  Vector grad;
};
MaskObjective GnnExplainerObjective(const ExplainContext& ctx, int v,
                                    std::span<const int> candidates,
                                    std::span<const double> logits, const ExplainerConfig& config);

// Two-layer perceptron scoring an edge (i, j) for target v from [z_i; z_j; z_v].
struct PgExplainerNet {
  nn::Tensor w1;  // 3h x hidden
  nn::Tensor b1;  // 1 x hidden
  nn::Tensor w2;  // hidden x 1
  nn::Tensor b2;  // 1 x 1
  std::string config_hash;

  static PgExplainerNet Initialize(int embedding_dim, int hidden, uint64_t seed);
  int embedding_dim() const { return static_cast<int>(w1.rows() / 3); }
};

struct PgTrainStats {
  std::vector<double> epoch_loss;  // summed over targets
};

PgExplainerNet PgExplainerTrain(const ExplainContext& ctx, std::span<const int> targets,
                                const ExplainerConfig& config, PgTrainStats* stats = nullptr);

// Deterministic scores sigmoid(psi) over the candidate edges of v.
Explanation PgExplainerExplain(const PgExplainerNet& net, const ExplainContext& ctx, int v);

// Loss of one target with fixed logistic noise (one value per candidate
// edge) and its gradients in the order w1, b1, w2, b2.
struct PgObjective {
  double loss = 0.0;
  std::vector<nn::Tensor> grads;
};
PgObjective PgExplainerObjective(const PgExplainerNet& net, const ExplainContext& ctx, int v,
                                 std::span<const double> logistic_noise, double tau,
                                 const ExplainerConfig& config);

// m = sigmoid((ln e - ln(1 - e) + logit) / tau), e ~ U(0, 1).
std::vector<double> SampleConcreteMask(std::span<const double> logits, double tau, Rng& rng);

enum class Budget { kNodes, kEdges };

struct Subgraph {
  EdgeSet edges;  // graph edge indices, in selection order
  NodeSet nodes;  // ascending
};

// Greedy selection by (importance desc, edge index asc). Under the node
// budget an edge that would exceed k distinct nodes is skipped and the scan
// continues; under the edge budget the first k edges are taken.
Subgraph TopKSubgraph(const Explanation& explanation, int k, Budget budget = Budget::kNodes);

struct BruteForceResult {
  EdgeSet edges;
  double mi = 0.0;
  double label_entropy = 0.0;   // H(Y) of the mean prediction over all nodes
  int subsets_evaluated = 0;
};

inline constexpr int kMaxBruteForceCandidates = 20;

// Exhaustive search over edge subsets of the candidate set spanning at most
// k nodes, maximizing H(Y) - H(Y | G_s) at v.
BruteForceResult BruteForceBestSubgraph(const ExplainContext& ctx, int v, int k);
// Same over an explicit candidate list.
BruteForceResult BruteForceBestSubgraph(const ExplainContext& ctx, int v, int k,
                                        std::span<const int> candidates);

// H(Y) - H(P(. | v, only `kept` edges present)).
double SubgraphMutualInformation(const ExplainContext& ctx, int v, std::span<const int> kept);

nlohmann::json ExplanationToJson(const Explanation& explanation);
Explanation ExplanationFromJson(const nlohmann::json& j);

// DOT digraph; edge width and color follow importance, ground-truth edges
// (given as endpoint pairs) are outlined.
std::string ExplanationToDot(const Explanation& explanation,
                             const std::set<Edge>& ground_truth = {});

}  // namespace dgx

#endif  // DGX_EXPLAIN_H_
