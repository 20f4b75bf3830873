#ifndef DGX_NN_GCN_H_
#define DGX_NN_GCN_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgx/graph.h"
#include "dgx/nn/autodiff.h"
#include "dgx/preprocess.h"

namespace dgx::nn {

struct GcnConfig {
  int layers = 3;
  int hidden = 20;
};

struct GcnLayer {
  Tensor weight;  // in x out
  Tensor bias;    // 1 x out
};

// Fixed-architecture GCN: rectifier on hidden layers, softmax head.
//   H_{l+1} = act(prop(mask) * H_l * W_l + b_l)
class GcnModel {
 public:
  GcnModel() = default;
  // Glorot-uniform weights, zero biases.
  static GcnModel Initialize(int input_dim, int num_classes, const GcnConfig& config,
                             uint64_t seed);

  int input_dim() const { return layers_.empty() ? 0 : static_cast<int>(layers_[0].weight.rows()); }
  int num_classes() const {
    return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.cols());
  }
  int num_layers() const { return static_cast<int>(layers_.size()); }
  int hidden() const { return num_layers() > 1 ? static_cast<int>(layers_[0].weight.cols()) : 0; }
  int ParameterCount() const;

  const std::vector<GcnLayer>& layers() const { return layers_; }
  std::vector<GcnLayer>& mutable_layers() { return layers_; }

  const std::string& config_hash() const { return config_hash_; }
  void set_config_hash(std::string hash) { config_hash_ = std::move(hash); }

  friend bool operator==(const GcnModel& a, const GcnModel& b);

 private:
  std::vector<GcnLayer> layers_;
  std::string config_hash_;
};

// Node features, or a constant 1.0 column for featureless graphs.
Tensor ModelInput(const DiGraph& g);

// Tape handles produced by one forward pass.
struct ForwardPass {
  Var log_probs;                // n x classes
  Var embedding;                // last hidden layer, n x hidden (input if single layer)
  std::vector<Var> weights;
  std::vector<Var> biases;
};

// Records a forward pass. `mask` holds per-edge multipliers in [0, 1] (E x 1)
// or is invalid for the unmasked operator. Weights become tape parameters
// when `trainable`.
ForwardPass RecordForward(Tape& tape, const GcnModel& model, const PropagationMatrix& prop,
                          Var input, Var mask, bool trainable);

// Class probabilities (n x classes). `mask_logits`, when given, has one
// logit per edge; sigmoid(+inf) = 1 keeps an edge, sigmoid(-inf) = 0 drops it.
Tensor GcnForward(const GcnModel& model, const PropagationMatrix& prop, const Tensor& x,
                  std::optional<std::span<const double>> mask_logits = std::nullopt);

// Same with explicit per-edge multipliers (no sigmoid).
Tensor GcnForwardWithMask(const GcnModel& model, const PropagationMatrix& prop, const Tensor& x,
                          std::span<const double> mask);

struct LossAndGrads {
  double loss = 0.0;
  std::vector<Tensor> weight_grads;
  std::vector<Tensor> bias_grads;
  Vector mask_logit_grads;  // empty without a mask
};

// Mean cross-entropy over `nodes` and its exact gradients.
LossAndGrads ComputeLossAndGrads(const GcnModel& model, const PropagationMatrix& prop,
                                 const Tensor& x, const std::vector<int>& labels,
                                 std::span<const int> nodes,
                                 std::optional<std::span<const double>> mask_logits = std::nullopt);

Vector PredictProba(const GcnModel& model, const PropagationMatrix& prop, const Tensor& x, int v);

// Last hidden layer activations (n x hidden).
Tensor Embeddings(const GcnModel& model, const PropagationMatrix& prop, const Tensor& x);

inline constexpr char kCheckpointMagic[] = "DGXGCN1";

void SaveCheckpoint(const GcnModel& model, const std::filesystem::path& path);
GcnModel LoadCheckpoint(const std::filesystem::path& path);

}  // namespace dgx::nn

#endif  // DGX_NN_GCN_H_
