#ifndef DGX_NN_TRAIN_H_
#define DGX_NN_TRAIN_H_

#include <cstdint>
#include <vector>

#include "dgx/graph.h"
#include "dgx/nn/gcn.h"
#include "dgx/preprocess.h"

namespace dgx::nn {

// Adam over a fixed list of parameter tensors.
class Adam {
 public:
  Adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  // `params` and `grads` must keep the same shapes across calls.
  void Step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads);
  int steps() const { return step_; }

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  int step_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

struct TrainConfig {
  double learning_rate = 0.01;
  int epochs = 1000;
  double weight_decay = 5e-4;  // L2 on weights only
  uint64_t seed = 0;
  int patience = 0;  // 0 disables early stopping
  // Return the best-validation snapshot; otherwise the final weights.
  bool keep_best = true;

  void Validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult {
  GcnModel model;
  std::vector<EpochRecord> history;
  int best_epoch = -1;  // -1 when no epoch ran
  double best_val_accuracy = 0.0;
  double test_accuracy = 0.0;
};

// Full-batch training on the split's train nodes. Returns the snapshot with
// the best validation accuracy (ties go to lower validation loss). Metrics of
// epoch t describe the parameters before update t.
TrainResult Train(const GcnModel& init, const Dataset& dataset, const PropagationMatrix& prop,
                  const TrainConfig& config);

// Fraction of `nodes` whose argmax prediction equals the label.
double Accuracy(const Tensor& probs, const std::vector<int>& labels, std::span<const int> nodes);

}  // namespace dgx::nn

#endif  // DGX_NN_TRAIN_H_
