#include "dgx/nn/train.h"

#include <cmath>
#include <sstream>

#include "dgx/error.h"

namespace dgx::nn {

void Adam::Step(const std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads) {
  Require(params.size() == grads.size(), ErrorCode::kShapeMismatch, "adam: params/grads mismatch");
  if (m_.empty()) {
    for (const Tensor* p : params) {
      m_.push_back(Tensor::Zero(p->rows(), p->cols()));
      v_.push_back(Tensor::Zero(p->rows(), p->cols()));
    }
  }
  Require(m_.size() == params.size(), ErrorCode::kShapeMismatch, "adam: parameter list changed");
  ++step_;
  const double c1 = 1.0 - std::pow(beta1_, step_);
  const double c2 = 1.0 - std::pow(beta2_, step_);
  for (size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i];
    const Tensor& g = *grads[i];
    if (g.size() == 0) continue;  // no gradient reached this tensor
    Require(g.rows() == p.rows() && g.cols() == p.cols(), ErrorCode::kShapeMismatch,
            "adam: gradient shape differs from parameter");
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g.cwiseProduct(g);
    p.array() -= lr_ * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps_);
  }
}

void TrainConfig::Validate() const {
  Require(learning_rate > 0 && std::isfinite(learning_rate), ErrorCode::kInvalidArgument,
          "learning rate must be positive");
  Require(epochs >= 0, ErrorCode::kInvalidArgument, "epochs must be >= 0");
  Require(weight_decay >= 0, ErrorCode::kInvalidArgument, "weight decay must be >= 0");
  Require(patience >= 0, ErrorCode::kInvalidArgument, "patience must be >= 0");
}

double Accuracy(const Tensor& probs, const std::vector<int>& labels, std::span<const int> nodes) {
  if (nodes.empty()) return 0.0;
  int correct = 0;
  for (int v : nodes) {
    Eigen::Index arg = 0;
    probs.row(v).maxCoeff(&arg);
    if (arg == labels[v]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(nodes.size());
}

namespace {

double MeanNll(const Tensor& log_probs, const std::vector<int>& labels, std::span<const int> nodes) {
  if (nodes.empty()) return 0.0;
  double total = 0.0;
  for (int v : nodes) total -= log_probs(v, labels[v]);
  return total / static_cast<double>(nodes.size());
}

}  // namespace

TrainResult Train(const GcnModel& init, const Dataset& dataset, const PropagationMatrix& prop,
                  const TrainConfig& config) {
  config.Validate();
  const DiGraph& g = dataset.graph;
  Require(prop.size() == g.num_nodes(), ErrorCode::kShapeMismatch,
          "operator size differs from the graph");
  const std::vector<int> train = dataset.split.Nodes(SplitRole::kTrain);
  const std::vector<int> val = dataset.split.Nodes(SplitRole::kVal);
  const std::vector<int> test = dataset.split.Nodes(SplitRole::kTest);
  Require(!train.empty(), ErrorCode::kInvalidArgument, "split has no training nodes");
  const Tensor x = ModelInput(g);
  const std::vector<int>& labels = g.labels();
  std::vector<int> train_classes;
  for (int v : train) train_classes.push_back(labels[v]);

  TrainResult result;
  result.model = init;
  GcnModel current = init;
  Adam adam(config.learning_rate);
  double best_val_loss = 0.0;
  int since_best = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Tape tape;
    const ForwardPass pass = RecordForward(tape, current, prop, tape.Constant(x), Var{}, true);
    Var loss = NllLoss(tape, pass.log_probs, train, train_classes);
    const double loss_value = tape.scalar(loss);
    if (!std::isfinite(loss_value)) {
      std::ostringstream msg;
      msg << "training diverged at epoch " << epoch << ": loss " << loss_value
          << " (lr " << config.learning_rate << ")";
      throw Error(ErrorCode::kNonFinite, msg.str());
    }
    const Tensor& log_probs = tape.value(pass.log_probs);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_value;
    rec.train_accuracy = Accuracy(log_probs, labels, train);
    rec.val_loss = MeanNll(log_probs, labels, val);
    rec.val_accuracy = Accuracy(log_probs, labels, val);
    result.history.push_back(rec);

    const bool better = result.best_epoch < 0 || rec.val_accuracy > result.best_val_accuracy ||
                        (rec.val_accuracy == result.best_val_accuracy && rec.val_loss < best_val_loss);
    if (better) {
      result.best_epoch = epoch;
      result.best_val_accuracy = rec.val_accuracy;
      best_val_loss = rec.val_loss;
      result.model = current;
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      break;
    }

    tape.Backward(loss);
    std::vector<Tensor> grads;
    std::vector<Tensor*> params;
    for (int l = 0; l < current.num_layers(); ++l) {
      GcnLayer& layer = current.mutable_layers()[l];
      Tensor gw = tape.grad(pass.weights[l]);
      if (gw.size() == 0) gw = Tensor::Zero(layer.weight.rows(), layer.weight.cols());
      if (config.weight_decay > 0) gw += config.weight_decay * layer.weight;
      Tensor gb = tape.grad(pass.biases[l]);
      if (gb.size() == 0) gb = Tensor::Zero(1, layer.bias.cols());
      grads.push_back(std::move(gw));
      grads.push_back(std::move(gb));
      params.push_back(&layer.weight);
      params.push_back(&layer.bias);
    }
    std::vector<const Tensor*> grad_ptrs;
    for (const Tensor& t : grads) grad_ptrs.push_back(&t);
    adam.Step(params, grad_ptrs);
  }
  if (!config.keep_best) result.model = current;
  result.model.set_config_hash(init.config_hash());
  result.test_accuracy = Accuracy(GcnForward(result.model, prop, x), labels, test);
  return result;
}

}  // namespace dgx::nn
