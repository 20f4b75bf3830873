#include "dgx/nn/gcn.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dgx/error.h"
#include "dgx/rng.h"

namespace dgx::nn {
namespace {

void CheckFinite(double loss) {
  Require(std::isfinite(loss), ErrorCode::kNonFinite, "loss is not finite (NaN or Inf)");
}

std::vector<double> SigmoidOf(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) {
    const double x = logits[i];
    out[i] = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  }
  return out;
}

Tensor ColumnVector(std::span<const double> values) {
  Tensor t(static_cast<Eigen::Index>(values.size()), 1);
  for (size_t i = 0; i < values.size(); ++i) t(i, 0) = values[i];
  return t;
}

}  // namespace

GcnModel GcnModel::Initialize(int input_dim, int num_classes, const GcnConfig& config,
                              uint64_t seed) {
  Require(config.layers >= 1 && config.hidden >= 1 && input_dim >= 1 && num_classes >= 1,
          ErrorCode::kInvalidArgument, "invalid GCN dimensions");
  Rng rng = MakeRng(seed, "gcn/init");
  GcnModel model;
  int in = input_dim;
  for (int l = 0; l < config.layers; ++l) {
    const int out = l + 1 == config.layers ? num_classes : config.hidden;
    const double limit = std::sqrt(6.0 / (in + out));
    GcnLayer layer;
    layer.weight.resize(in, out);
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) {
      layer.weight.data()[i] = (2.0 * UniformUnit(rng) - 1.0) * limit;
    }
    layer.bias = Tensor::Zero(1, out);
    model.layers_.push_back(std::move(layer));
    in = out;
  }
  return model;
}

int GcnModel::ParameterCount() const {
  int count = 0;
  for (const GcnLayer& layer : layers_) {
    count += static_cast<int>(layer.weight.size() + layer.bias.size());
  }
  return count;
}

bool operator==(const GcnModel& a, const GcnModel& b) {
  if (a.layers_.size() != b.layers_.size()) return false;
  for (size_t l = 0; l < a.layers_.size(); ++l) {
    if (a.layers_[l].weight != b.layers_[l].weight || a.layers_[l].bias != b.layers_[l].bias) {
      return false;
    }
  }
  return true;
}

Tensor ModelInput(const DiGraph& g) {
  if (g.num_features() > 0) return g.features();
  return Tensor::Ones(g.num_nodes(), 1);
}

ForwardPass RecordForward(Tape& tape, const GcnModel& model, const PropagationMatrix& prop,
                          Var input, Var mask, bool trainable) {
  Require(tape.value(input).cols() == model.input_dim(), ErrorCode::kShapeMismatch,
          "input has " + std::to_string(tape.value(input).cols()) + " columns, model expects " +
              std::to_string(model.input_dim()));
  ForwardPass pass;
  Var h = input;
  pass.embedding = input;
  for (int l = 0; l < model.num_layers(); ++l) {
    const GcnLayer& layer = model.layers()[l];
    Var w = trainable ? tape.Parameter(layer.weight) : tape.Constant(layer.weight);
    Var b = trainable ? tape.Parameter(layer.bias) : tape.Constant(layer.bias);
    pass.weights.push_back(w);
    pass.biases.push_back(b);
    Var z = AddRowBias(tape, Propagate(tape, prop, mask, MatMul(tape, h, w)), b);
    if (l + 1 < model.num_layers()) {
      h = Relu(tape, z);
      pass.embedding = h;
    } else {
      h = z;
    }
  }
  pass.log_probs = LogSoftmaxRows(tape, h);
  return pass;
}

Tensor GcnForwardWithMask(const GcnModel& model, const PropagationMatrix& prop, const Tensor& x,
                          std::span<const double> mask) {
  Require(x.cols() == model.input_dim(), ErrorCode::kShapeMismatch,
          "input has " + std::to_string(x.cols()) + " columns, model expects " +
              std::to_string(model.input_dim()));
  Require(x.rows() == prop.size(), ErrorCode::kShapeMismatch,
          "propagation operator and features disagree on node count");
  if (!mask.empty()) {
    Require(static_cast<int>(mask.size()) == prop.num_edges(), ErrorCode::kShapeMismatch,
            "edge mask length must equal the edge count");
  }
  // Same arithmetic as RecordForward, without the tape.
  Tensor h = x;
  Tensor z;
  for (int l = 0; l < model.num_layers(); ++l) {
    const GcnLayer& layer = model.layers()[l];
    const Tensor hw = h * layer.weight;
    prop.Apply(hw, mask, z);
    z.rowwise() += layer.bias.row(0);
    if (l + 1 < model.num_layers()) h = z.cwiseMax(0.0);
  }
  Tensor probs(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double m = z.row(i).maxCoeff();
    const double lse = m + std::log((z.row(i).array() - m).exp().sum());
    probs.row(i) = (z.row(i).array() - lse).exp();
  }
  Require(probs.allFinite(), ErrorCode::kNonFinite, "forward pass produced NaN");
  return probs;
}

Tensor GcnForward(const GcnModel& model, const PropagationMatrix& prop, const Tensor& x,
                  std::optional<std::span<const double>> mask_logits) {
  if (!mask_logits) return GcnForwardWithMask(model, prop, x, {});
  Require(static_cast<int>(mask_logits->size()) == prop.num_edges(), ErrorCode::kShapeMismatch,
          "edge mask length must equal the edge count");
  const std::vector<double> mask = SigmoidOf(*mask_logits);
  return GcnForwardWithMask(model, prop, x, mask);
}

LossAndGrads ComputeLossAndGrads(const GcnModel& model, const PropagationMatrix& prop,
                                 const Tensor& x, const std::vector<int>& labels,
                                 std::span<const int> nodes,
                                 std::optional<std::span<const double>> mask_logits) {
  Require(!nodes.empty(), ErrorCode::kInvalidArgument, "loss needs a non-empty node subset");
  Tape tape;
  Var logits;
  Var mask;
  if (mask_logits) {
    Require(static_cast<int>(mask_logits->size()) == prop.num_edges(), ErrorCode::kShapeMismatch,
            "edge mask length must equal the edge count");
    logits = tape.Parameter(ColumnVector(*mask_logits));
    mask = Sigmoid(tape, logits);
  }
  const ForwardPass pass = RecordForward(tape, model, prop, tape.Constant(x), mask, true);
  std::vector<int> classes;
  classes.reserve(nodes.size());
  for (int v : nodes) classes.push_back(labels[v]);
  Var loss = NllLoss(tape, pass.log_probs, nodes, classes);
  CheckFinite(tape.scalar(loss));
  tape.Backward(loss);

  LossAndGrads result;
  result.loss = tape.scalar(loss);
  for (int l = 0; l < model.num_layers(); ++l) {
    result.weight_grads.push_back(tape.grad(pass.weights[l]));
    result.bias_grads.push_back(tape.grad(pass.biases[l]));
  }
  if (mask_logits) {
    const Tensor& g = tape.grad(logits);
    result.mask_logit_grads = g.size() ? Vector(g.col(0)) : Vector::Zero(prop.num_edges());
  }
  return result;
}

Vector PredictProba(const GcnModel& model, const PropagationMatrix& prop, const Tensor& x, int v) {
  Require(v >= 0 && v < prop.size(), ErrorCode::kOutOfRange, "node out of range");
  return GcnForward(model, prop, x).row(v).transpose();
}

Tensor Embeddings(const GcnModel& model, const PropagationMatrix& prop, const Tensor& x) {
  Tape tape;
  const ForwardPass pass = RecordForward(tape, model, prop, tape.Constant(x), Var{}, false);
  return tape.value(pass.embedding);
}

void SaveCheckpoint(const GcnModel& model, const std::filesystem::path& path) {
  std::ostringstream out;
  out << kCheckpointMagic << '\n';
  out << "config_hash " << (model.config_hash().empty() ? "-" : model.config_hash()) << '\n';
  out << "layers " << model.num_layers() << '\n';
  char buf[32];
  auto write_tensor = [&](const char* tag, int l, const Tensor& t) {
    out << tag << ' ' << l << ' ' << t.rows() << ' ' << t.cols() << '\n';
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      for (Eigen::Index j = 0; j < t.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", t(i, j));
        out << (j ? " " : "") << buf;
      }
      out << '\n';
    }
  };
  for (int l = 0; l < model.num_layers(); ++l) {
    write_tensor("weight", l, model.layers()[l].weight);
    write_tensor("bias", l, model.layers()[l].bias);
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  Require(file.good(), ErrorCode::kIo, "cannot write " + path.string());
  file << out.str();
}

GcnModel LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kMissingArtifact, "no model checkpoint at " + path.string());
  std::string magic;
  in >> magic;
  Require(magic == kCheckpointMagic, ErrorCode::kParse,
          path.string() + ": not a model checkpoint (bad magic '" + magic + "')");
  std::string key;
  std::string hash;
  int layers = 0;
  in >> key >> hash;
  Require(key == "config_hash", ErrorCode::kParse, path.string() + ": missing config_hash");
  in >> key >> layers;
  Require(key == "layers" && layers >= 1, ErrorCode::kParse, path.string() + ": missing layers");
  GcnModel model;
  auto read_tensor = [&](const char* tag, int l) {
    std::string t;
    int index = 0;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    in >> t >> index >> rows >> cols;
    Require(in.good() && t == tag && index == l && rows >= 0 && cols >= 0, ErrorCode::kParse,
            path.string() + ": malformed " + tag + " block");
    Tensor m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) in >> m.data()[i];
    Require(!in.fail(), ErrorCode::kParse, path.string() + ": truncated " + tag + " block");
    return m;
  };
  for (int l = 0; l < layers; ++l) {
    GcnLayer layer;
    layer.weight = read_tensor("weight", l);
    layer.bias = read_tensor("bias", l);
    model.mutable_layers().push_back(std::move(layer));
  }
  model.set_config_hash(hash == "-" ? "" : hash);
  return model;
}

}  // namespace dgx::nn
