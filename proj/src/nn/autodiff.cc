#include "dgx/nn/autodiff.h"

#include <cmath>

#include "dgx/error.h"

namespace dgx::nn {
namespace {

void CheckSameShape(const Tensor& a, const Tensor& b, const char* op) {
  Require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::kShapeMismatch,
          std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
              std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
              std::to_string(b.cols()));
}

double Softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double StableSigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var Tape::Constant(Tensor value) {
  nodes_.push_back({std::move(value), Tensor(), false, nullptr});
  return {size() - 1};
}

Var Tape::Parameter(Tensor value) {
  nodes_.push_back({std::move(value), Tensor(), true, nullptr});
  return {size() - 1};
}

Var Tape::Record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward) {
  bool needs = false;
  for (Var v : inputs) needs = needs || (v.valid() && nodes_[v.id].requires_grad);
  nodes_.push_back({std::move(value), Tensor(), needs, needs ? std::move(backward) : nullptr});
  return {size() - 1};
}

Tensor& Tape::GradBuffer(Var v) {
  Node& node = nodes_[v.id];
  if (node.grad.size() == 0 && node.value.size() != 0) {
    node.grad = Tensor::Zero(node.value.rows(), node.value.cols());
  }
  return node.grad;
}

void Tape::AddGrad(Var v, const Tensor& g) {
  if (!nodes_[v.id].requires_grad) return;
  GradBuffer(v) += g;
}

void Tape::Backward(Var out) {
  Require(value(out).size() == 1, ErrorCode::kShapeMismatch, "backward needs a scalar output");
  for (Node& node : nodes_) node.grad.resize(0, 0);
  GradBuffer(out)(0, 0) = 1.0;
  for (int id = out.id; id >= 0; --id) {
    Node& node = nodes_[id];
    if (!node.backward || node.grad.size() == 0) continue;
    // Callbacks only write to earlier nodes, so this buffer stays put.
    node.backward(*this, node.grad);
  }
}

Var MatMul(Tape& t, Var a, Var b) {
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  Require(av.cols() == bv.rows(), ErrorCode::kShapeMismatch, "matmul: inner dimensions differ");
  return t.Record(av * bv, {a, b}, [a, b](Tape& tape, const Tensor& g) {
    if (tape.requires_grad(a)) tape.GradBuffer(a).noalias() += g * tape.value(b).transpose();
    if (tape.requires_grad(b)) tape.GradBuffer(b).noalias() += tape.value(a).transpose() * g;
  });
}

Var Add(Tape& t, Var a, Var b) {
  CheckSameShape(t.value(a), t.value(b), "add");
  return t.Record(t.value(a) + t.value(b), {a, b}, [a, b](Tape& tape, const Tensor& g) {
    tape.AddGrad(a, g);
    tape.AddGrad(b, g);
  });
}

Var Sub(Tape& t, Var a, Var b) {
  CheckSameShape(t.value(a), t.value(b), "sub");
  return t.Record(t.value(a) - t.value(b), {a, b}, [a, b](Tape& tape, const Tensor& g) {
    tape.AddGrad(a, g);
    tape.AddGrad(b, -g);
  });
}

Var Mul(Tape& t, Var a, Var b) {
  CheckSameShape(t.value(a), t.value(b), "mul");
  return t.Record(t.value(a).cwiseProduct(t.value(b)), {a, b}, [a, b](Tape& tape, const Tensor& g) {
    if (tape.requires_grad(a)) tape.GradBuffer(a) += g.cwiseProduct(tape.value(b));
    if (tape.requires_grad(b)) tape.GradBuffer(b) += g.cwiseProduct(tape.value(a));
  });
}

Var Scale(Tape& t, Var a, double s) {
  return t.Record(s * t.value(a), {a}, [a, s](Tape& tape, const Tensor& g) {
    tape.GradBuffer(a) += s * g;
  });
}

Var AddScalar(Tape& t, Var a, double s) {
  return t.Record(t.value(a).array() + s, {a},
                  [a](Tape& tape, const Tensor& g) { tape.GradBuffer(a) += g; });
}

Var AddRowBias(Tape& t, Var a, Var bias) {
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(bias);
  Require(bv.rows() == 1 && bv.cols() == av.cols(), ErrorCode::kShapeMismatch,
          "bias width does not match");
  Tensor out = av.rowwise() + bv.row(0);
  return t.Record(std::move(out), {a, bias}, [a, bias](Tape& tape, const Tensor& g) {
    tape.AddGrad(a, g);
    if (tape.requires_grad(bias)) tape.GradBuffer(bias) += g.colwise().sum();
  });
}

Var ScaleColumns(Tape& t, Var x, Var s) {
  const Tensor& xv = t.value(x);
  const Tensor& sv = t.value(s);
  Require(sv.rows() == 1 && sv.cols() == xv.cols(), ErrorCode::kShapeMismatch,
          "column scale width does not match");
  Tensor out = xv * sv.row(0).asDiagonal();
  return t.Record(std::move(out), {x, s}, [x, s](Tape& tape, const Tensor& g) {
    if (tape.requires_grad(x)) tape.GradBuffer(x) += g * tape.value(s).row(0).asDiagonal();
    if (tape.requires_grad(s)) {
      tape.GradBuffer(s) += g.cwiseProduct(tape.value(x)).colwise().sum();
    }
  });
}

Var Relu(Tape& t, Var a) {
  return t.Record(t.value(a).cwiseMax(0.0), {a}, [a](Tape& tape, const Tensor& g) {
    tape.GradBuffer(a) += (tape.value(a).array() > 0.0).select(g, 0.0);
  });
}

Var Sigmoid(Tape& t, Var a) {
  Tensor out = t.value(a).unaryExpr([](double x) { return StableSigmoid(x); });
  const Var self{t.size()};
  return t.Record(std::move(out), {a}, [a, self](Tape& tape, const Tensor& g) {
    const Tensor& y = tape.value(self);
    tape.GradBuffer(a) += g.cwiseProduct(y.cwiseProduct((1.0 - y.array()).matrix()));
  });
}

Var Log(Tape& t, Var a) {
  return t.Record(t.value(a).array().log().matrix(), {a}, [a](Tape& tape, const Tensor& g) {
    tape.GradBuffer(a) += g.cwiseQuotient(tape.value(a));
  });
}

Var BinaryEntropyOfLogits(Tape& t, Var logits) {
  // h(sigmoid(x)) = softplus(x) - x * sigmoid(x); dh/dx = -x * s * (1 - s).
  Tensor out = t.value(logits).unaryExpr([](double x) { return Softplus(x) - x * StableSigmoid(x); });
  return t.Record(std::move(out), {logits}, [logits](Tape& tape, const Tensor& g) {
    const Tensor d = tape.value(logits).unaryExpr([](double x) {
      const double s = StableSigmoid(x);
      return -x * s * (1.0 - s);
    });
    tape.GradBuffer(logits) += g.cwiseProduct(d);
  });
}

Var Sum(Tape& t, Var a) {
  Tensor out(1, 1);
  out(0, 0) = t.value(a).sum();
  return t.Record(std::move(out), {a}, [a](Tape& tape, const Tensor& g) {
    tape.GradBuffer(a).array() += g(0, 0);
  });
}

Var Mean(Tape& t, Var a) {
  const double count = static_cast<double>(t.value(a).size());
  Require(count > 0, ErrorCode::kShapeMismatch, "mean of an empty tensor");
  Tensor out(1, 1);
  out(0, 0) = t.value(a).sum() / count;
  return t.Record(std::move(out), {a}, [a, count](Tape& tape, const Tensor& g) {
    tape.GradBuffer(a).array() += g(0, 0) / count;
  });
}

Var LogSoftmaxRows(Tape& t, Var a) {
  const Tensor& x = t.value(a);
  Tensor out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double m = x.row(i).maxCoeff();
    const double lse = m + std::log((x.row(i).array() - m).exp().sum());
    out.row(i) = x.row(i).array() - lse;
  }
  const Var self{t.size()};
  return t.Record(std::move(out), {a}, [a, self](Tape& tape, const Tensor& g) {
    const Tensor p = tape.value(self).array().exp();
    // d/dx_j = g_j - p_j * sum_k g_k
    tape.GradBuffer(a) += g - (p.array().colwise() * g.rowwise().sum().array()).matrix();
  });
}

Var NllLoss(Tape& t, Var log_probs, std::span<const int> rows, std::span<const int> classes) {
  Require(!rows.empty() && rows.size() == classes.size(), ErrorCode::kInvalidArgument,
          "loss needs a non-empty node subset");
  const Tensor& lp = t.value(log_probs);
  double total = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) total -= lp(rows[i], classes[i]);
  Tensor out(1, 1);
  out(0, 0) = total / static_cast<double>(rows.size());
  std::vector<int> r(rows.begin(), rows.end());
  std::vector<int> c(classes.begin(), classes.end());
  return t.Record(std::move(out), {log_probs},
                  [log_probs, r = std::move(r), c = std::move(c)](Tape& tape, const Tensor& g) {
                    Tensor& buf = tape.GradBuffer(log_probs);
                    const double w = g(0, 0) / static_cast<double>(r.size());
                    for (size_t i = 0; i < r.size(); ++i) buf(r[i], c[i]) -= w;
                  });
}

Var SelectRows(Tape& t, Var a, std::span<const int> rows) {
  const Tensor& x = t.value(a);
  Tensor out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (size_t i = 0; i < rows.size(); ++i) out.row(i) = x.row(rows[i]);
  std::vector<int> r(rows.begin(), rows.end());
  return t.Record(std::move(out), {a}, [a, r = std::move(r)](Tape& tape, const Tensor& g) {
    Tensor& buf = tape.GradBuffer(a);
    for (size_t i = 0; i < r.size(); ++i) buf.row(r[i]) += g.row(i);
  });
}

Var ScatterVector(Tape& t, Var values, std::span<const int> indices, int size, double fill) {
  const Tensor& v = t.value(values);
  Require(v.cols() == 1 && v.rows() == static_cast<Eigen::Index>(indices.size()),
          ErrorCode::kShapeMismatch, "scatter: one value per index expected");
  Tensor out = Tensor::Constant(size, 1, fill);
  for (size_t i = 0; i < indices.size(); ++i) out(indices[i], 0) = v(i, 0);
  std::vector<int> idx(indices.begin(), indices.end());
  return t.Record(std::move(out), {values}, [values, idx = std::move(idx)](Tape& tape, const Tensor& g) {
    Tensor& buf = tape.GradBuffer(values);
    for (size_t i = 0; i < idx.size(); ++i) buf(i, 0) += g(idx[i], 0);
  });
}

Var Propagate(Tape& t, const PropagationMatrix& prop, Var mask, Var h) {
  const Tensor& hv = t.value(h);
  Require(hv.rows() == prop.size(), ErrorCode::kShapeMismatch,
          "propagation operator and features disagree on node count");
  std::span<const double> m;
  if (mask.valid()) {
    const Tensor& mv = t.value(mask);
    Require(mv.cols() == 1 && mv.rows() == prop.num_edges(), ErrorCode::kShapeMismatch,
            "edge mask length must equal the edge count (" + std::to_string(prop.num_edges()) + ")");
    m = std::span<const double>(mv.data(), static_cast<size_t>(mv.rows()));
  }
  Tensor out;
  prop.Apply(hv, m, out);
  const PropagationMatrix* p = &prop;
  return t.Record(std::move(out), {mask, h}, [p, mask, h](Tape& tape, const Tensor& g) {
    std::span<const double> mspan;
    if (mask.valid()) {
      const Tensor& mv = tape.value(mask);
      mspan = std::span<const double>(mv.data(), static_cast<size_t>(mv.rows()));
    }
    if (tape.requires_grad(h)) p->ApplyTransposeAdd(g, mspan, tape.GradBuffer(h));
    if (mask.valid() && tape.requires_grad(mask)) {
      Tensor& buf = tape.GradBuffer(mask);
      p->AccumulateMaskGradient(g, tape.value(h),
                                std::span<double>(buf.data(), static_cast<size_t>(buf.rows())));
    }
  });
}

}  // namespace dgx::nn
