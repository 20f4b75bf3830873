#ifndef DGX_NN_AUTODIFF_H_
#define DGX_NN_AUTODIFF_H_

#include <functional>
#include <span>
#include <vector>

#include "dgx/graph.h"
#include "dgx/preprocess.h"

namespace dgx::nn {

using Tensor = Matrix;

// Handle to a value recorded on a Tape.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape. Values are appended in evaluation order, so walking the
// tape backwards visits every node after all of its consumers.
class Tape {
 public:
  Var Constant(Tensor value);
  Var Parameter(Tensor value);

  const Tensor& value(Var v) const { return nodes_[v.id].value; }
  // Zero-shaped if no gradient reached this node.
  const Tensor& grad(Var v) const { return nodes_[v.id].grad; }
  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }
  double scalar(Var v) const { return nodes_[v.id].value(0, 0); }

  // Seeds d(out)/d(out) = 1 for a 1x1 output and propagates.
  void Backward(Var out);

  // Records an op result. `backward` receives the output gradient and
  // accumulates into inputs via AddGrad.
  using BackwardFn = std::function<void(Tape&, const Tensor& out_grad)>;
  Var Record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward);
  void AddGrad(Var v, const Tensor& g);
  // Gradient buffer of `v`, allocated as zeros on first use.
  Tensor& GradBuffer(Var v);

  int size() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    BackwardFn backward;
  };
  std::vector<Node> nodes_;
};

Var MatMul(Tape& t, Var a, Var b);
Var Add(Tape& t, Var a, Var b);
Var Sub(Tape& t, Var a, Var b);
Var Mul(Tape& t, Var a, Var b);
Var Scale(Tape& t, Var a, double s);
Var AddScalar(Tape& t, Var a, double s);
// a (n x d) + bias (1 x d) broadcast over rows.
Var AddRowBias(Tape& t, Var a, Var bias);
// x (n x c) scaled column-wise by s (1 x c).
Var ScaleColumns(Tape& t, Var x, Var s);
Var Relu(Tape& t, Var a);
Var Sigmoid(Tape& t, Var a);
Var Log(Tape& t, Var a);
// Elementwise binary entropy of sigmoid(logits), computed stably.
Var BinaryEntropyOfLogits(Tape& t, Var logits);
Var Sum(Tape& t, Var a);
Var Mean(Tape& t, Var a);
Var LogSoftmaxRows(Tape& t, Var a);
// Mean of -logp(row_i, class_i) over the given (row, class) pairs.
Var NllLoss(Tape& t, Var log_probs, std::span<const int> rows, std::span<const int> classes);
Var SelectRows(Tape& t, Var a, std::span<const int> rows);
// values (m x 1) written at `indices` of a (size x 1) vector filled with `fill`.
Var ScatterVector(Tape& t, Var values, std::span<const int> indices, int size, double fill);
// prop(mask) * h. `mask` may be invalid (all ones); otherwise it is E x 1.
Var Propagate(Tape& t, const PropagationMatrix& prop, Var mask, Var h);

}  // namespace dgx::nn

#endif  // DGX_NN_AUTODIFF_H_
