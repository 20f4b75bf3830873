#include "dgx/explain.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "dgx/error.h"
#include "dgx/nn/train.h"

namespace dgx {

using nn::Tape;
using nn::Tensor;
using nn::Var;

const char* ExplainerKindName(ExplainerKind kind) {
  return kind == ExplainerKind::kGnn ? "gnn" : "pg";
}

ExplainerKind ParseExplainerKind(std::string_view name) {
  if (name == "gnn" || name == "gnnexplainer") return ExplainerKind::kGnn;
  if (name == "pg" || name == "pgexplainer") return ExplainerKind::kPg;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown explainer '" + std::string(name) + "' (expected gnn or pg)");
}

ExplainerConfig ExplainerConfig::Defaults(ExplainerKind kind) {
  ExplainerConfig c;
  if (kind == ExplainerKind::kPg) {
    c.epochs = 30;
    c.learning_rate = 0.003;
    c.size_penalty = 0.05;
    c.entropy_penalty = 1.0;
  }
  return c;
}

void ExplainerConfig::Validate() const {
  Require(epochs >= 0, ErrorCode::kInvalidArgument, "explainer epochs must be >= 0");
  Require(learning_rate > 0, ErrorCode::kInvalidArgument, "explainer learning rate must be > 0");
  Require(size_penalty >= 0 && entropy_penalty >= 0, ErrorCode::kInvalidArgument,
          "explainer penalties must be >= 0");
  Require(tau_end > 0 && tau_start >= tau_end, ErrorCode::kInvalidArgument,
          "temperatures must satisfy tau_start >= tau_end > 0");
  Require(samples >= 1 && hidden >= 1, ErrorCode::kInvalidArgument,
          "explainer samples and width must be >= 1");
}

void Explanation::Validate() const {
  Require(candidate_edges.size() == edge_importance.size() &&
              candidate_endpoints.size() == candidate_edges.size(),
          ErrorCode::kShapeMismatch, "explanation: one score per candidate edge expected");
  for (double s : edge_importance) {
    Require(std::isfinite(s) && s >= 0.0 && s <= 1.0, ErrorCode::kValidationGate,
            "explanation: edge importance outside [0, 1]");
  }
  for (double s : feature_importance) {
    Require(std::isfinite(s) && s >= 0.0 && s <= 1.0, ErrorCode::kValidationGate,
            "explanation: feature importance outside [0, 1]");
  }
}

ExplainContext::ExplainContext(const nn::GcnModel& model, const ProcessedGraph& processed)
    : model_(&model), processed_(&processed) {
  Require(processed.prop.size() == processed.graph.num_nodes(), ErrorCode::kShapeMismatch,
          "operator size differs from the graph");
  input_ = nn::ModelInput(processed.graph);
  Require(input_.cols() == model.input_dim(), ErrorCode::kShapeMismatch,
          "model expects " + std::to_string(model.input_dim()) + " input features, graph has " +
              std::to_string(input_.cols()));
  probs_ = nn::GcnForward(model, processed.prop, input_);
  embeddings_ = nn::Embeddings(model, processed.prop, input_);
}

int ExplainContext::Predicted(int v) const {
  Require(v >= 0 && v < graph().num_nodes(), ErrorCode::kOutOfRange,
          "node " + std::to_string(v) + " out of range");
  Eigen::Index arg = 0;
  probs_.row(v).maxCoeff(&arg);
  return static_cast<int>(arg);
}

std::vector<int> ComputationEdges(const DiGraph& g, int v, int layers) {
  Require(v >= 0 && v < g.num_nodes(), ErrorCode::kOutOfRange,
          "node " + std::to_string(v) + " out of range");
  Require(layers >= 1, ErrorCode::kInvalidArgument, "layer count must be >= 1");
  return InducedEdges(g, KHopNeighborhood(g, v, layers, Direction::kBoth));
}

std::vector<int> ExplainContext::CandidateEdges(int v) const {
  return ComputationEdges(graph(), v, model_->num_layers());
}

namespace {

Explanation MakeExplanation(const ExplainContext& ctx, int v, std::vector<int> candidates,
                            const char* explainer) {
  Explanation e;
  e.target = v;
  e.candidate_edges = std::move(candidates);
  for (int idx : e.candidate_edges) e.candidate_endpoints.push_back(ctx.graph().edge(idx));
  e.explainer = explainer;
  e.config_hash = ctx.model().config_hash();
  return e;
}

Tensor Column(std::span<const double> values) {
  Tensor t(static_cast<Eigen::Index>(values.size()), 1);
  for (size_t i = 0; i < values.size(); ++i) t(i, 0) = values[i];
  return t;
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log P_yhat(v) under the masked operator plus size and entropy penalties.
// `edge_logits` may be invalid when there are no candidate edges.
Var RecordMaskObjective(Tape& tape, const ExplainContext& ctx, int v, int yhat,
                        std::span<const int> candidates, Var edge_logits, Var feature_logits,
                        const ExplainerConfig& config) {
  Var input = tape.Constant(ctx.input());
  if (feature_logits.valid()) input = nn::ScaleColumns(tape, input, nn::Sigmoid(tape, feature_logits));
  Var mask;
  Var edge_mask;
  if (edge_logits.valid()) {
    edge_mask = nn::Sigmoid(tape, edge_logits);
    mask = nn::ScatterVector(tape, edge_mask, candidates, ctx.prop().num_edges(), 1.0);
  }
  const nn::ForwardPass pass = nn::RecordForward(tape, ctx.model(), ctx.prop(), input, mask, false);
  const int row = v;
  Var loss = nn::NllLoss(tape, pass.log_probs, std::span<const int>(&row, 1),
                         std::span<const int>(&yhat, 1));
  if (edge_logits.valid()) {
    loss = nn::Add(tape, loss, nn::Scale(tape, nn::Sum(tape, edge_mask), config.size_penalty));
    loss = nn::Add(tape, loss,
                   nn::Scale(tape, nn::Mean(tape, nn::BinaryEntropyOfLogits(tape, edge_logits)),
                             config.entropy_penalty));
  }
  if (feature_logits.valid()) {
    Var fm = nn::Sigmoid(tape, feature_logits);
    loss = nn::Add(tape, loss, nn::Scale(tape, nn::Sum(tape, fm), config.size_penalty));
    loss = nn::Add(tape, loss,
                   nn::Scale(tape, nn::Mean(tape, nn::BinaryEntropyOfLogits(tape, feature_logits)),
                             config.entropy_penalty));
  }
  return loss;
}

void CheckLoss(double loss, int v) {
  Require(std::isfinite(loss), ErrorCode::kNonFinite,
          "explainer loss is not finite at node " + std::to_string(v));
}

}  // namespace

Explanation GnnExplainer(const ExplainContext& ctx, int v, const ExplainerConfig& config) {
  config.Validate();
  const int yhat = ctx.Predicted(v);
  Explanation expl = MakeExplanation(ctx, v, ctx.CandidateEdges(v), "gnnexplainer");
  expl.seed = config.seed;
  const std::vector<int>& candidates = expl.candidate_edges;

  Rng rng = MakeRng(config.seed, "gnn_explainer", static_cast<uint64_t>(v));
  Tensor edge_logits(static_cast<Eigen::Index>(candidates.size()), 1);
  for (Eigen::Index i = 0; i < edge_logits.rows(); ++i) edge_logits(i, 0) = 0.1 * StandardNormal(rng);
  Tensor feature_logits;
  if (config.feature_mask) {
    feature_logits.resize(1, ctx.input().cols());
    for (Eigen::Index j = 0; j < feature_logits.cols(); ++j) {
      feature_logits(0, j) = 0.1 * StandardNormal(rng);
    }
  }
  const bool has_edges = !candidates.empty();

  auto evaluate = [&](bool backward, Tensor* edge_grad, Tensor* feature_grad) {
    Tape tape;
    Var m = has_edges ? tape.Parameter(edge_logits) : Var{};
    Var f = config.feature_mask ? tape.Parameter(feature_logits) : Var{};
    Var loss = RecordMaskObjective(tape, ctx, v, yhat, candidates, m, f, config);
    const double value = tape.scalar(loss);
    CheckLoss(value, v);
    if (backward) {
      tape.Backward(loss);
      if (m.valid()) *edge_grad = tape.grad(m);
      if (f.valid()) *feature_grad = tape.grad(f);
    }
    return value;
  };

  nn::Adam adam(config.learning_rate);
  Tensor edge_grad;
  Tensor feature_grad;
  for (int epoch = 0; epoch < config.epochs && (has_edges || config.feature_mask); ++epoch) {
    const double loss = evaluate(true, &edge_grad, &feature_grad);
    if (epoch == 0) expl.initial_loss = loss;
    std::vector<Tensor*> params;
    std::vector<const Tensor*> grads;
    if (has_edges) {
      params.push_back(&edge_logits);
      grads.push_back(&edge_grad);
    }
    if (config.feature_mask) {
      params.push_back(&feature_logits);
      grads.push_back(&feature_grad);
    }
    adam.Step(params, grads);
  }
  expl.final_loss = evaluate(false, nullptr, nullptr);
  if (!expl.initial_loss) expl.initial_loss = expl.final_loss;

  for (Eigen::Index i = 0; i < edge_logits.rows(); ++i) {
    expl.edge_importance.push_back(Sigmoid(edge_logits(i, 0)));
  }
  for (Eigen::Index j = 0; j < feature_logits.size(); ++j) {
    expl.feature_importance.push_back(Sigmoid(feature_logits(0, j)));
  }
  return expl;
}

MaskObjective GnnExplainerObjective(const ExplainContext& ctx, int v,
                                    std::span<const int> candidates,
                                    std::span<const double> logits, const ExplainerConfig& config) {
  Require(candidates.size() == logits.size() && !candidates.empty(), ErrorCode::kShapeMismatch,
          "one logit per candidate edge expected");
  Tape tape;
  Var m = tape.Parameter(Column(logits));
  Var loss = RecordMaskObjective(tape, ctx, v, ctx.Predicted(v), candidates, m, Var{}, config);
  MaskObjective out;
  out.loss = tape.scalar(loss);
  tape.Backward(loss);
  out.grad = tape.grad(m).col(0);
  return out;
}

PgExplainerNet PgExplainerNet::Initialize(int embedding_dim, int hidden, uint64_t seed) {
  Require(embedding_dim >= 1 && hidden >= 1, ErrorCode::kInvalidArgument,
          "invalid explainer network size");
  Rng rng = MakeRng(seed, "pg_explainer/init");
  auto glorot = [&](int in, int out) {
    const double limit = std::sqrt(6.0 / (in + out));
    Tensor w(in, out);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = (2.0 * UniformUnit(rng) - 1.0) * limit;
    return w;
  };
  PgExplainerNet net;
  net.w1 = glorot(3 * embedding_dim, hidden);
  net.b1 = Tensor::Zero(1, hidden);
  net.w2 = glorot(hidden, 1);
  net.b2 = Tensor::Zero(1, 1);
  return net;
}

namespace {

Tensor EdgeInputs(const ExplainContext& ctx, int v, std::span<const int> candidates) {
  const Tensor& z = ctx.embeddings();
  const Eigen::Index d = z.cols();
  Tensor in(static_cast<Eigen::Index>(candidates.size()), 3 * d);
  for (size_t i = 0; i < candidates.size(); ++i) {
    const Edge& e = ctx.graph().edge(candidates[i]);
    in.block(static_cast<Eigen::Index>(i), 0, 1, d) = z.row(e.src);
    in.block(static_cast<Eigen::Index>(i), d, 1, d) = z.row(e.dst);
    in.block(static_cast<Eigen::Index>(i), 2 * d, 1, d) = z.row(v);
  }
  return in;
}

struct NetVars {
  Var w1, b1, w2, b2;
};

NetVars RecordNet(Tape& tape, const PgExplainerNet& net, bool trainable) {
  auto make = [&](const Tensor& t) { return trainable ? tape.Parameter(t) : tape.Constant(t); };
  return {make(net.w1), make(net.b1), make(net.w2), make(net.b2)};
}

Var RecordEdgeLogits(Tape& tape, const NetVars& p, const Tensor& inputs) {
  Var h = nn::Relu(tape, nn::AddRowBias(tape, nn::MatMul(tape, tape.Constant(inputs), p.w1), p.b1));
  return nn::AddRowBias(tape, nn::MatMul(tape, h, p.w2), p.b2);
}

void CheckNet(const PgExplainerNet& net, const ExplainContext& ctx) {
  Require(net.embedding_dim() == ctx.embeddings().cols(), ErrorCode::kShapeMismatch,
          "explainer network expects embeddings of width " + std::to_string(net.embedding_dim()));
  Require(net.config_hash.empty() || ctx.model().config_hash().empty() ||
              net.config_hash == ctx.model().config_hash(),
          ErrorCode::kHashMismatch, "explainer network was trained for config " + net.config_hash +
                                        ", model has " + ctx.model().config_hash());
}

// Loss of one target given logistic noise; returns the loss variable.
Var RecordPgObjective(Tape& tape, const NetVars& p, const ExplainContext& ctx, int v, int yhat,
                      std::span<const int> candidates, const Tensor& inputs,
                      std::span<const double> noise, double tau, const ExplainerConfig& config) {
  Var logits = RecordEdgeLogits(tape, p, inputs);
  Var sampled = nn::Sigmoid(
      tape, nn::Scale(tape, nn::Add(tape, logits, tape.Constant(Column(noise))), 1.0 / tau));
  Var mask = nn::ScatterVector(tape, sampled, candidates, ctx.prop().num_edges(), 1.0);
  const nn::ForwardPass pass =
      nn::RecordForward(tape, ctx.model(), ctx.prop(), tape.Constant(ctx.input()), mask, false);
  Var loss = nn::NllLoss(tape, pass.log_probs, std::span<const int>(&v, 1),
                         std::span<const int>(&yhat, 1));
  loss = nn::Add(tape, loss,
                 nn::Scale(tape, nn::Sum(tape, nn::Sigmoid(tape, logits)), config.size_penalty));
  return nn::Add(tape, loss,
                 nn::Scale(tape, nn::Mean(tape, nn::BinaryEntropyOfLogits(tape, logits)),
                           config.entropy_penalty));
}

std::vector<double> LogisticNoise(size_t count, Rng& rng) {
  std::vector<double> out(count);
  for (double& x : out) {
    double e = UniformUnit(rng);
    while (e <= 0.0) e = UniformUnit(rng);
    x = std::log(e) - std::log1p(-e);
  }
  return out;
}

}  // namespace

std::vector<double> SampleConcreteMask(std::span<const double> logits, double tau, Rng& rng) {
  Require(tau > 0, ErrorCode::kInvalidArgument, "temperature must be > 0");
  const std::vector<double> noise = LogisticNoise(logits.size(), rng);
  std::vector<double> out(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) out[i] = Sigmoid((noise[i] + logits[i]) / tau);
  return out;
}

PgObjective PgExplainerObjective(const PgExplainerNet& net, const ExplainContext& ctx, int v,
                                 std::span<const double> logistic_noise, double tau,
                                 const ExplainerConfig& config) {
  CheckNet(net, ctx);
  const std::vector<int> candidates = ctx.CandidateEdges(v);
  Require(logistic_noise.size() == candidates.size() && !candidates.empty(),
          ErrorCode::kShapeMismatch, "one noise value per candidate edge expected");
  Tape tape;
  const NetVars p = RecordNet(tape, net, true);
  Var loss = RecordPgObjective(tape, p, ctx, v, ctx.Predicted(v), candidates,
                               EdgeInputs(ctx, v, candidates), logistic_noise, tau, config);
  PgObjective out;
  out.loss = tape.scalar(loss);
  tape.Backward(loss);
  for (Var var : {p.w1, p.b1, p.w2, p.b2}) out.grads.push_back(tape.grad(var));
  return out;
}

PgExplainerNet PgExplainerTrain(const ExplainContext& ctx, std::span<const int> targets,
                                const ExplainerConfig& config, PgTrainStats* stats) {
  config.Validate();
  Require(!targets.empty(), ErrorCode::kInvalidArgument, "explainer training needs targets");
  PgExplainerNet net =
      PgExplainerNet::Initialize(static_cast<int>(ctx.embeddings().cols()), config.hidden, config.seed);
  net.config_hash = ctx.model().config_hash();

  struct Target {
    int v;
    int yhat;
    std::vector<int> candidates;
    Tensor inputs;
  };
  std::vector<Target> prepared;
  for (int v : targets) {
    std::vector<int> candidates = ctx.CandidateEdges(v);
    if (candidates.empty()) continue;
    Tensor inputs = EdgeInputs(ctx, v, candidates);
    prepared.push_back({v, ctx.Predicted(v), std::move(candidates), std::move(inputs)});
  }

  Rng rng = MakeRng(config.seed, "pg_explainer/train");
  nn::Adam adam(config.learning_rate);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double frac = config.epochs > 1 ? static_cast<double>(epoch) / (config.epochs - 1) : 1.0;
    const double tau = config.tau_start * std::pow(config.tau_end / config.tau_start, frac);
    double epoch_loss = 0.0;
    for (const Target& t : prepared) {
      std::vector<Tensor> grads = {Tensor::Zero(net.w1.rows(), net.w1.cols()),
                                   Tensor::Zero(1, net.b1.cols()),
                                   Tensor::Zero(net.w2.rows(), 1), Tensor::Zero(1, 1)};
      for (int s = 0; s < config.samples; ++s) {
        const std::vector<double> noise = LogisticNoise(t.candidates.size(), rng);
        Tape tape;
        const NetVars p = RecordNet(tape, net, true);
        Var loss = RecordPgObjective(tape, p, ctx, t.v, t.yhat, t.candidates, t.inputs, noise, tau,
                                     config);
        CheckLoss(tape.scalar(loss), t.v);
        epoch_loss += tape.scalar(loss) / config.samples;
        tape.Backward(loss);
        const Var vars[] = {p.w1, p.b1, p.w2, p.b2};
        for (int i = 0; i < 4; ++i) {
          if (tape.grad(vars[i]).size() != 0) grads[i] += tape.grad(vars[i]) / config.samples;
        }
      }
      adam.Step({&net.w1, &net.b1, &net.w2, &net.b2}, {&grads[0], &grads[1], &grads[2], &grads[3]});
    }
    if (stats) stats->epoch_loss.push_back(epoch_loss);
  }
  return net;
}

Explanation PgExplainerExplain(const PgExplainerNet& net, const ExplainContext& ctx, int v) {
  CheckNet(net, ctx);
  Explanation expl = MakeExplanation(ctx, v, ctx.CandidateEdges(v), "pgexplainer");
  if (expl.candidate_edges.empty()) return expl;
  Tape tape;
  const NetVars p = RecordNet(tape, net, false);
  const Tensor& logits =
      tape.value(RecordEdgeLogits(tape, p, EdgeInputs(ctx, v, expl.candidate_edges)));
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    expl.edge_importance.push_back(Sigmoid(logits(i, 0)));
  }
  return expl;
}

Subgraph TopKSubgraph(const Explanation& explanation, int k, Budget budget) {
  Require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  explanation.Validate();
  std::vector<size_t> order(explanation.candidate_edges.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (explanation.edge_importance[a] != explanation.edge_importance[b]) {
      return explanation.edge_importance[a] > explanation.edge_importance[b];
    }
    return explanation.candidate_edges[a] < explanation.candidate_edges[b];
  });
  Subgraph out;
  std::vector<int> nodes;
  auto has = [&](int x) { return std::find(nodes.begin(), nodes.end(), x) != nodes.end(); };
  for (size_t i : order) {
    const Edge& e = explanation.candidate_endpoints[i];
    if (budget == Budget::kEdges) {
      if (static_cast<int>(out.edges.size()) >= k) break;
    } else {
      const int added = (has(e.src) ? 0 : 1) + (e.dst != e.src && !has(e.dst) ? 1 : 0);
      if (static_cast<int>(nodes.size()) + added > k) continue;
    }
    if (!has(e.src)) nodes.push_back(e.src);
    if (!has(e.dst)) nodes.push_back(e.dst);
    out.edges.push_back(explanation.candidate_edges[i]);
  }
  std::sort(nodes.begin(), nodes.end());
  out.nodes = std::move(nodes);
  return out;
}

namespace {

double Entropy(const Eigen::Ref<const Eigen::RowVectorXd>& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) h -= p(i) * std::log(p(i));
  }
  return h;
}

double LabelEntropy(const ExplainContext& ctx) {
  const Eigen::RowVectorXd mean = ctx.probs().colwise().mean();
  return Entropy(mean);
}

double PredictiveEntropy(const ExplainContext& ctx, int v, const std::vector<double>& mask) {
  const Tensor probs = nn::GcnForwardWithMask(ctx.model(), ctx.prop(), ctx.input(), mask);
  return Entropy(probs.row(v));
}

}  // namespace

double SubgraphMutualInformation(const ExplainContext& ctx, int v, std::span<const int> kept) {
  std::vector<double> mask(static_cast<size_t>(ctx.prop().num_edges()), 0.0);
  for (int e : kept) {
    Require(e >= 0 && e < ctx.prop().num_edges(), ErrorCode::kOutOfRange, "edge out of range");
    mask[e] = 1.0;
  }
  return LabelEntropy(ctx) - PredictiveEntropy(ctx, v, mask);
}

BruteForceResult BruteForceBestSubgraph(const ExplainContext& ctx, int v, int k) {
  const std::vector<int> candidates = ctx.CandidateEdges(v);
  return BruteForceBestSubgraph(ctx, v, k, candidates);
}

BruteForceResult BruteForceBestSubgraph(const ExplainContext& ctx, int v, int k,
                                        std::span<const int> candidates) {
  Require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  const int c = static_cast<int>(candidates.size());
  Require(c <= kMaxBruteForceCandidates, ErrorCode::kTooLarge,
          "exhaustive search over " + std::to_string(c) + " candidate edges (limit " +
              std::to_string(kMaxBruteForceCandidates) + ")");
  // Local node ids of the candidate endpoints, as bits.
  std::map<int, int> local;
  std::vector<uint64_t> edge_bits(c);
  for (int i = 0; i < c; ++i) {
    const Edge& e = ctx.graph().edge(candidates[i]);
    for (int x : {e.src, e.dst}) {
      if (!local.count(x)) local.emplace(x, static_cast<int>(local.size()));
    }
    edge_bits[i] = (uint64_t{1} << local[e.src]) | (uint64_t{1} << local[e.dst]);
  }

  BruteForceResult best;
  best.label_entropy = LabelEntropy(ctx);
  best.mi = -std::numeric_limits<double>::infinity();
  const uint32_t total = uint32_t{1} << c;
  std::vector<uint64_t> node_bits(total, 0);
  std::vector<double> mask(static_cast<size_t>(ctx.prop().num_edges()), 0.0);
  for (uint32_t subset = 0; subset < total; ++subset) {
    if (subset) {
      const int low = std::countr_zero(subset);
      node_bits[subset] = node_bits[subset & (subset - 1)] | edge_bits[low];
    }
    if (std::popcount(node_bits[subset]) > k) continue;
    for (int i = 0; i < c; ++i) mask[candidates[i]] = (subset >> i) & 1u ? 1.0 : 0.0;
    const double mi = best.label_entropy - PredictiveEntropy(ctx, v, mask);
    ++best.subsets_evaluated;
    if (mi > best.mi) {
      best.mi = mi;
      best.edges.clear();
      for (int i = 0; i < c; ++i) {
        if ((subset >> i) & 1u) best.edges.push_back(candidates[i]);
      }
    }
  }
  return best;
}

nlohmann::json ExplanationToJson(const Explanation& explanation) {
  nlohmann::json edges = nlohmann::json::array();
  for (size_t i = 0; i < explanation.candidate_edges.size(); ++i) {
    edges.push_back({{"index", explanation.candidate_edges[i]},
                     {"src", explanation.candidate_endpoints[i].src},
                     {"dst", explanation.candidate_endpoints[i].dst},
                     {"score", explanation.edge_importance[i]}});
  }
  nlohmann::json j = {{"v", explanation.target},
                      {"edges", std::move(edges)},
                      {"features", explanation.feature_importance},
                      {"explainer", explanation.explainer},
                      {"config_hash", explanation.config_hash},
                      {"seed", explanation.seed}};
  if (explanation.initial_loss) j["initial_loss"] = *explanation.initial_loss;
  if (explanation.final_loss) j["final_loss"] = *explanation.final_loss;
  return j;
}

Explanation ExplanationFromJson(const nlohmann::json& j) {
  try {
    Explanation e;
    e.target = j.at("v").get<int>();
    for (const auto& edge : j.at("edges")) {
      e.candidate_edges.push_back(edge.contains("index") ? edge.at("index").get<int>()
                                                         : static_cast<int>(e.candidate_edges.size()));
      e.candidate_endpoints.push_back({edge.at("src").get<int>(), edge.at("dst").get<int>()});
      e.edge_importance.push_back(edge.at("score").get<double>());
    }
    if (j.contains("features")) e.feature_importance = j.at("features").get<std::vector<double>>();
    e.explainer = j.value("explainer", "");
    e.config_hash = j.value("config_hash", "");
    e.seed = j.value("seed", uint64_t{0});
    if (j.contains("initial_loss")) e.initial_loss = j.at("initial_loss").get<double>();
    if (j.contains("final_loss")) e.final_loss = j.at("final_loss").get<double>();
    e.Validate();
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kParse, std::string("malformed explanation: ") + ex.what());
  }
}

std::string ExplanationToDot(const Explanation& explanation, const std::set<Edge>& ground_truth) {
  explanation.Validate();
  std::ostringstream out;
  out << "digraph explanation {\n";
  out << "  node [shape=circle, fontsize=10];\n";
  out << "  n" << explanation.target << " [label=\"" << explanation.target
      << "\", style=filled, fillcolor=\"#ffd54f\"];\n";
  char buf[160];
  for (size_t i = 0; i < explanation.candidate_edges.size(); ++i) {
    const Edge& e = explanation.candidate_endpoints[i];
    const double s = explanation.edge_importance[i];
    // Light gray at 0 to red at 1.
    const int r = static_cast<int>(std::lround(208 + (214 - 208) * s));
    const int g = static_cast<int>(std::lround(208 + (39 - 208) * s));
    const int b = static_cast<int>(std::lround(208 + (40 - 208) * s));
    char color[8];
    std::snprintf(color, sizeof(color), "#%02x%02x%02x", r, g, b);
    const bool truth = ground_truth.count(e) > 0;
    std::snprintf(buf, sizeof(buf), "  n%d -> n%d [penwidth=%.3f, color=\"%s%s%s\", label=\"%.3f\"];\n",
                  e.src, e.dst, 0.5 + 4.5 * s, truth ? "black:" : "", color, truth ? ":black" : "", s);
    out << buf;
  }
  out << "}\n";
  return out.str();
}

}  // namespace dgx
