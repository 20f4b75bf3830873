#include "dgx/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "dgx/error.h"
#include "dgx/nn/train.h"
#include "dgx/preprocess.h"
#include "dgx/rng.h"

namespace dgx {

const char* FidelityConventionName(FidelityConvention c) {
  return c == FidelityConvention::kStandard ? "standard" : "paper-literal";
}

FidelityConvention ParseFidelityConvention(std::string_view name) {
  if (name == "standard") return FidelityConvention::kStandard;
  if (name == "paper-literal" || name == "paper_literal" || name == "literal") {
    return FidelityConvention::kPaperLiteral;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown fidelity convention '" + std::string(name) +
                  "' (expected standard or paper-literal)");
}

FidelityResult CombineFidelity(double p_full, double p_without, double p_only,
                               FidelityConvention convention) {
  FidelityResult r;
  r.p_full = p_full;
  r.p_without = p_without;
  r.p_only = p_only;
  if (convention == FidelityConvention::kStandard) {
    r.fid_plus = p_full - p_without;
    r.fid_minus = p_full - p_only;
  } else {
    r.fid_plus = p_only - p_full;
    r.fid_minus = p_full - p_without;
  }
  return r;
}

namespace {

void CheckExplanationFits(const ExplainContext& ctx, const Explanation& e) {
  e.Validate();
  Require(e.target >= 0 && e.target < ctx.graph().num_nodes(), ErrorCode::kOutOfRange,
          "explanation target out of range");
  for (size_t i = 0; i < e.candidate_edges.size(); ++i) {
    const int idx = e.candidate_edges[i];
    Require(idx >= 0 && idx < ctx.graph().num_edges() && ctx.graph().edge(idx) == e.candidate_endpoints[i],
            ErrorCode::kInvalidArgument,
            "explanation edge " + std::to_string(idx) + " does not belong to this graph");
  }
  Require(e.config_hash.empty() || ctx.model().config_hash().empty() ||
              e.config_hash == ctx.model().config_hash(),
          ErrorCode::kHashMismatch,
          "explanation config " + e.config_hash + " differs from model " + ctx.model().config_hash());
}

}  // namespace

FidelityResult Fidelity(const ExplainContext& ctx, const Explanation& explanation, int k,
                        FidelityConvention convention, Budget budget) {
  Require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  CheckExplanationFits(ctx, explanation);
  const int v = explanation.target;
  const int yhat = ctx.Predicted(v);
  const Subgraph s = TopKSubgraph(explanation, k, budget);
  const size_t num_edges = static_cast<size_t>(ctx.prop().num_edges());

  std::vector<double> without(num_edges, 1.0);
  for (int e : s.edges) without[e] = 0.0;
  std::vector<double> only(num_edges, 1.0);
  for (int e : explanation.candidate_edges) only[e] = 0.0;
  for (int e : s.edges) only[e] = 1.0;

  const double p_full = ctx.probs()(v, yhat);
  const double p_without = nn::GcnForwardWithMask(ctx.model(), ctx.prop(), ctx.input(), without)(v, yhat);
  const double p_only = nn::GcnForwardWithMask(ctx.model(), ctx.prop(), ctx.input(), only)(v, yhat);
  FidelityResult r = CombineFidelity(p_full, p_without, p_only, convention);
  r.predicted = yhat;
  return r;
}

double Characterization(double fid_plus, double fid_minus, double w_plus, double w_minus,
                        bool* clamped) {
  Require(w_plus >= 0 && w_minus >= 0 && std::abs(w_plus + w_minus - 1.0) <= 1e-12,
          ErrorCode::kInvalidArgument, "characterization weights must be >= 0 and sum to 1");
  const double fp = std::clamp(fid_plus, 0.0, 1.0);
  const double fm = std::clamp(fid_minus, 0.0, 1.0);
  if (clamped) *clamped = fp != fid_plus || fm != fid_minus;
  const double denom = w_plus * (1.0 - fm) + w_minus * fp;
  if (denom == 0.0) return 0.0;
  return (w_plus + w_minus) * fp * (1.0 - fm) / denom;
}

std::optional<double> RankAuc(std::span<const double> scores, std::span<const int> labels) {
  Require(scores.size() == labels.size(), ErrorCode::kShapeMismatch,
          "one label per score expected");
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Sum of (1-based) average ranks of positives; ranks are half-integers so
  // the sum is exact.
  double rank_sum = 0.0;
  double positives = 0.0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (size_t t = i; t <= j; ++t) {
      if (labels[order[t]]) {
        rank_sum += avg_rank;
        positives += 1.0;
      }
    }
    i = j + 1;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) return std::nullopt;
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

std::vector<int> CandidateLabels(const Explanation& explanation, const DiGraph& explained,
                                 bool reciprocal_credit) {
  const std::vector<bool> truth = explained.GroundTruthMask();
  std::vector<int> labels;
  labels.reserve(explanation.candidate_edges.size());
  for (int e : explanation.candidate_edges) {
    Require(e >= 0 && e < explained.num_edges(), ErrorCode::kOutOfRange,
            "explanation edge out of range");
    bool positive = truth[e];
    const int source = explained.added_from(e);
    if (!positive && reciprocal_credit && source >= 0) positive = truth[source];
    labels.push_back(positive ? 1 : 0);
  }
  return labels;
}

AucOutcome ExplanationAuc(const Explanation& explanation, const DiGraph& explained,
                          bool reciprocal_credit) {
  Require(explained.ground_truth().has_value() && !explained.ground_truth()->empty(),
          ErrorCode::kInvalidArgument, "AUC needs ground-truth edges");
  const std::vector<int> labels = CandidateLabels(explanation, explained, reciprocal_credit);
  AucOutcome out;
  for (int l : labels) (l ? out.positives : out.negatives)++;
  out.auc = RankAuc(explanation.edge_importance, labels);
  return out;
}

Aggregate Summarize(std::span<const double> values) {
  Aggregate a;
  a.count = static_cast<int>(values.size());
  if (values.empty()) return a;
  double sum = 0.0;
  for (double x : values) sum += x;
  a.mean = sum / a.count;
  double sq = 0.0;
  for (double x : values) sq += (x - a.mean) * (x - a.mean);
  a.stddev = std::sqrt(sq / a.count);
  return a;
}

void MetricsReport::Recompute(bool has_ground_truth) {
  std::vector<double> fp;
  std::vector<double> fm;
  std::vector<double> ch;
  std::vector<double> auc_values;
  auc_undefined = 0;
  for (const NodeRecord& r : nodes) {
    fp.push_back(r.fid_plus);
    fm.push_back(r.fid_minus);
    ch.push_back(r.characterization);
    if (r.auc) {
      auc_values.push_back(*r.auc);
    } else if (has_ground_truth) {
      ++auc_undefined;
    }
  }
  fid_plus = Summarize(fp);
  fid_minus = Summarize(fm);
  characterization = Summarize(ch);
  if (has_ground_truth) {
    auc = Summarize(auc_values);
  } else {
    auc.reset();
  }
}

namespace {

nlohmann::json AggregateJson(const Aggregate& a) {
  return {{"mean", a.mean}, {"std", a.stddev}, {"count", a.count}};
}

nlohmann::json EntropyJson(const EntropyRecord& e) {
  return {{"name", e.name},           {"seed", e.seed},
          {"num_nodes", e.num_nodes}, {"num_edges", e.num_edges},
          {"alpha", e.alpha},         {"H_directed", e.directed},
          {"H_symmetrized", e.symmetrized}, {"gap", e.gap},
          {"violation", e.violation}};
}

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

nlohmann::json MetricsReport::ToJson() const {
  nlohmann::json records = nlohmann::json::array();
  for (const NodeRecord& r : nodes) {
    nlohmann::json j = {{"v", r.v},
                        {"fid_plus", r.fid_plus},
                        {"fid_minus", r.fid_minus},
                        {"char", r.characterization}};
    j["auc"] = r.auc ? nlohmann::json(*r.auc) : nlohmann::json(nullptr);
    records.push_back(std::move(j));
  }
  nlohmann::json j = {{"dataset", dataset},
                      {"explainer", explainer},
                      {"pipeline", pipeline},
                      {"convention", convention},
                      {"k", k},
                      {"w_plus", w_plus},
                      {"w_minus", w_minus},
                      {"nodes", std::move(records)},
                      {"fid_plus", AggregateJson(fid_plus)},
                      {"fid_minus", AggregateJson(fid_minus)},
                      {"char", AggregateJson(characterization)},
                      {"clamped", clamped},
                      {"config_hash", config_hash},
                      {"seed", seed},
                      {"threads", threads}};
  if (auc) {
    j["auc"] = AggregateJson(*auc);
    j["auc_undefined"] = auc_undefined;
  }
  if (entropy) j["entropy"] = EntropyJson(*entropy);
  return j;
}

std::string MetricsReport::ToCsv() const {
  std::ostringstream out;
  out << "config_hash,dataset,explainer,pipeline,v,fid_plus,fid_minus,char,auc\n";
  for (const NodeRecord& r : nodes) {
    out << config_hash << ',' << dataset << ',' << explainer << ',' << pipeline << ',' << r.v << ','
        << Num(r.fid_plus) << ',' << Num(r.fid_minus) << ',' << Num(r.characterization) << ','
        << (r.auc ? Num(*r.auc) : std::string()) << '\n';
  }
  return out.str();
}

MetricsReport EvaluateExplanations(const ExplainContext& ctx,
                                   std::span<const Explanation> explanations,
                                   const EvalOptions& options) {
  MetricsReport report;
  report.k = options.k;
  report.w_plus = options.w_plus;
  report.w_minus = options.w_minus;
  report.convention = FidelityConventionName(options.convention);
  report.config_hash = ctx.model().config_hash();
  report.pipeline = ProvenanceName(ctx.prop().provenance());
  const bool has_truth = ctx.graph().ground_truth().has_value() && !ctx.graph().ground_truth()->empty();
  for (const Explanation& e : explanations) {
    if (report.explainer.empty()) report.explainer = e.explainer;
    const FidelityResult f = Fidelity(ctx, e, options.k, options.convention, options.budget);
    NodeRecord r;
    r.v = e.target;
    r.fid_plus = f.fid_plus;
    r.fid_minus = f.fid_minus;
    bool clamped = false;
    r.characterization = Characterization(f.fid_plus, f.fid_minus, options.w_plus, options.w_minus,
                                          &clamped);
    if (clamped) ++report.clamped;
    if (has_truth) r.auc = ExplanationAuc(e, ctx.graph(), options.reciprocal_credit).auc;
    report.nodes.push_back(r);
  }
  report.Recompute(has_truth);
  return report;
}

// ---- Theorem 1 -------------------------------------------------------------

namespace {

std::vector<int> OutExceedsIn(const DiGraph& g) {
  std::vector<int> labels(g.num_nodes());
  for (int v = 0; v < g.num_nodes(); ++v) labels[v] = g.out_degree(v) > g.in_degree(v) ? 1 : 0;
  return labels;
}

int FirstWithLabel(const std::vector<int>& labels, int label) {
  for (size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] == label) return static_cast<int>(v);
  }
  return -1;
}

Dataset TinyDataset(const DiGraph& g, std::vector<int> labels, std::string name, uint64_t seed) {
  Dataset d;
  d.graph = DiGraph::FromOrderedEdges(g.num_nodes(), g.edges(), Matrix(g.num_nodes(), 0), labels,
                                      std::nullopt);
  // Every node trains; tiny graphs have nothing to hold out.
  d.split = Split(std::vector<SplitRole>(g.num_nodes(), SplitRole::kTrain));
  d.num_classes = 2;
  d.name = std::move(name);
  d.seed = seed;
  return d;
}

int CandidateCount(const DiGraph& g, Provenance provenance, double alpha, int v, int layers) {
  const ProcessedGraph pg = Preprocess(g, provenance, alpha);
  return static_cast<int>(ComputationEdges(pg.graph, v, layers).size());
}

}  // namespace

double Theorem1Report::PassRate() const {
  const int total = random_instances + planted_instances;
  if (total == 0) return 1.0;
  return 1.0 - static_cast<double>(random_violations + planted_violations) / total;
}

Dataset Theorem1RandomInstance(const Theorem1Config& config, uint64_t seed) {
  Require(config.n_min >= 2 && config.n_max >= config.n_min && config.n_max <= 6,
          ErrorCode::kInvalidArgument, "theorem suite needs 2 <= n_min <= n_max <= 6");
  Rng rng = MakeRng(seed, "theorem1/size");
  const int n = config.n_min + static_cast<int>(UniformIndex(rng, config.n_max - config.n_min + 1));
  for (uint64_t attempt = 0;; ++attempt) {
    Require(attempt < 10000, ErrorCode::kNotConverged, "could not sample a usable digraph");
    const DiGraph g = RandomDigraph(n, config.edge_probability, DeriveSeed(seed, "theorem1/graph", attempt));
    const std::vector<int> labels = OutExceedsIn(g);
    const int v = FirstWithLabel(labels, 1);
    if (v < 0 || FirstWithLabel(labels, 0) < 0) continue;
    if (CandidateCount(g, Provenance::kLapNorm, config.alpha, v, config.layers) >
        kMaxBruteForceCandidates) {
      continue;
    }
    if (CandidateCount(g, Provenance::kSymm, config.alpha, v, config.layers) >
        kMaxBruteForceCandidates) {
      continue;
    }
    return TinyDataset(g, labels, "random_digraph", seed);
  }
}

Dataset Theorem1PlantedInstance(uint64_t seed) {
  Rng rng = MakeRng(seed, "theorem1/planted");
  const int pairs = 2 + static_cast<int>(UniformIndex(rng, 2));
  const int n = 2 * pairs;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[UniformIndex(rng, i + 1)]);
  std::vector<Edge> edges;
  std::vector<int> labels(n, 0);
  for (int p = 0; p < pairs; ++p) {
    edges.push_back({perm[2 * p], perm[2 * p + 1]});
    labels[perm[2 * p]] = 1;
  }
  const DiGraph g = DiGraph::FromEdgeList(n, std::move(edges), Matrix(), labels);
  return TinyDataset(g, labels, "planted_pairs", seed);
}

Theorem1Instance RunTheorem1Instance(const Theorem1Config& config, const Dataset& dataset,
                                     uint64_t seed, bool planted) {
  Theorem1Instance rec;
  rec.seed = seed;
  rec.planted = planted;
  rec.num_nodes = dataset.graph.num_nodes();
  rec.num_edges = dataset.graph.num_edges();
  rec.target = FirstWithLabel(dataset.graph.labels(), 1);
  Require(rec.target >= 0, ErrorCode::kInvalidArgument, "instance has no label-1 node");

  nn::GcnConfig gcn;
  gcn.layers = config.layers;
  gcn.hidden = config.hidden;
  nn::TrainConfig train;
  train.epochs = config.epochs;
  train.learning_rate = config.learning_rate;
  train.weight_decay = config.weight_decay;
  train.keep_best = false;

  double mi[2] = {0.0, 0.0};
  const Provenance pipelines[2] = {Provenance::kLapNorm, Provenance::kSymm};
  for (int p = 0; p < 2; ++p) {
    const ProcessedGraph pg = Preprocess(dataset.graph, pipelines[p], config.alpha);
    Dataset d = dataset;
    d.graph = pg.graph;
    const nn::GcnModel init =
        nn::GcnModel::Initialize(1, 2, gcn, DeriveSeed(seed, "theorem1/model", static_cast<uint64_t>(p)));
    const nn::TrainResult trained = nn::Train(init, d, pg.prop, train);
    const ExplainContext ctx(trained.model, pg);
    const BruteForceResult best = BruteForceBestSubgraph(ctx, rec.target, config.k);
    mi[p] = best.mi;
    if (p == 0) {
      rec.directed_candidates = static_cast<int>(ctx.CandidateEdges(rec.target).size());
      rec.directed_best = best.edges;
    } else {
      rec.symmetrized_candidates = static_cast<int>(ctx.CandidateEdges(rec.target).size());
      rec.symmetrized_best = best.edges;
    }
  }
  rec.directed_mi = mi[0];
  rec.symmetrized_mi = mi[1];
  rec.violation = rec.directed_mi < rec.symmetrized_mi - kTheorem1Tolerance;
  rec.strict = rec.directed_mi > rec.symmetrized_mi + kTheorem1Tolerance;
  return rec;
}

Theorem1Report RunTheorem1Suite(const Theorem1Config& config) {
  Theorem1Report report;
  report.config = config;
  for (int i = 0; i < config.instances; ++i) {
    const uint64_t seed = DeriveSeed(config.seed, "theorem1/random", static_cast<uint64_t>(i));
    const Dataset d = Theorem1RandomInstance(config, seed);
    Theorem1Instance rec = RunTheorem1Instance(config, d, seed, false);
    ++report.random_instances;
    if (rec.violation) ++report.random_violations;
    report.instances.push_back(std::move(rec));
  }
  for (int i = 0; i < config.planted; ++i) {
    const uint64_t seed = DeriveSeed(config.seed, "theorem1/planted", static_cast<uint64_t>(i));
    const Dataset d = Theorem1PlantedInstance(seed);
    Theorem1Instance rec = RunTheorem1Instance(config, d, seed, true);
    ++report.planted_instances;
    if (rec.violation) ++report.planted_violations;
    if (rec.strict) ++report.planted_strict;
    report.instances.push_back(std::move(rec));
  }
  return report;
}

nlohmann::json Theorem1Report::ToJson() const {
  nlohmann::json items = nlohmann::json::array();
  nlohmann::json violating = nlohmann::json::array();
  for (const Theorem1Instance& r : instances) {
    items.push_back({{"seed", r.seed},
                     {"planted", r.planted},
                     {"num_nodes", r.num_nodes},
                     {"num_edges", r.num_edges},
                     {"target", r.target},
                     {"directed_candidates", r.directed_candidates},
                     {"symmetrized_candidates", r.symmetrized_candidates},
                     {"directed_max_mi", r.directed_mi},
                     {"symmetrized_max_mi", r.symmetrized_mi},
                     {"directed_best", r.directed_best},
                     {"symmetrized_best", r.symmetrized_best},
                     {"violation", r.violation},
                     {"strict", r.strict}});
    if (r.violation) violating.push_back(r.seed);
  }
  return {{"kind", "theorem1"},
          {"k", config.k},
          {"n_min", config.n_min},
          {"n_max", config.n_max},
          {"alpha", config.alpha},
          {"seed", config.seed},
          {"instances", random_instances + planted_instances},
          {"random_instances", random_instances},
          {"planted_instances", planted_instances},
          {"violations", random_violations + planted_violations},
          {"random_violations", random_violations},
          {"planted_violations", planted_violations},
          {"planted_strict", planted_strict},
          {"pass_rate", PassRate()},
          {"violating_seeds", std::move(violating)},
          {"records", std::move(items)}};
}

// ---- Entropy ---------------------------------------------------------------

EntropyRecord EntropyOf(const DiGraph& g, std::string name, uint64_t seed, double alpha,
                        double tolerance) {
  const EntropyGap gap = ComputeEntropyGap(g, alpha);
  EntropyRecord r;
  r.name = std::move(name);
  r.seed = seed;
  r.num_nodes = g.num_nodes();
  r.num_edges = g.num_edges();
  r.alpha = alpha;
  r.directed = gap.directed;
  r.symmetrized = gap.symmetrized;
  r.gap = gap.gap;
  r.violation = gap.gap < -tolerance;
  return r;
}

double EntropyReport::PassRate() const {
  if (records.empty()) return 1.0;
  return 1.0 - static_cast<double>(violations) / static_cast<double>(records.size());
}

EntropyReport RunEntropySuite(const EntropySuiteConfig& config) {
  Require(config.n_min >= 1 && config.n_max >= config.n_min, ErrorCode::kInvalidArgument,
          "entropy suite needs 1 <= n_min <= n_max");
  EntropyReport report;
  report.config = config;
  for (DatasetKind kind : config.datasets) {
    const Dataset d = Generate(SyntheticSpec::Defaults(kind, config.dataset_seed));
    report.records.push_back(
        EntropyOf(d.graph, DatasetKindName(kind), config.dataset_seed, config.alpha, config.tolerance));
  }
  for (int i = 0; i < config.random_digraphs; ++i) {
    const uint64_t seed = DeriveSeed(config.seed, "entropy/random", static_cast<uint64_t>(i));
    Rng rng = MakeRng(seed, "entropy/size");
    const int n = config.n_min + static_cast<int>(UniformIndex(rng, config.n_max - config.n_min + 1));
    const DiGraph g = RandomDigraph(n, config.edge_probability, seed);
    report.records.push_back(EntropyOf(g, "random_digraph", seed, config.alpha, config.tolerance));
  }
  for (const EntropyRecord& r : report.records) {
    if (r.violation) ++report.violations;
  }
  return report;
}

nlohmann::json EntropyReport::ToJson() const {
  nlohmann::json items = nlohmann::json::array();
  for (const EntropyRecord& r : records) items.push_back(EntropyJson(r));
  return {{"kind", "entropy"},
          {"alpha", config.alpha},
          {"tolerance", config.tolerance},
          {"instances", records.size()},
          {"violations", violations},
          {"pass_rate", PassRate()},
          {"records", std::move(items)}};
}

}  // namespace dgx
