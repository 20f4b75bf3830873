#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "dgx/datagen.h"
#include "dgx/error.h"
#include "dgx/explain.h"
#include "dgx/nn/train.h"
#include "dgx/preprocess.h"
#include "dgx/rng.h"
#include "dot_reader.h"

namespace dgx {
namespace {

using nn::GcnModel;
using nn::Tensor;

// Stars whose centers are predicted class 1 only through one "hot" in-edge.
// Every leaf points at its center; the operator is identity plus one
// unit-weight term per edge, so the model is a single linear layer:
//   logits(center) = sum_j m_j x_j W + b,  x_hot = [0 1], x_cold = [1 0].
struct Planted {
  ProcessedGraph processed;
  GcnModel model;
  std::vector<int> centers;
  std::map<int, int> hot_edge;  // center -> edge index
};

Planted MakePlanted(int stars, int leaves) {
  const int n = stars * (leaves + 1);
  std::vector<Edge> edges;
  Matrix x = Matrix::Zero(n, 2);
  std::vector<int> labels(n, 0);
  std::vector<std::pair<int, int>> hot;
  for (int s = 0; s < stars; ++s) {
    const int c = s * (leaves + 1);
    x(c, 0) = 1.0;
    labels[c] = 1;
    const int hot_leaf = c + 1 + s % leaves;
    for (int j = 1; j <= leaves; ++j) {
      edges.push_back({c + j, c});
      x(c + j, c + j == hot_leaf ? 1 : 0) = 1.0;
    }
    hot.push_back({c, hot_leaf});
  }
  Planted p;
  const DiGraph g = DiGraph::FromEdgeList(n, edges, x, labels);
  std::vector<EdgeTerm> terms;
  for (int e = 0; e < g.num_edges(); ++e) terms.push_back({g.edge(e).dst, g.edge(e).src, e, 1.0});
  p.processed.graph = g;
  p.processed.prop = PropagationMatrix(Provenance::kLapNorm, g.num_edges(), Vector::Ones(n),
                                       Matrix(n, 0), Matrix(n, 0), terms);
  p.model = GcnModel::Initialize(2, 2, {.layers = 1, .hidden = 4}, 0);
  p.model.mutable_layers()[0].weight << 0, 0, 0, 5;
  p.model.mutable_layers()[0].bias << 0, -1;
  for (auto [c, leaf] : hot) {
    p.centers.push_back(c);
    p.hot_edge[c] = g.FindEdge(leaf, c);
  }
  return p;
}

// Edges whose sole removal flips the prediction at v.
std::vector<int> RemovalOracle(const ExplainContext& ctx, int v) {
  std::vector<int> flips;
  const int yhat = ctx.Predicted(v);
  for (int e : ctx.CandidateEdges(v)) {
    std::vector<double> mask(ctx.prop().num_edges(), 1.0);
    mask[e] = 0.0;
    const Tensor probs = nn::GcnForwardWithMask(ctx.model(), ctx.prop(), ctx.input(), mask);
    Eigen::Index arg = 0;
    probs.row(v).maxCoeff(&arg);
    if (arg != yhat) flips.push_back(e);
  }
  return flips;
}

int TopEdge(const Explanation& e) { return TopKSubgraph(e, 1, Budget::kEdges).edges.at(0); }

TEST(Planted, RemovalOracleFindsExactlyTheHotEdge) {
  const Planted p = MakePlanted(5, 3);
  const ExplainContext ctx(p.model, p.processed);
  for (int c : p.centers) {
    EXPECT_EQ(ctx.Predicted(c), 1);
    EXPECT_EQ(RemovalOracle(ctx, c), std::vector<int>{p.hot_edge.at(c)});
  }
}

TEST(GnnExplainer, PlantedEdgeRanksFirstWithoutEntropyPenalty) {
  const Planted p = MakePlanted(5, 3);
  const ExplainContext ctx(p.model, p.processed);
  ExplainerConfig cfg = ExplainerConfig::Defaults(ExplainerKind::kGnn);
  cfg.entropy_penalty = 0.0;
  for (int c : p.centers) {
    const Explanation e = GnnExplainer(ctx, c, cfg);
    EXPECT_EQ(TopEdge(e), RemovalOracle(ctx, c).at(0)) << "center " << c;
    EXPECT_LE(*e.final_loss, *e.initial_loss);
  }
}

TEST(GnnExplainer, PlantedEdgeRisesUnderDefaults) {
  // Cold edges do not touch the prediction here, so under the entropy
  // penalty a cold logit that starts positive climbs as fast as the planted
  // one and the top-1 slot follows the initialization.
  const Planted p = MakePlanted(5, 3);
  const ExplainContext ctx(p.model, p.processed);
  const ExplainerConfig cfg = ExplainerConfig::Defaults(ExplainerKind::kGnn);
  int top1 = 0;
  for (int c : p.centers) {
    const Explanation e = GnnExplainer(ctx, c, cfg);
    const int hot = p.hot_edge.at(c);
    const size_t at = std::find(e.candidate_edges.begin(), e.candidate_edges.end(), hot) -
                      e.candidate_edges.begin();
    // About lr per Adam step from a logit near 0: sigmoid(0.8) is roughly 0.69.
    EXPECT_GT(e.edge_importance.at(at), 0.6) << "center " << c;
    top1 += TopEdge(e) == hot;
    EXPECT_LE(*e.final_loss, *e.initial_loss);
  }
  RecordProperty("planted_top1", top1);
}

TEST(GnnExplainer, HeavySizePenaltyEmptiesMask) {
  const Planted p = MakePlanted(3, 4);
  const ExplainContext ctx(p.model, p.processed);
  ExplainerConfig cfg = ExplainerConfig::Defaults(ExplainerKind::kGnn);
  cfg.size_penalty = 1e3;
  // Adam moves each logit by about lr per step, so give it room to travel.
  cfg.epochs = 500;
  for (int c : p.centers) {
    const Explanation e = GnnExplainer(ctx, c, cfg);
    double mean = 0.0;
    for (double s : e.edge_importance) mean += s / e.edge_importance.size();
    EXPECT_LT(mean, 0.05);
  }
}

TEST(GnnExplainer, ReciprocalEdgesStayEqualUnderSymmetry) {
  // Triangle v, a, b with a and b interchangeable. Swapping a and b maps
  // (a, b) to (b, a), so from a swap-invariant start the two logits follow
  // the same trajectory.
  const DiGraph tri =
      DiGraph::FromEdgeList(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}}, Matrix(), {0, 1, 1});
  for (Provenance prov : {Provenance::kSymm, Provenance::kLapNorm}) {
    const ProcessedGraph pg = Preprocess(tri, prov, 0.1);
    const GcnModel model = GcnModel::Initialize(1, 2, {.layers = 2, .hidden = 6}, 3);
    const ExplainContext ctx(model, pg);
    const std::vector<int> cand = ctx.CandidateEdges(0);
    ASSERT_EQ(cand.size(), 6u);
    std::vector<double> logits(cand.size(), 0.0);
    Tensor param(static_cast<Eigen::Index>(logits.size()), 1);
    param.setZero();
    nn::Adam adam(0.05);
    const ExplainerConfig cfg;
    for (int step = 0; step < 100; ++step) {
      for (size_t i = 0; i < logits.size(); ++i) logits[i] = param(i, 0);
      const MaskObjective obj = GnnExplainerObjective(ctx, 0, cand, logits, cfg);
      Tensor grad = obj.grad;
      adam.Step({&param}, {&grad});
    }
    const int ab = pg.graph.FindEdge(1, 2);
    const int ba = pg.graph.FindEdge(2, 1);
    auto at = [&](int edge) {
      return param(std::find(cand.begin(), cand.end(), edge) - cand.begin(), 0);
    };
    EXPECT_NEAR(at(ab), at(ba), 1e-6) << ProvenanceName(prov);
    EXPECT_NEAR(at(pg.graph.FindEdge(0, 1)), at(pg.graph.FindEdge(0, 2)), 1e-6);
  }
}

// Small trained model on a random digraph, shared by several tests.
class TrainedFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    Dataset d;
    const DiGraph g = RandomDigraph(24, 0.12, 11);
    Matrix x(24, 2);
    std::vector<int> labels(24);
    for (int v = 0; v < 24; ++v) {
      x(v, 0) = g.out_degree(v);
      x(v, 1) = g.in_degree(v);
      labels[v] = g.out_degree(v) > g.in_degree(v) ? 1 : 0;
    }
    processed_ = new ProcessedGraph(Preprocess(DiGraph::FromEdgeList(24, g.edges(), x, labels),
                                               Provenance::kLapNorm, 0.1));
    d.graph = processed_->graph;
    d.split = StratifiedSplit(labels, 0);
    d.num_classes = 2;
    nn::TrainConfig tc;
    tc.epochs = 200;
    model_ = new GcnModel(
        nn::Train(GcnModel::Initialize(2, 2, {.layers = 2, .hidden = 8}, 0), d, processed_->prop, tc)
            .model);
  }
  static void TearDownTestSuite() {
    delete model_;
    delete processed_;
  }
  static ProcessedGraph* processed_;
  static GcnModel* model_;
};
ProcessedGraph* TrainedFixture::processed_ = nullptr;
GcnModel* TrainedFixture::model_ = nullptr;

TEST_F(TrainedFixture, ExplanationsStayInsideComputationSubgraph) {
  const ExplainContext ctx(*model_, *processed_);
  const DiGraph& g = processed_->graph;
  for (int v = 0; v < g.num_nodes(); ++v) {
    // Oracle: two rounds of undirected expansion, then induced edges.
    std::set<int> hood{v};
    for (int round = 0; round < 2; ++round) {
      std::set<int> next = hood;
      for (const Edge& e : g.edges()) {
        if (hood.count(e.src)) next.insert(e.dst);
        if (hood.count(e.dst)) next.insert(e.src);
      }
      hood = next;
    }
    std::vector<int> expected;
    for (int e = 0; e < g.num_edges(); ++e) {
      if (hood.count(g.edge(e).src) && hood.count(g.edge(e).dst)) expected.push_back(e);
    }
    const Explanation expl = GnnExplainer(ctx, v, {.epochs = 5});
    EXPECT_EQ(expl.candidate_edges, expected) << "node " << v;
  }
}

TEST(Locality, EdgesOutsideCandidatesDoNotReachTargetUnderSymmetricPipeline) {
  const DiGraph g = RandomDigraph(30, 0.06, 5);
  const ProcessedGraph pg = Preprocess(g, Provenance::kSymm, 0.1);
  const GcnModel model = GcnModel::Initialize(1, 3, {}, 2);
  const ExplainContext ctx(model, pg);
  for (int v = 0; v < g.num_nodes(); ++v) {
    const std::vector<int> cand = ctx.CandidateEdges(v);
    std::vector<double> mask(pg.prop.num_edges(), 0.0);
    for (int e : cand) mask[e] = 1.0;
    const Tensor probs = nn::GcnForwardWithMask(model, pg.prop, ctx.input(), mask);
    EXPECT_LT((probs.row(v) - ctx.probs().row(v)).cwiseAbs().maxCoeff(), 1e-12) << "node " << v;
  }
}

TEST_F(TrainedFixture, OptimizationLowersLossOnNearlyAllNodes) {
  const ExplainContext ctx(*model_, *processed_);
  int improved = 0;
  int total = 0;
  for (int v = 0; v < processed_->graph.num_nodes(); ++v) {
    if (ctx.CandidateEdges(v).empty()) continue;
    const Explanation e = GnnExplainer(ctx, v, ExplainerConfig::Defaults(ExplainerKind::kGnn));
    improved += *e.final_loss <= *e.initial_loss;
    ++total;
  }
  ASSERT_GT(total, 0);
  EXPECT_GE(improved, 0.95 * total);
}

TEST_F(TrainedFixture, MaskObjectiveGradientMatchesCentralDifferences) {
  const ExplainContext ctx(*model_, *processed_);
  const double eps = 1e-6;
  Rng rng = MakeRng(1, "explain_test");
  for (int v = 0; v < processed_->graph.num_nodes(); v += 3) {
    const std::vector<int> cand = ctx.CandidateEdges(v);
    if (cand.empty()) continue;
    std::vector<double> logits(cand.size());
    for (double& l : logits) l = StandardNormal(rng);
    const ExplainerConfig cfg;
    const MaskObjective obj = GnnExplainerObjective(ctx, v, cand, logits, cfg);
    for (size_t i = 0; i < logits.size(); ++i) {
      std::vector<double> l = logits;
      l[i] += eps;
      const double up = GnnExplainerObjective(ctx, v, cand, l, cfg).loss;
      l[i] -= 2 * eps;
      const double down = GnnExplainerObjective(ctx, v, cand, l, cfg).loss;
      const double numeric = (up - down) / (2 * eps);
      EXPECT_LT(std::abs(obj.grad(i) - numeric) /
                    std::max({std::abs(obj.grad(i)), std::abs(numeric), 1e-6}),
                1e-4)
          << "node " << v << " edge " << cand[i];
    }
  }
}

TEST_F(TrainedFixture, PgObjectiveGradientMatchesCentralDifferences) {
  const ExplainContext ctx(*model_, *processed_);
  PgExplainerNet net = PgExplainerNet::Initialize(model_->hidden(), 6, 4);
  Rng rng = MakeRng(2, "explain_test");
  for (double& b : std::span<double>(net.b1.data(), net.b1.size())) b = 0.1 * StandardNormal(rng);
  const ExplainerConfig cfg = ExplainerConfig::Defaults(ExplainerKind::kPg);
  const double eps = 1e-6;
  int checked = 0;
  for (int v = 0; v < processed_->graph.num_nodes() && checked < 4; ++v) {
    const std::vector<int> cand = ctx.CandidateEdges(v);
    if (cand.empty()) continue;
    ++checked;
    std::vector<double> noise(cand.size());
    for (double& z : noise) z = StandardNormal(rng);
    const PgObjective obj = PgExplainerObjective(net, ctx, v, noise, 2.0, cfg);
    Tensor* params[] = {&net.w1, &net.b1, &net.w2, &net.b2};
    for (int p = 0; p < 4; ++p) {
      for (Eigen::Index i = 0; i < params[p]->size(); ++i) {
        double& w = params[p]->data()[i];
        const double saved = w;
        w = saved + eps;
        const double up = PgExplainerObjective(net, ctx, v, noise, 2.0, cfg).loss;
        w = saved - eps;
        const double down = PgExplainerObjective(net, ctx, v, noise, 2.0, cfg).loss;
        w = saved;
        const double numeric = (up - down) / (2 * eps);
        const double analytic = obj.grads[p].data()[i];
        EXPECT_LT(std::abs(analytic - numeric) /
                      std::max({std::abs(analytic), std::abs(numeric), 1e-6}),
                  1e-4)
            << "node " << v << " param " << p << " entry " << i;
      }
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(PgExplainer, HighTemperatureConcentratesAtHalf) {
  Rng rng = MakeRng(0, "concrete");
  std::vector<double> logits(10000);
  for (double& l : logits) l = 3.0 * StandardNormal(rng);
  const std::vector<double> m = SampleConcreteMask(logits, 1e3, rng);
  double worst = 0.0;
  for (double x : m) worst = std::max(worst, std::abs(x - 0.5));
  EXPECT_LT(worst, 0.02);
  // At unit temperature the same logits spread out.
  const std::vector<double> spread = SampleConcreteMask(logits, 1.0, rng);
  double far = 0.0;
  for (double x : spread) far = std::max(far, std::abs(x - 0.5));
  EXPECT_GT(far, 0.4);
}

TEST(PgExplainer, PlantedEdgeRanksFirstAfterTraining) {
  const Planted p = MakePlanted(6, 3);
  const ExplainContext ctx(p.model, p.processed);
  ExplainerConfig cfg = ExplainerConfig::Defaults(ExplainerKind::kPg);
  cfg.epochs = 100;
  const std::vector<int> train_on(p.centers.begin(), p.centers.begin() + 4);
  const PgExplainerNet net = PgExplainerTrain(ctx, train_on, cfg);
  // The last two centers were never seen: one forward pass each.
  for (int c : p.centers) {
    const Explanation e = PgExplainerExplain(net, ctx, c);
    EXPECT_EQ(TopEdge(e), RemovalOracle(ctx, c).at(0)) << "center " << c;
  }
}

TEST_F(TrainedFixture, PgTrainingAndInferenceAreDeterministic) {
  const ExplainContext ctx(*model_, *processed_);
  ExplainerConfig cfg = ExplainerConfig::Defaults(ExplainerKind::kPg);
  cfg.epochs = 5;
  const std::vector<int> targets{0, 3, 7, 11};
  const PgExplainerNet a = PgExplainerTrain(ctx, targets, cfg);
  const PgExplainerNet b = PgExplainerTrain(ctx, targets, cfg);
  EXPECT_EQ(a.w1, b.w1);
  EXPECT_EQ(a.w2, b.w2);
  EXPECT_EQ(a.b1, b.b1);
  EXPECT_EQ(a.b2, b.b2);
  for (int v = 0; v < processed_->graph.num_nodes(); ++v) {
    const Explanation e1 = PgExplainerExplain(a, ctx, v);
    const Explanation e2 = PgExplainerExplain(a, ctx, v);
    EXPECT_EQ(e1.edge_importance, e2.edge_importance);
    for (double s : e1.edge_importance) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
    }
  }
  PgExplainerNet stale = a;
  stale.config_hash = "aaaaaaaaaaaaaaaa";
  GcnModel stamped = *model_;
  stamped.set_config_hash("bbbbbbbbbbbbbbbb");
  const ExplainContext other(stamped, *processed_);
  try {
    PgExplainerExplain(stale, other, 0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHashMismatch);
  }
  EXPECT_THROW(PgExplainerTrain(ctx, std::vector<int>{}, cfg), Error);
}

Explanation Manual(std::vector<Edge> endpoints, std::vector<double> scores) {
  Explanation e;
  e.target = 0;
  for (size_t i = 0; i < endpoints.size(); ++i) e.candidate_edges.push_back(static_cast<int>(i));
  e.candidate_endpoints = std::move(endpoints);
  e.edge_importance = std::move(scores);
  return e;
}

TEST(TopK, UnconstrainedTakesEverything) {
  const Explanation e = Manual({{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {0.1, 0.9, 0.5, 0.7});
  const Subgraph s = TopKSubgraph(e, 10);
  EXPECT_EQ(s.edges, (EdgeSet{1, 3, 2, 0}));
  EXPECT_EQ(s.nodes, (NodeSet{0, 1, 2, 3}));
}

TEST(TopK, TwoNodesKeepBestEdgeAndItsReverse) {
  const Explanation e = Manual({{0, 1}, {1, 0}, {1, 2}, {2, 1}}, {0.2, 0.6, 0.9, 0.1});
  const Subgraph s = TopKSubgraph(e, 2);
  EXPECT_EQ(s.edges, (EdgeSet{2, 3}));
  EXPECT_EQ(s.nodes, (NodeSet{1, 2}));
}

TEST(TopK, SkipsEdgesThatWouldExceedBudgetAndContinues) {
  // Third-best edge brings two new nodes; the fourth fits.
  const Explanation e = Manual({{0, 1}, {2, 3}, {1, 0}, {1, 4}}, {0.9, 0.8, 0.7, 0.6});
  const Subgraph s = TopKSubgraph(e, 3);
  EXPECT_EQ(s.edges, (EdgeSet{0, 2, 3}));
  EXPECT_EQ(s.nodes, (NodeSet{0, 1, 4}));
}

TEST(TopK, TiesBreakByEdgeIndexAndEdgeBudget) {
  const Explanation e = Manual({{0, 1}, {0, 2}, {0, 3}, {0, 4}}, {0.5, 0.5, 0.5, 0.5});
  EXPECT_EQ(TopKSubgraph(e, 3).edges, (EdgeSet{0, 1}));
  EXPECT_EQ(TopKSubgraph(e, 3, Budget::kEdges).edges, (EdgeSet{0, 1, 2}));
  EXPECT_EQ(TopKSubgraph(e, 3).edges, TopKSubgraph(e, 3).edges);
  EXPECT_THROW(TopKSubgraph(e, 0), Error);
}

TEST(BruteForce, PlantedEdgeInBestSubset) {
  const Planted p = MakePlanted(1, 5);
  const ExplainContext ctx(p.model, p.processed);
  const BruteForceResult r = BruteForceBestSubgraph(ctx, 0, 4);
  EXPECT_TRUE(std::count(r.edges.begin(), r.edges.end(), p.hot_edge.at(0)));
  // Subsets of at most 3 of the 5 leaves: 1 + 5 + 10 + 10.
  EXPECT_EQ(r.subsets_evaluated, 26);
  EXPECT_NEAR(r.mi, SubgraphMutualInformation(ctx, 0, r.edges), 1e-12);
}

TEST(BruteForce, EmptyCandidateSetScoresBasePrediction) {
  const Planted p = MakePlanted(1, 2);
  const ExplainContext ctx(p.model, p.processed);
  const BruteForceResult r = BruteForceBestSubgraph(ctx, 0, 3, std::span<const int>());
  EXPECT_EQ(r.subsets_evaluated, 1);
  EXPECT_TRUE(r.edges.empty());
  EXPECT_NEAR(r.mi, SubgraphMutualInformation(ctx, 0, {}), 1e-15);
}

TEST(BruteForce, RejectsLargeCandidateSets) {
  const Planted p = MakePlanted(1, 21);
  const ExplainContext ctx(p.model, p.processed);
  try {
    BruteForceBestSubgraph(ctx, 0, 4);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(Serialization, JsonRoundTrip) {
  Explanation e = Manual({{3, 1}, {1, 3}}, {0.25, 1.0});
  e.candidate_edges = {4, 9};
  e.feature_importance = {0.5};
  e.explainer = "gnnexplainer";
  e.config_hash = "0123456789abcdef";
  e.seed = 7;
  e.initial_loss = 1.5;
  e.final_loss = 0.5;
  const Explanation back = ExplanationFromJson(nlohmann::json::parse(ExplanationToJson(e).dump()));
  EXPECT_EQ(back.target, e.target);
  EXPECT_EQ(back.candidate_edges, e.candidate_edges);
  EXPECT_EQ(back.candidate_endpoints, e.candidate_endpoints);
  EXPECT_EQ(back.edge_importance, e.edge_importance);
  EXPECT_EQ(back.feature_importance, e.feature_importance);
  EXPECT_EQ(back.config_hash, e.config_hash);
  EXPECT_EQ(back.seed, 7u);
  EXPECT_EQ(back.final_loss, e.final_loss);
  try {
    ExplanationFromJson(nlohmann::json::parse(R"({"edges": []})"));
    ADD_FAILURE();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kParse);
  }
  EXPECT_THROW(ExplanationFromJson(nlohmann::json::parse(
                   R"({"v": 0, "edges": [{"src": 0, "dst": 1, "score": 1.5}]})")),
               Error);
}

TEST(Dot, ParsesAndMatchesExplanation) {
  const Explanation e = Manual({{0, 1}, {2, 0}, {1, 2}}, {0.0, 0.5, 1.0});
  const std::string dot = ExplanationToDot(e, {{2, 0}});
  test::DotReader::Parsed parsed;
  ASSERT_TRUE(test::DotReader(dot).Parse(parsed)) << dot;
  ASSERT_EQ(parsed.edges.size(), 3u);
  EXPECT_EQ(parsed.edges[1], (std::pair<std::string, std::string>{"n2", "n0"}));
  EXPECT_EQ(parsed.nodes, (std::set<std::string>{"n0", "n1", "n2"}));
  // Width grows with importance; only the ground-truth edge is outlined.
  EXPECT_LT(std::stod(parsed.edge_attrs[0].at("penwidth")),
            std::stod(parsed.edge_attrs[2].at("penwidth")));
  EXPECT_NE(parsed.edge_attrs[1].at("color").find("black"), std::string::npos);
  EXPECT_EQ(parsed.edge_attrs[0].at("color").find("black"), std::string::npos);
}

TEST(Dot, ReaderRejectsBrokenInput) {
  test::DotReader::Parsed parsed;
  EXPECT_FALSE(test::DotReader("digraph { a -> }").Parse(parsed));
  EXPECT_FALSE(test::DotReader("graph g { a }").Parse(parsed));
  EXPECT_FALSE(test::DotReader("digraph { a [x=] }").Parse(parsed));
}

}  // namespace
}  // namespace dgx
