#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "dgx/datagen.h"
#include "dgx/error.h"
#include "dgx/graph_io.h"
#include "dgx/realworld.h"
#include "dgx/rng.h"
#include "test_util.h"

namespace dgx {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(Sha256Hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Sha256Hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"),
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  const test::TempDir dir("sha");
  // Larger than one read buffer.
  std::string big(200000, 'a');
  WriteTextFile(dir.path() / "big.txt", big);
  EXPECT_EQ(Sha256File(dir.path() / "big.txt"), Sha256Hex(big));
  EXPECT_EQ(CodeOf([&] { Sha256File(dir.path() / "none"); }), ErrorCode::kMissingArtifact);
}

// Writes a 3-class directed fixture and its manifest; returns the manifest path.
std::filesystem::path WriteFixture(const std::filesystem::path& dir, bool symmetric = false) {
  const int n = 90;
  DiGraph g = RandomDigraph(n, 0.04, 21);
  if (symmetric) {
    std::set<Edge> all(g.edges().begin(), g.edges().end());
    for (const Edge& e : g.edges()) all.insert({e.dst, e.src});
    g = DiGraph::FromEdgeList(n, std::vector<Edge>(all.begin(), all.end()));
  }
  Matrix x(n, 3);
  std::vector<int> labels(n);
  for (int v = 0; v < n; ++v) {
    labels[v] = v % 3;
    for (int c = 0; c < 3; ++c) x(v, c) = c == labels[v] ? 1.0 : 0.0;
  }
  WriteGraphCsv(DiGraph::FromEdgeList(n, g.edges(), x, labels), dir);
  nlohmann::json m = {{"name", "fixture"},
                      {"paths", {{"edges", "edges.csv"}, {"labels", "labels.csv"},
                                 {"features", "features.csv"}}},
                      {"n", n},
                      {"edges", g.num_edges()},
                      {"classes", 3},
                      {"split_seed", 4}};
  for (const char* key : {"edges", "labels", "features"}) {
    m["sha256"][key] = Sha256File(dir / (std::string(key) + ".csv"));
  }
  WriteTextFile(dir / "manifest.json", m.dump(2));
  return dir / "manifest.json";
}

TEST(LoadReal, LoadsDirectedGraphDeterministically) {
  const test::TempDir dir("real_ok");
  const auto path = WriteFixture(dir.path());
  const RealDatasetManifest m = RealDatasetManifest::Load(path);
  const Dataset a = LoadReal(m);
  const Dataset b = LoadReal(m);
  EXPECT_EQ(a.graph.num_nodes(), 90);
  EXPECT_EQ(a.num_classes, 3);
  EXPECT_FALSE(a.graph.ground_truth().has_value());
  EXPECT_EQ(a.graph.features().cols(), 3);
  EXPECT_EQ(a.graph.edges(), b.graph.edges());
  EXPECT_EQ(a.graph.features(), b.graph.features());
  EXPECT_EQ(a.split.Nodes(SplitRole::kTest), b.split.Nodes(SplitRole::kTest));
  EXPECT_EQ(a.split.Nodes(SplitRole::kTest), StratifiedSplit(a.graph.labels(), 4).Nodes(SplitRole::kTest));
  EXPECT_TRUE(CheckDirection(a.graph).preserved);
  // Round trip through JSON keeps every field.
  const RealDatasetManifest again = RealDatasetManifest::FromJson(m.ToJson());
  EXPECT_EQ(again.sha256, m.sha256);
  EXPECT_EQ(again.paths, m.paths);
  EXPECT_EQ(again.num_edges, m.num_edges);
}

TEST(LoadReal, ErrorsAreDistinct) {
  const test::TempDir dir("real_bad");
  const auto path = WriteFixture(dir.path());
  const nlohmann::json good = ReadJsonFile(path);
  auto load = [&](const nlohmann::json& j) {
    return [&, j] { LoadReal(RealDatasetManifest::FromJson(j, dir.path())); };
  };

  nlohmann::json counts = good;
  counts["n"] = 91;
  EXPECT_EQ(CodeOf(load(counts)), ErrorCode::kCountMismatch);
  counts = good;
  counts["edges"] = good["edges"].get<int>() + 1;
  EXPECT_EQ(CodeOf(load(counts)), ErrorCode::kCountMismatch);
  counts = good;
  counts["classes"] = 7;
  EXPECT_EQ(CodeOf(load(counts)), ErrorCode::kCountMismatch);

  nlohmann::json sums = good;
  sums["sha256"]["labels"] = std::string(64, '0');
  EXPECT_EQ(CodeOf(load(sums)), ErrorCode::kChecksumMismatch);

  nlohmann::json missing = good;
  missing["paths"]["edges"] = "absent.csv";
  EXPECT_EQ(CodeOf(load(missing)), ErrorCode::kMissingArtifact);

  nlohmann::json unsummed = good;
  unsummed["sha256"].erase("features");
  EXPECT_EQ(CodeOf(load(unsummed)), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([&] { RealDatasetManifest::Load(dir.path() / "nope.json"); }),
            ErrorCode::kMissingArtifact);

  // Uppercase checksums are accepted.
  nlohmann::json upper = good;
  std::string s = upper["sha256"]["edges"];
  std::transform(s.begin(), s.end(), s.begin(), ::toupper);
  upper["sha256"]["edges"] = s;
  EXPECT_NO_THROW(load(upper)());
}

TEST(CheckDirection, Fractions) {
  const DirectionReport one = CheckDirection(DiGraph::FromEdgeList(2, {{0, 1}}));
  EXPECT_EQ(one.non_reciprocated, 1);
  EXPECT_DOUBLE_EQ(one.fraction, 1.0);
  EXPECT_TRUE(one.preserved);
  const DirectionReport sym = CheckDirection(DiGraph::FromEdgeList(2, {{0, 1}, {1, 0}}));
  EXPECT_EQ(sym.fraction, 0.0);
  EXPECT_FALSE(sym.preserved);
  // 1 of 21 edges unreciprocated: 0.0476 is at or under the threshold.
  std::vector<Edge> edges;
  for (int i = 0; i < 10; ++i) {
    edges.push_back({i, i + 1});
    edges.push_back({i + 1, i});
  }
  edges.push_back({0, 5});
  EXPECT_FALSE(CheckDirection(DiGraph::FromEdgeList(11, edges)).preserved);
  EXPECT_EQ(CheckDirection(DiGraph::FromEdgeList(3, {})).fraction, 0.0);
}

TEST(SampleTestNodes, SeededSortedSubset) {
  const test::TempDir dir("real_sample");
  const Dataset d = LoadReal(RealDatasetManifest::Load(WriteFixture(dir.path())));
  const std::vector<int> test_nodes = d.split.Nodes(SplitRole::kTest);
  const std::vector<int> a = SampleTestNodes(d, 4, false, 9);
  EXPECT_EQ(a, SampleTestNodes(d, 4, false, 9));
  EXPECT_EQ(a.size(), 4u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_TRUE(std::includes(test_nodes.begin(), test_nodes.end(), a.begin(), a.end()));
  EXPECT_EQ(SampleTestNodes(d, 4, true, 9), test_nodes);
  EXPECT_EQ(SampleTestNodes(d, 1000, false, 9), test_nodes);
  EXPECT_THROW(SampleTestNodes(d, 0, false, 9), Error);
}

TEST(AccuracyGate, ChancePlusPointTwo) {
  EXPECT_TRUE(PassesAccuracyGate(0.35, 7));
  EXPECT_FALSE(PassesAccuracyGate(0.34, 7));
  EXPECT_TRUE(PassesAccuracyGate(0.7, 2));
  EXPECT_FALSE(PassesAccuracyGate(0.69, 2));
  EXPECT_FALSE(PassesAccuracyGate(1.0, 0));
}

Table2Config QuickConfig() {
  Table2Config cfg;
  cfg.sample_nodes = 5;
  cfg.train.epochs = 60;
  cfg.gnn.epochs = 10;
  cfg.pg.epochs = 3;
  cfg.pg.hidden = 8;
  cfg.eval.k = 4;
  return cfg;
}

TEST(Table2, GridShapeAndDeterminism) {
  const test::TempDir dir("real_t2");
  const Dataset d = LoadReal(RealDatasetManifest::Load(WriteFixture(dir.path())));
  const Table2Report r = RunTable2(d, QuickConfig());
  ASSERT_EQ(r.cells.size(), 4u);
  int aggregates = 0;
  for (const Table2Cell& c : r.cells) {
    EXPECT_EQ(c.report.nodes.size(), 5u);
    EXPECT_FALSE(c.report.auc.has_value());
    aggregates += 3;  // Fid+, Fid-, Char
  }
  EXPECT_EQ(aggregates, 12);
  std::set<std::pair<ExplainerKind, Provenance>> grid;
  for (const Table2Cell& c : r.cells) grid.insert({c.explainer, c.pipeline});
  EXPECT_EQ(grid.size(), 4u);
  EXPECT_NO_THROW(r.cell(ExplainerKind::kPg, Provenance::kLapNorm));
  EXPECT_EQ(r.nodes, SampleTestNodes(d, 5, false, 0));
  EXPECT_EQ(r.val_accuracy.size(), 2u);
  const std::string csv = r.ToCsv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(RunTable2(d, QuickConfig()).ToJson(), r.ToJson());
  EXPECT_EQ(std::count(r.flags.begin(), r.flags.end(), "symmetric_input"), 0);
}

TEST(Table2, SymmetricInputIsFlagged) {
  const test::TempDir dir("real_t2_sym");
  const Dataset d = LoadReal(RealDatasetManifest::Load(WriteFixture(dir.path(), true)));
  Table2Config cfg = QuickConfig();
  cfg.sample_nodes = 2;
  const Table2Report r = RunTable2(d, cfg);
  EXPECT_FALSE(r.direction.preserved);
  EXPECT_EQ(std::count(r.flags.begin(), r.flags.end(), "symmetric_input"), 1);
}

}  // namespace
}  // namespace dgx
