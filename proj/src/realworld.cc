#include "dgx/realworld.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "dgx/error.h"
#include "dgx/rng.h"

namespace dgx {
namespace {

std::string ToHex(const unsigned char* bytes, unsigned int size) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * size);
  for (unsigned int i = 0; i < size; ++i) {
    out.push_back(kDigits[bytes[i] >> 4]);
    out.push_back(kDigits[bytes[i] & 0xf]);
  }
  return out;
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::string Sha256Hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  Require(EVP_Digest(bytes.data(), bytes.size(), digest, &size, EVP_sha256(), nullptr) == 1,
          ErrorCode::kIo, "SHA-256 computation failed");
  return ToHex(digest, size);
}

std::string Sha256File(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorCode::kMissingArtifact,
          "cannot open '" + path.string() + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  Require(ctx != nullptr, ErrorCode::kIo, "cannot allocate digest context");
  bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1;
  char buffer[1 << 16];
  while (ok && in) {
    in.read(buffer, sizeof(buffer));
    if (in.gcount() > 0) ok = EVP_DigestUpdate(ctx, buffer, static_cast<size_t>(in.gcount())) == 1;
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  ok = ok && EVP_DigestFinal_ex(ctx, digest, &size) == 1;
  EVP_MD_CTX_free(ctx);
  Require(ok, ErrorCode::kIo, "SHA-256 computation failed for '" + path.string() + "'");
  return ToHex(digest, size);
}

RealDatasetManifest RealDatasetManifest::FromJson(const nlohmann::json& j,
                                                  const std::filesystem::path& base_dir) {
  RealDatasetManifest m;
  try {
    m.name = j.at("name").get<std::string>();
    for (const auto& [key, value] : j.at("paths").items()) {
      std::filesystem::path p = value.get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      m.paths[key] = p;
    }
    m.num_nodes = j.at("n").get<int>();
    m.num_edges = j.at("edges").get<int>();
    m.num_classes = j.at("classes").get<int>();
    for (const auto& [key, value] : j.at("sha256").items()) {
      m.sha256[key] = Lower(value.get<std::string>());
    }
    m.split_seed = j.value("split_seed", uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed manifest: ") + e.what());
  }
  Require(m.paths.count("edges") && m.paths.count("labels"), ErrorCode::kParse,
          "manifest needs 'edges' and 'labels' paths");
  for (const auto& [key, path] : m.paths) {
    Require(m.sha256.count(key) > 0, ErrorCode::kParse, "manifest has no checksum for '" + key + "'");
  }
  return m;
}

RealDatasetManifest RealDatasetManifest::Load(const std::filesystem::path& manifest_path) {
  return FromJson(ReadJsonFile(manifest_path), manifest_path.parent_path());
}

nlohmann::json RealDatasetManifest::ToJson() const {
  nlohmann::json j;
  j["name"] = name;
  j["paths"] = nlohmann::json::object();
  for (const auto& [key, path] : paths) j["paths"][key] = path.string();
  j["n"] = num_nodes;
  j["edges"] = num_edges;
  j["classes"] = num_classes;
  j["sha256"] = sha256;
  j["split_seed"] = split_seed;
  return j;
}

Dataset LoadReal(const RealDatasetManifest& manifest) {
  for (const auto& [key, path] : manifest.paths) {
    Require(std::filesystem::exists(path), ErrorCode::kMissingArtifact,
            manifest.name + ": missing " + key + " file '" + path.string() + "'");
  }
  for (const auto& [key, path] : manifest.paths) {
    const std::string actual = Sha256File(path);
    Require(actual == manifest.sha256.at(key), ErrorCode::kChecksumMismatch,
            manifest.name + ": checksum mismatch for " + key + " (expected " +
                manifest.sha256.at(key) + ", got " + actual + ")");
  }
  GraphFiles files;
  files.edges = manifest.paths.at("edges");
  files.labels = manifest.paths.at("labels");
  if (manifest.paths.count("features")) files.features = manifest.paths.at("features");
  DiGraph graph = ReadGraphCsv(files);

  auto count_check = [&](const char* what, int expected, int actual) {
    Require(expected == actual, ErrorCode::kCountMismatch,
            manifest.name + ": " + what + " count " + std::to_string(actual) +
                " does not match manifest " + std::to_string(expected));
  };
  count_check("node", manifest.num_nodes, graph.num_nodes());
  count_check("edge", manifest.num_edges, graph.num_edges());
  const int classes = CountClasses(graph.labels());
  count_check("class", manifest.num_classes, classes);

  Dataset d;
  d.split = StratifiedSplit(graph.labels(), manifest.split_seed);
  d.graph = std::move(graph);
  d.num_classes = classes;
  d.name = manifest.name;
  d.description = "fixture " + manifest.name;
  d.seed = manifest.split_seed;
  return d;
}

DirectionReport CheckDirection(const DiGraph& g) {
  DirectionReport r;
  r.edges = g.num_edges();
  for (const Edge& e : g.edges()) {
    if (g.FindEdge(e.dst, e.src) < 0) ++r.non_reciprocated;
  }
  r.fraction = r.edges > 0 ? static_cast<double>(r.non_reciprocated) / r.edges : 0.0;
  r.preserved = r.fraction > kDirectionThreshold;
  return r;
}

std::vector<int> SampleTestNodes(const Dataset& dataset, int count, bool all, uint64_t seed) {
  std::vector<int> nodes = dataset.split.Nodes(SplitRole::kTest);
  if (!all && count < static_cast<int>(nodes.size())) {
    Require(count >= 1, ErrorCode::kInvalidArgument, "sample size must be at least 1");
    Rng rng = MakeRng(seed, "table2/sample");
    for (int i = 0; i < count; ++i) {
      std::swap(nodes[i], nodes[i + UniformIndex(rng, nodes.size() - i)]);
    }
    nodes.resize(count);
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

bool PassesAccuracyGate(double best_val_accuracy, int num_classes) {
  return num_classes > 0 && best_val_accuracy >= 1.0 / num_classes + 0.2;
}

const Table2Cell& Table2Report::cell(ExplainerKind explainer, Provenance pipeline) const {
  for (const Table2Cell& c : cells) {
    if (c.explainer == explainer && c.pipeline == pipeline) return c;
  }
  throw Error(ErrorCode::kInvalidArgument, "no such Table 2 cell");
}

nlohmann::json Table2Report::ToJson() const {
  nlohmann::json j;
  j["dataset"] = dataset;
  j["direction"] = {{"edges", direction.edges},
                    {"non_reciprocated", direction.non_reciprocated},
                    {"fraction", direction.fraction},
                    {"preserved", direction.preserved}};
  j["nodes"] = nodes;
  j["val_accuracy"] = val_accuracy;
  j["model_valid"] = model_valid;
  j["flags"] = flags;
  j["cells"] = nlohmann::json::array();
  for (const Table2Cell& c : cells) {
    j["cells"].push_back({{"explainer", ExplainerKindName(c.explainer)},
                          {"pipeline", ProvenanceName(c.pipeline)},
                          {"fid_plus", c.report.fid_plus.mean},
                          {"fid_minus", c.report.fid_minus.mean},
                          {"char", c.report.characterization.mean},
                          {"count", c.report.characterization.count}});
  }
  return j;
}

std::string Table2Report::ToCsv() const {
  std::string out = "dataset,explainer,pipeline,fid_plus,fid_minus,char,count\n";
  char line[256];
  for (const Table2Cell& c : cells) {
    std::snprintf(line, sizeof(line), "%s,%s,%s,%.17g,%.17g,%.17g,%d\n", dataset.c_str(),
                  ExplainerKindName(c.explainer), ProvenanceName(c.pipeline),
                  c.report.fid_plus.mean, c.report.fid_minus.mean,
                  c.report.characterization.mean, c.report.characterization.count);
    out += line;
  }
  return out;
}

Table2Report RunTable2(const Dataset& dataset, const Table2Config& config) {
  Table2Report report;
  report.dataset = dataset.name;
  report.direction = CheckDirection(dataset.graph);
  if (!report.direction.preserved) report.flags.push_back("symmetric_input");
  report.nodes =
      SampleTestNodes(dataset, config.sample_nodes, config.all_test_nodes, config.seed);

  for (Provenance pipeline : {Provenance::kSymm, Provenance::kLapNorm}) {
    const ProcessedGraph processed = Preprocess(dataset.graph, pipeline, config.alpha);
    Dataset trained_on = dataset;
    trained_on.graph = processed.graph;
    const nn::GcnModel init = nn::GcnModel::Initialize(
        nn::ModelInput(dataset.graph).cols(), dataset.num_classes, config.model, config.seed);
    nn::TrainConfig train = config.train;
    train.seed = config.seed;
    const nn::TrainResult trained = nn::Train(init, trained_on, processed.prop, train);
    const std::string name = ProvenanceName(pipeline);
    report.val_accuracy[name] = trained.best_val_accuracy;
    report.model_valid[name] = PassesAccuracyGate(trained.best_val_accuracy, dataset.num_classes);
    if (!report.model_valid[name]) report.flags.push_back("invalid_model_" + name);

    const ExplainContext ctx(trained.model, processed);
    for (ExplainerKind kind : {ExplainerKind::kGnn, ExplainerKind::kPg}) {
      ExplainerConfig ecfg = kind == ExplainerKind::kGnn ? config.gnn : config.pg;
      ecfg.seed = config.seed;
      std::vector<Explanation> explanations;
      if (kind == ExplainerKind::kGnn) {
        for (int v : report.nodes) explanations.push_back(GnnExplainer(ctx, v, ecfg));
      } else {
        const PgExplainerNet net = PgExplainerTrain(ctx, report.nodes, ecfg);
        for (int v : report.nodes) explanations.push_back(PgExplainerExplain(net, ctx, v));
      }
      EvalOptions eval = config.eval;
      eval.reciprocal_credit = false;
      Table2Cell cell;
      cell.explainer = kind;
      cell.pipeline = pipeline;
      cell.report = EvaluateExplanations(ctx, explanations, eval);
      cell.report.dataset = dataset.name;
      cell.report.seed = config.seed;
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace dgx
