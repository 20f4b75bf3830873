#include "dgx/graph_io.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dgx/error.h"

namespace dgx {
namespace {

namespace fs = std::filesystem;

std::string Trim(const std::string& s) {
  size_t begin = 0;
  size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::vector<std::string> SplitCommas(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(Trim(field));
  return fields;
}

std::ifstream OpenForRead(const fs::path& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kMissingArtifact, "cannot open " + path.string());
  return in;
}

long ParseInt(const std::string& text, const fs::path& path, int line) {
  try {
    size_t used = 0;
    const long value = std::stol(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kParse,
              path.string() + ":" + std::to_string(line) + ": expected integer, got '" + text + "'");
}

double ParseDouble(const std::string& text, const fs::path& path, int line) {
  try {
    size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kParse,
              path.string() + ":" + std::to_string(line) + ": expected number, got '" + text + "'");
}

// Reads "a,b" integer pairs after the expected header.
std::vector<std::pair<long, long>> ReadPairs(const fs::path& path, const std::string& header) {
  std::ifstream in = OpenForRead(path);
  std::string line;
  Require(static_cast<bool>(std::getline(in, line)) && Trim(line) == header, ErrorCode::kParse,
          path.string() + ": expected header '" + header + "'");
  std::vector<std::pair<long, long>> pairs;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCommas(line);
    Require(fields.size() == 2, ErrorCode::kParse,
            path.string() + ":" + std::to_string(line_no) + ": expected two fields");
    pairs.emplace_back(ParseInt(fields[0], path, line_no), ParseInt(fields[1], path, line_no));
  }
  return pairs;
}

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

GraphFiles GraphFiles::InDirectory(const fs::path& dir) {
  GraphFiles files;
  files.edges = dir / "edges.csv";
  files.labels = dir / "labels.csv";
  if (fs::exists(dir / "features.csv")) files.features = dir / "features.csv";
  if (fs::exists(dir / "ground_truth.csv")) files.ground_truth = dir / "ground_truth.csv";
  return files;
}

std::vector<Edge> ReadEdgePairs(const fs::path& path) {
  std::vector<Edge> out;
  for (const auto& [s, d] : ReadPairs(path, "src,dst")) {
    out.push_back({static_cast<int>(s), static_cast<int>(d)});
  }
  return out;
}

DiGraph ReadGraphCsv(const GraphFiles& files, std::optional<int> num_nodes) {
  const auto edge_pairs = ReadPairs(files.edges, "src,dst");
  const auto label_pairs = ReadPairs(files.labels, "node,label");

  long n = num_nodes.value_or(0);
  if (!num_nodes) {
    n = static_cast<long>(label_pairs.size());
    for (const auto& [s, d] : edge_pairs) n = std::max({n, s + 1, d + 1});
  }
  std::vector<Edge> edges;
  edges.reserve(edge_pairs.size());
  for (const auto& [s, d] : edge_pairs) {
    Require(s >= 0 && d >= 0 && s < n && d < n, ErrorCode::kOutOfRange,
            files.edges.string() + ": edge id out of range");
    edges.push_back({static_cast<int>(s), static_cast<int>(d)});
  }
  std::vector<int> labels(n, -1);
  for (const auto& [v, y] : label_pairs) {
    Require(v >= 0 && v < n, ErrorCode::kOutOfRange,
            files.labels.string() + ": node id " + std::to_string(v) + " out of range");
    labels[v] = static_cast<int>(y);
  }
  for (long v = 0; v < n; ++v) {
    Require(labels[v] >= 0, ErrorCode::kParse,
            files.labels.string() + ": node " + std::to_string(v) + " has no label");
  }

  Matrix features;
  if (files.features) {
    std::ifstream in = OpenForRead(*files.features);
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (Trim(line).empty()) continue;
      std::vector<double> row;
      for (const auto& f : SplitCommas(line)) row.push_back(ParseDouble(f, *files.features, line_no));
      Require(rows.empty() || row.size() == rows.front().size(), ErrorCode::kParse,
              files.features->string() + ":" + std::to_string(line_no) + ": ragged row");
      rows.push_back(std::move(row));
    }
    if (!rows.empty()) {
      features.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
      for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < rows[i].size(); ++j) features(i, j) = rows[i][j];
      }
    }
  }

  std::optional<std::vector<Edge>> ground_truth;
  if (files.ground_truth) {
    ground_truth.emplace();
    for (const auto& [s, d] : ReadPairs(*files.ground_truth, "src,dst")) {
      ground_truth->push_back({static_cast<int>(s), static_cast<int>(d)});
    }
  }
  return DiGraph::FromEdgeList(static_cast<int>(n), std::move(edges), std::move(features),
                               std::move(labels), std::move(ground_truth));
}

void WriteGraphCsv(const DiGraph& g, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream edges;
  edges << "src,dst\n";
  for (const Edge& e : g.edges()) edges << e.src << ',' << e.dst << '\n';
  WriteTextFile(dir / "edges.csv", edges.str());

  std::ostringstream labels;
  labels << "node,label\n";
  for (int v = 0; v < g.num_nodes(); ++v) labels << v << ',' << g.labels()[v] << '\n';
  WriteTextFile(dir / "labels.csv", labels.str());

  if (g.num_features() > 0) {
    std::ostringstream features;
    for (int v = 0; v < g.num_nodes(); ++v) {
      for (int j = 0; j < g.num_features(); ++j) {
        if (j) features << ',';
        features << FormatDouble(g.features()(v, j));
      }
      features << '\n';
    }
    WriteTextFile(dir / "features.csv", features.str());
  } else {
    fs::remove(dir / "features.csv");
  }

  if (g.ground_truth()) {
    std::ostringstream gt;
    gt << "src,dst\n";
    for (int e : *g.ground_truth()) gt << g.edge(e).src << ',' << g.edge(e).dst << '\n';
    WriteTextFile(dir / "ground_truth.csv", gt.str());
  } else {
    fs::remove(dir / "ground_truth.csv");
  }
}

void SaveDataset(const Dataset& dataset, const fs::path& dir, const nlohmann::json& extra_meta) {
  WriteGraphCsv(dataset.graph, dir);
  nlohmann::json meta = extra_meta;
  meta["name"] = dataset.name;
  meta["description"] = dataset.description;
  meta["num_nodes"] = dataset.graph.num_nodes();
  meta["num_edges"] = dataset.graph.num_edges();
  meta["num_classes"] = dataset.num_classes;
  meta["motif_size"] = dataset.motif_size;
  meta["seed"] = dataset.seed;
  std::vector<int> counts(dataset.num_classes, 0);
  for (int y : dataset.graph.labels()) ++counts[y];
  meta["class_counts"] = counts;
  WriteTextFile(dir / "meta.json", meta.dump(2) + "\n");
}

Dataset LoadDataset(const fs::path& dir) {
  Require(fs::exists(dir / "meta.json"), ErrorCode::kMissingArtifact,
          "no dataset at " + dir.string() + " (meta.json missing)");
  const nlohmann::json meta = ReadJsonFile(dir / "meta.json");
  Dataset dataset;
  dataset.graph = ReadGraphCsv(GraphFiles::InDirectory(dir), meta.at("num_nodes").get<int>());
  dataset.name = meta.value("name", "");
  dataset.description = meta.value("description", "");
  dataset.num_classes = meta.at("num_classes").get<int>();
  dataset.motif_size = meta.value("motif_size", 0);
  dataset.seed = meta.value("seed", uint64_t{0});
  dataset.split = StratifiedSplit(dataset.graph.labels(), dataset.seed);
  return dataset;
}

nlohmann::json ReadJsonFile(const fs::path& path) {
  std::ifstream in = OpenForRead(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  Require(out.good(), ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  Require(out.good(), ErrorCode::kIo, "write failed for " + path.string());
}

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorCode::kMissingArtifact, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dgx
