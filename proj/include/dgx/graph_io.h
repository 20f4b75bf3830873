#ifndef DGX_GRAPH_IO_H_
#define DGX_GRAPH_IO_H_

#include <filesystem>
#include <optional>
#include <string>

#include "dgx/graph.h"
#include "json.hpp"

namespace dgx {

// Files of the plain-text graph format. All ids are zero-based.
//   edges.csv         header "src,dst"
//   features.csv      one comma-separated row per node, no header (optional)
//   labels.csv        header "node,label"
//   ground_truth.csv  header "src,dst" (optional)
struct GraphFiles {
  std::filesystem::path edges;
  std::filesystem::path labels;
  std::optional<std::filesystem::path> features;
  std::optional<std::filesystem::path> ground_truth;

  static GraphFiles InDirectory(const std::filesystem::path& dir);
};

// The node count is max(label rows, largest id + 1) unless given explicitly.
DiGraph ReadGraphCsv(const GraphFiles& files, std::optional<int> num_nodes = std::nullopt);
void WriteGraphCsv(const DiGraph& g, const std::filesystem::path& dir);
// Endpoint pairs of a `src,dst` CSV such as ground_truth.csv.
std::vector<Edge> ReadEdgePairs(const std::filesystem::path& path);

// Dataset directory = graph CSVs + meta.json. The split is not stored; it is
// recomputed from the recorded split seed.
void SaveDataset(const Dataset& dataset, const std::filesystem::path& dir,
                 const nlohmann::json& extra_meta = nlohmann::json::object());
Dataset LoadDataset(const std::filesystem::path& dir);
nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace dgx

#endif  // DGX_GRAPH_IO_H_
