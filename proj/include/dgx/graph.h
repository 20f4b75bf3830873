#ifndef DGX_GRAPH_H_
#define DGX_GRAPH_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dgx {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct Edge {
  int src = 0;
  int dst = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Sorted unique id collections.
using NodeSet = std::vector<int>;
using EdgeSet = std::vector<int>;

enum class Direction { kIn, kOut, kBoth };

// Directed graph with an index-addressable edge list. Edge indices are stable
// identities: explainers assign one mask scalar per index and symmetrization
// appends reverse edges without renumbering the originals.
//
// Self-loops are never stored; normalizations add them where needed.
class DiGraph {
 public:
  DiGraph() = default;

  // Builds a canonical graph with edges sorted by (src, dst). Ground-truth
  // explanation edges are given as (src, dst) pairs and must be present in
  // `edges`. Throws Error on out-of-range ids, duplicates, self-loops and
  // feature/label size mismatches.
  static DiGraph FromEdgeList(int num_nodes, std::vector<Edge> edges,
                              Matrix features = Matrix(),
                              std::vector<int> labels = {},
                              std::optional<std::vector<Edge>> ground_truth = std::nullopt);

  // Keeps the given edge order. `added_from[e]` is -1 for original edges and
  // the index of the reversed source edge for edges introduced by
  // symmetrization (empty means all original).
  static DiGraph FromOrderedEdges(int num_nodes, std::vector<Edge> edges, Matrix features,
                                  std::vector<int> labels,
                                  std::optional<EdgeSet> ground_truth,
                                  std::vector<int> added_from = {});

  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  const Matrix& features() const { return features_; }
  int num_features() const { return static_cast<int>(features_.cols()); }
  const std::vector<int>& labels() const { return labels_; }
  const std::optional<EdgeSet>& ground_truth() const { return ground_truth_; }

  // Index of the original edge this one reverses, or -1.
  int added_from(int e) const { return added_from_.empty() ? -1 : added_from_[e]; }
  bool has_added_edges() const { return !added_from_.empty(); }

  // Edge indices leaving / entering a node.
  const std::vector<int>& out_edges(int v) const { return out_edges_[v]; }
  const std::vector<int>& in_edges(int v) const { return in_edges_[v]; }
  int out_degree(int v) const { return static_cast<int>(out_edges_[v].size()); }
  int in_degree(int v) const { return static_cast<int>(in_edges_[v].size()); }

  // Edge index of (src, dst) or -1.
  int FindEdge(int src, int dst) const;

  std::vector<bool> GroundTruthMask() const;

 private:
  void BuildAdjacency();

  int num_nodes_ = 0;
  std::vector<Edge> edges_;
  Matrix features_;
  std::vector<int> labels_;
  std::optional<EdgeSet> ground_truth_;
  std::vector<int> added_from_;
  std::vector<std::vector<int>> out_edges_;
  std::vector<std::vector<int>> in_edges_;
};

// Every (i, j) becomes (j, i); edge order, features and labels are kept.
DiGraph Reverse(const DiGraph& g);

bool IsSymmetric(const DiGraph& g);

// Nodes reachable from `v` within `k` steps; always contains `v`.
NodeSet KHopNeighborhood(const DiGraph& g, int v, int k, Direction direction);

// Edge indices with both endpoints in `nodes` (which must be sorted).
EdgeSet InducedEdges(const DiGraph& g, const NodeSet& nodes);

// Endpoints of the given edges, sorted and unique.
NodeSet EdgeEndpoints(const DiGraph& g, const EdgeSet& edges);

enum class SplitRole : uint8_t { kNone = 0, kTrain, kVal, kTest };

// Disjoint train/val/test assignment over nodes.
class Split {
 public:
  Split() = default;
  explicit Split(std::vector<SplitRole> roles) : roles_(std::move(roles)) {}

  SplitRole role(int v) const { return roles_[v]; }
  int size() const { return static_cast<int>(roles_.size()); }
  NodeSet Nodes(SplitRole role) const;
  std::vector<bool> Mask(SplitRole role) const;

 private:
  std::vector<SplitRole> roles_;
};

// 80/10/10 per-class split driven by its own RNG stream.
Split StratifiedSplit(const std::vector<int>& labels, uint64_t seed);

struct Dataset {
  DiGraph graph;
  Split split;
  int num_classes = 0;
  std::string name;
  std::string description;
  // Node budget of one ground-truth explanation (0 when unknown).
  int motif_size = 0;
  uint64_t seed = 0;
};

int CountClasses(const std::vector<int>& labels);

}  // namespace dgx

#endif  // DGX_GRAPH_H_
