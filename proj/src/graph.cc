#include "dgx/graph.h"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

#include "dgx/error.h"
#include "dgx/rng.h"

namespace dgx {
namespace {

std::string EdgeString(const Edge& e) {
  return "(" + std::to_string(e.src) + "," + std::to_string(e.dst) + ")";
}

void CheckEdgeIds(int num_nodes, const std::vector<Edge>& edges) {
  for (const Edge& e : edges) {
    Require(e.src >= 0 && e.src < num_nodes && e.dst >= 0 && e.dst < num_nodes,
            ErrorCode::kOutOfRange,
            "edge " + EdgeString(e) + " references a node outside [0, " +
                std::to_string(num_nodes) + ")");
    Require(e.src != e.dst, ErrorCode::kInvalidArgument,
            "self-loop " + EdgeString(e) + " cannot be stored");
  }
}

Matrix NormalizeFeatures(int num_nodes, Matrix features) {
  if (features.cols() == 0) return Matrix(num_nodes, 0);
  Require(features.rows() == num_nodes, ErrorCode::kShapeMismatch,
          "feature matrix has " + std::to_string(features.rows()) + " rows, expected " +
              std::to_string(num_nodes));
  return features;
}

std::vector<int> NormalizeLabels(int num_nodes, std::vector<int> labels) {
  if (labels.empty()) return std::vector<int>(num_nodes, 0);
  Require(static_cast<int>(labels.size()) == num_nodes, ErrorCode::kShapeMismatch,
          "label vector has " + std::to_string(labels.size()) + " entries, expected " +
              std::to_string(num_nodes));
  for (int y : labels) {
    Require(y >= 0, ErrorCode::kInvalidArgument, "labels must be non-negative");
  }
  return labels;
}

}  // namespace

DiGraph DiGraph::FromEdgeList(int num_nodes, std::vector<Edge> edges, Matrix features,
                              std::vector<int> labels,
                              std::optional<std::vector<Edge>> ground_truth) {
  Require(num_nodes >= 0, ErrorCode::kInvalidArgument, "node count must be non-negative");
  CheckEdgeIds(num_nodes, edges);
  std::sort(edges.begin(), edges.end());
  for (size_t i = 1; i < edges.size(); ++i) {
    Require(edges[i] != edges[i - 1], ErrorCode::kDuplicateEdge,
            "duplicate edge " + EdgeString(edges[i]));
  }

  DiGraph g;
  g.num_nodes_ = num_nodes;
  g.edges_ = std::move(edges);
  g.features_ = NormalizeFeatures(num_nodes, std::move(features));
  g.labels_ = NormalizeLabels(num_nodes, std::move(labels));
  g.BuildAdjacency();
  if (ground_truth) {
    EdgeSet indices;
    indices.reserve(ground_truth->size());
    for (const Edge& e : *ground_truth) {
      const int idx = g.FindEdge(e.src, e.dst);
      Require(idx >= 0, ErrorCode::kOutOfRange,
              "ground-truth edge " + EdgeString(e) + " is not in the graph");
      indices.push_back(idx);
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    g.ground_truth_ = std::move(indices);
  }
  return g;
}

DiGraph DiGraph::FromOrderedEdges(int num_nodes, std::vector<Edge> edges, Matrix features,
                                  std::vector<int> labels,
                                  std::optional<EdgeSet> ground_truth,
                                  std::vector<int> added_from) {
  Require(num_nodes >= 0, ErrorCode::kInvalidArgument, "node count must be non-negative");
  CheckEdgeIds(num_nodes, edges);
  std::vector<Edge> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 1; i < sorted.size(); ++i) {
    Require(sorted[i] != sorted[i - 1], ErrorCode::kDuplicateEdge,
            "duplicate edge " + EdgeString(sorted[i]));
  }
  Require(added_from.empty() || added_from.size() == edges.size(), ErrorCode::kShapeMismatch,
          "edge provenance must cover every edge");

  DiGraph g;
  g.num_nodes_ = num_nodes;
  g.edges_ = std::move(edges);
  g.features_ = NormalizeFeatures(num_nodes, std::move(features));
  g.labels_ = NormalizeLabels(num_nodes, std::move(labels));
  g.added_from_ = std::move(added_from);
  if (ground_truth) {
    for (int e : *ground_truth) {
      Require(e >= 0 && e < g.num_edges(), ErrorCode::kOutOfRange,
              "ground-truth index " + std::to_string(e) + " is not a valid edge");
    }
    std::sort(ground_truth->begin(), ground_truth->end());
    g.ground_truth_ = std::move(ground_truth);
  }
  g.BuildAdjacency();
  return g;
}

void DiGraph::BuildAdjacency() {
  out_edges_.assign(num_nodes_, {});
  in_edges_.assign(num_nodes_, {});
  for (int e = 0; e < num_edges(); ++e) {
    out_edges_[edges_[e].src].push_back(e);
    in_edges_[edges_[e].dst].push_back(e);
  }
}

int DiGraph::FindEdge(int src, int dst) const {
  if (src < 0 || src >= num_nodes_) return -1;
  for (int e : out_edges_[src]) {
    if (edges_[e].dst == dst) return e;
  }
  return -1;
}

std::vector<bool> DiGraph::GroundTruthMask() const {
  std::vector<bool> mask(num_edges(), false);
  if (ground_truth_) {
    for (int e : *ground_truth_) mask[e] = true;
  }
  return mask;
}

DiGraph Reverse(const DiGraph& g) {
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) edges.push_back({e.dst, e.src});
  std::vector<int> added_from;
  if (g.has_added_edges()) {
    for (int e = 0; e < g.num_edges(); ++e) added_from.push_back(g.added_from(e));
  }
  return DiGraph::FromOrderedEdges(g.num_nodes(), std::move(edges), g.features(), g.labels(),
                                   g.ground_truth(), std::move(added_from));
}

bool IsSymmetric(const DiGraph& g) {
  for (const Edge& e : g.edges()) {
    if (g.FindEdge(e.dst, e.src) < 0) return false;
  }
  return true;
}

NodeSet KHopNeighborhood(const DiGraph& g, int v, int k, Direction direction) {
  Require(v >= 0 && v < g.num_nodes(), ErrorCode::kOutOfRange,
          "node " + std::to_string(v) + " is not in the graph");
  Require(k >= 0, ErrorCode::kInvalidArgument, "hop count must be non-negative");
  std::vector<int> dist(g.num_nodes(), -1);
  std::deque<int> queue = {v};
  dist[v] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (dist[u] == k) continue;
    auto visit = [&](int w) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    };
    if (direction != Direction::kIn) {
      for (int e : g.out_edges(u)) visit(g.edge(e).dst);
    }
    if (direction != Direction::kOut) {
      for (int e : g.in_edges(u)) visit(g.edge(e).src);
    }
  }
  NodeSet result;
  for (int u = 0; u < g.num_nodes(); ++u) {
    if (dist[u] >= 0) result.push_back(u);
  }
  return result;
}

EdgeSet InducedEdges(const DiGraph& g, const NodeSet& nodes) {
  std::vector<bool> member(g.num_nodes(), false);
  for (int v : nodes) member[v] = true;
  EdgeSet result;
  for (int v : nodes) {
    for (int e : g.out_edges(v)) {
      if (member[g.edge(e).dst]) result.push_back(e);
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

NodeSet EdgeEndpoints(const DiGraph& g, const EdgeSet& edges) {
  NodeSet nodes;
  nodes.reserve(edges.size() * 2);
  for (int e : edges) {
    nodes.push_back(g.edge(e).src);
    nodes.push_back(g.edge(e).dst);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

NodeSet Split::Nodes(SplitRole role) const {
  NodeSet nodes;
  for (int v = 0; v < size(); ++v) {
    if (roles_[v] == role) nodes.push_back(v);
  }
  return nodes;
}

std::vector<bool> Split::Mask(SplitRole role) const {
  std::vector<bool> mask(roles_.size());
  for (size_t v = 0; v < roles_.size(); ++v) mask[v] = roles_[v] == role;
  return mask;
}

Split StratifiedSplit(const std::vector<int>& labels, uint64_t seed) {
  Rng rng = MakeRng(seed, "split");
  std::map<int, std::vector<int>> by_class;
  for (int v = 0; v < static_cast<int>(labels.size()); ++v) by_class[labels[v]].push_back(v);
  std::vector<SplitRole> roles(labels.size(), SplitRole::kNone);
  for (auto& [label, nodes] : by_class) {
    // Fisher-Yates with the portable index sampler.
    for (int i = static_cast<int>(nodes.size()) - 1; i > 0; --i) {
      std::swap(nodes[i], nodes[UniformIndex(rng, i + 1)]);
    }
    const int count = static_cast<int>(nodes.size());
    int num_val = count / 10;
    int num_test = count / 10;
    // Small classes still contribute to every split when possible.
    if (count >= 3) {
      num_val = std::max(num_val, 1);
      num_test = std::max(num_test, 1);
    }
    for (int i = 0; i < count; ++i) {
      SplitRole role = SplitRole::kTrain;
      if (i < num_test) {
        role = SplitRole::kTest;
      } else if (i < num_test + num_val) {
        role = SplitRole::kVal;
      }
      roles[nodes[i]] = role;
    }
  }
  return Split(std::move(roles));
}

int CountClasses(const std::vector<int>& labels) {
  int max_label = -1;
  for (int y : labels) max_label = std::max(max_label, y);
  return max_label + 1;
}

}  // namespace dgx
