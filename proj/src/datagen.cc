#include "dgx/datagen.h"

#include <algorithm>
#include <set>
#include <string>

#include "dgx/error.h"
#include "dgx/rng.h"

namespace dgx {
namespace {

// Accumulates edges while guarding against duplicates.
class EdgeBuilder {
 public:
  explicit EdgeBuilder(int num_nodes) : num_nodes_(num_nodes), labels_(num_nodes, 0) {}

  int AddNodes(int count, int label) {
    const int first = num_nodes_;
    num_nodes_ += count;
    labels_.resize(num_nodes_, label);
    return first;
  }

  bool Has(int a, int b) const { return present_.count({a, b}) > 0; }

  bool AddDirected(int a, int b, bool ground_truth = false) {
    if (a == b || !present_.insert({a, b}).second) return false;
    edges_.push_back({a, b});
    if (ground_truth) ground_truth_.push_back({a, b});
    return true;
  }

  void AddReciprocal(int a, int b, bool ground_truth = false) {
    AddDirected(a, b, ground_truth);
    AddDirected(b, a, ground_truth);
  }

  void CopyFrom(const DiGraph& g, int offset) {
    for (const Edge& e : g.edges()) AddDirected(e.src + offset, e.dst + offset);
  }

  int num_nodes() const { return num_nodes_; }
  std::vector<int>& labels() { return labels_; }
  size_t num_edges() const { return edges_.size(); }

  // Adds reciprocal pairs between uniformly chosen unconnected nodes.
  void AddNoise(int pairs, Rng& rng) {
    int added = 0;
    int attempts = 0;
    while (added < pairs && attempts < 100 * pairs + 1000) {
      ++attempts;
      const int a = static_cast<int>(UniformIndex(rng, num_nodes_));
      const int b = static_cast<int>(UniformIndex(rng, num_nodes_));
      if (a == b || Has(a, b) || Has(b, a)) continue;
      AddReciprocal(a, b);
      ++added;
    }
  }

  DiGraph Build(Matrix features = Matrix()) const {
    return DiGraph::FromEdgeList(num_nodes_, edges_, std::move(features), labels_,
                                 ground_truth_.empty() ? std::nullopt
                                                       : std::optional(ground_truth_));
  }

 private:
  int num_nodes_;
  std::vector<int> labels_;
  std::vector<Edge> edges_;
  std::vector<Edge> ground_truth_;
  std::set<std::pair<int, int>> present_;
};

// Role label (1-based) of each node of a motif instance.
std::vector<int> MotifRoles(Motif motif) {
  switch (motif) {
    case Motif::kHouse: return {1, 2, 2, 3, 3};
    case Motif::kCycle6: return std::vector<int>(6, 1);
    case Motif::kGrid3x3: return std::vector<int>(9, 1);
  }
  return {};
}

int MotifBudget(Motif motif) {
  switch (motif) {
    case Motif::kHouse: return 6;  // five house nodes plus the anchor
    case Motif::kCycle6: return 6;
    case Motif::kGrid3x3: return 9;
  }
  return 0;
}

void AttachInto(EdgeBuilder& builder, int base_nodes, Motif motif, int count, Rng& rng,
                int label_offset) {
  const auto bonds = MotifBonds(motif);
  const auto roles = MotifRoles(motif);
  for (int i = 0; i < count; ++i) {
    const int first = builder.AddNodes(MotifNodeCount(motif), 0);
    for (int k = 0; k < MotifNodeCount(motif); ++k) {
      builder.labels()[first + k] = roles[k] + label_offset;
    }
    for (const Edge& b : bonds) builder.AddReciprocal(first + b.src, first + b.dst, true);
    const int anchor = static_cast<int>(UniformIndex(rng, base_nodes));
    builder.AddReciprocal(first, anchor);
  }
}

Dataset Finish(DiGraph graph, std::string name, std::string description, int motif_size,
               uint64_t seed) {
  Dataset d;
  d.num_classes = CountClasses(graph.labels());
  d.split = StratifiedSplit(graph.labels(), seed);
  d.graph = std::move(graph);
  d.name = std::move(name);
  d.description = std::move(description);
  d.motif_size = motif_size;
  d.seed = seed;
  return d;
}

// Undirected pair count of a builder that holds reciprocal edges only.
int NoisePairs(const EdgeBuilder& b, double fraction) {
  return static_cast<int>(fraction * static_cast<double>(b.num_edges() / 2) + 0.5);
}

}  // namespace

const char* DatasetKindName(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kBaShapes: return "ba_shapes";
    case DatasetKind::kBaCommunity: return "ba_community";
    case DatasetKind::kTreeCycles: return "tree_cycles";
    case DatasetKind::kTreeGrid: return "tree_grid";
    case DatasetKind::kDiLinkMotif: return "dilink_motif";
    case DatasetKind::kDiLinkBase: return "dilink_base";
  }
  return "unknown";
}

DatasetKind ParseDatasetKind(std::string_view name) {
  for (DatasetKind kind : kAllDatasetKinds) {
    if (name == DatasetKindName(kind)) return kind;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown dataset '" + std::string(name) + "'");
}

SyntheticSpec SyntheticSpec::Defaults(DatasetKind kind, uint64_t seed) {
  SyntheticSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  if (kind == DatasetKind::kDiLinkBase) {
    spec.base_nodes = 150;
    spec.motif_count = 60;
  }
  return spec;
}

int MotifNodeCount(Motif motif) {
  switch (motif) {
    case Motif::kHouse: return 5;
    case Motif::kCycle6: return 6;
    case Motif::kGrid3x3: return 9;
  }
  return 0;
}

std::vector<Edge> MotifBonds(Motif motif) {
  switch (motif) {
    case Motif::kHouse:
      // top(0); middle 1,2; bottom 3,4. Roof triangle plus square base.
      return {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}, {3, 4}};
    case Motif::kCycle6: {
      std::vector<Edge> bonds;
      for (int i = 0; i < 6; ++i) bonds.push_back({i, (i + 1) % 6});
      return bonds;
    }
    case Motif::kGrid3x3: {
      std::vector<Edge> bonds;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          if (c + 1 < 3) bonds.push_back({r * 3 + c, r * 3 + c + 1});
          if (r + 1 < 3) bonds.push_back({r * 3 + c, (r + 1) * 3 + c});
        }
      }
      return bonds;
    }
  }
  return {};
}

DiGraph BaGraph(int n, int m, uint64_t seed) {
  Require(m >= 1 && n > m, ErrorCode::kInvalidArgument,
          "BA graph needs n > m >= 1 (got n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
  Rng rng = MakeRng(seed, "ba");
  EdgeBuilder builder(n);
  // Each node appears once per incident edge.
  std::vector<int> repeated;
  for (int a = 0; a <= m; ++a) {
    for (int b = a + 1; b <= m; ++b) {
      builder.AddReciprocal(a, b);
      repeated.push_back(a);
      repeated.push_back(b);
    }
  }
  std::vector<int> targets;
  for (int v = m + 1; v < n; ++v) {
    targets.clear();
    while (static_cast<int>(targets.size()) < m) {
      const int t = repeated[UniformIndex(rng, repeated.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (int t : targets) {
      builder.AddReciprocal(v, t);
      repeated.push_back(v);
      repeated.push_back(t);
    }
  }
  return builder.Build();
}

DiGraph BinaryTree(int depth) {
  Require(depth >= 0 && depth < 24, ErrorCode::kInvalidArgument, "tree depth out of range");
  const int n = (1 << (depth + 1)) - 1;
  EdgeBuilder builder(n);
  for (int v = 1; v < n; ++v) builder.AddReciprocal((v - 1) / 2, v);
  return builder.Build();
}

Dataset AttachMotifs(const DiGraph& base, Motif motif, int count, uint64_t seed) {
  Require(count >= 1, ErrorCode::kInvalidArgument, "motif count must be at least 1");
  Require(base.num_nodes() >= 1, ErrorCode::kInvalidArgument, "base graph is empty");
  Rng rng = MakeRng(seed, "motifs");
  EdgeBuilder builder(base.num_nodes());
  builder.CopyFrom(base, 0);
  AttachInto(builder, base.num_nodes(), motif, count, rng, 0);
  return Finish(builder.Build(), "motifs", "base graph with attached motifs", MotifBudget(motif),
                seed);
}

namespace {

Dataset BaShapes(const SyntheticSpec& spec) {
  const DiGraph base =
      BaGraph(spec.base_nodes, spec.attachment, DeriveSeed(spec.seed, "ba_shapes/base"));
  Rng rng = MakeRng(spec.seed, "ba_shapes/motifs");
  EdgeBuilder builder(base.num_nodes());
  builder.CopyFrom(base, 0);
  AttachInto(builder, base.num_nodes(), Motif::kHouse, spec.motif_count, rng, 0);
  if (spec.noise) {
    Rng noise_rng = MakeRng(spec.seed, "ba_shapes/noise");
    builder.AddNoise(NoisePairs(builder, spec.noise_fraction), noise_rng);
  }
  return Finish(builder.Build(), "ba_shapes", "BA base with attached houses",
                MotifBudget(Motif::kHouse), spec.seed);
}

Dataset BaCommunity(const SyntheticSpec& spec) {
  constexpr int kFeatureDim = 10;
  EdgeBuilder builder(0);
  int community_nodes = 0;
  for (int c = 0; c < 2; ++c) {
    const std::string stream = "ba_community/" + std::to_string(c);
    const DiGraph base =
        BaGraph(spec.base_nodes, spec.attachment, DeriveSeed(spec.seed, stream + "/base"));
    Rng rng = MakeRng(spec.seed, stream + "/motifs");
    EdgeBuilder part(base.num_nodes());
    part.CopyFrom(base, 0);
    AttachInto(part, base.num_nodes(), Motif::kHouse, spec.motif_count, rng, 0);
    const DiGraph g = part.Build();
    community_nodes = g.num_nodes();
    const int offset = builder.AddNodes(g.num_nodes(), 0);
    for (int v = 0; v < g.num_nodes(); ++v) builder.labels()[offset + v] = g.labels()[v] + 4 * c;
    const auto gt = g.GroundTruthMask();
    for (int e = 0; e < g.num_edges(); ++e) {
      builder.AddDirected(g.edge(e).src + offset, g.edge(e).dst + offset, gt[e]);
    }
  }
  // One inter-community pair per two community nodes.
  const int inter_pairs = community_nodes / 2;
  Rng inter_rng = MakeRng(spec.seed, "ba_community/inter");
  for (int added = 0; added < inter_pairs;) {
    const int a = static_cast<int>(UniformIndex(inter_rng, community_nodes));
    const int b = community_nodes + static_cast<int>(UniformIndex(inter_rng, community_nodes));
    if (builder.Has(a, b)) continue;
    builder.AddReciprocal(a, b);
    ++added;
  }
  if (spec.noise) {
    Rng noise_rng = MakeRng(spec.seed, "ba_community/noise");
    builder.AddNoise(NoisePairs(builder, spec.noise_fraction), noise_rng);
  }
  // Class-dependent Gaussian features: unit shift in coordinate (label mod 10).
  Rng feature_rng = MakeRng(spec.seed, "ba_community/features");
  Matrix features(builder.num_nodes(), kFeatureDim);
  for (int v = 0; v < builder.num_nodes(); ++v) {
    for (int j = 0; j < kFeatureDim; ++j) features(v, j) = StandardNormal(feature_rng);
    features(v, builder.labels()[v] % kFeatureDim) += 1.0;
  }
  return Finish(builder.Build(std::move(features)), "ba_community",
                "two BA-Shapes communities, 8 classes, Gaussian features",
                MotifBudget(Motif::kHouse), spec.seed);
}

Dataset TreeCycles(const SyntheticSpec& spec) {
  const DiGraph base = BinaryTree(spec.tree_depth);
  Rng rng = MakeRng(spec.seed, "tree_cycles/motifs");
  EdgeBuilder builder(base.num_nodes());
  builder.CopyFrom(base, 0);
  AttachInto(builder, base.num_nodes(), Motif::kCycle6, spec.motif_count, rng, 0);
  return Finish(builder.Build(), "tree_cycles", "balanced binary tree with six-cycles",
                MotifBudget(Motif::kCycle6), spec.seed);
}

Dataset TreeGrid(const SyntheticSpec& spec) {
  const DiGraph base = BinaryTree(spec.tree_depth);
  Rng rng = MakeRng(spec.seed, "tree_grid/motifs");
  EdgeBuilder builder(base.num_nodes());
  builder.CopyFrom(base, 0);
  AttachInto(builder, base.num_nodes(), Motif::kGrid3x3, spec.motif_count, rng, 0);
  return Finish(builder.Build(), "tree_grid", "balanced binary tree with 3x3 grids",
                MotifBudget(Motif::kGrid3x3), spec.seed);
}

Dataset DiLinkMotif(const SyntheticSpec& spec) {
  Require(spec.motif_count >= 2 && spec.motif_count % 2 == 0, ErrorCode::kInvalidArgument,
          "DiLink-Motif needs an even number of houses");
  const DiGraph base =
      BaGraph(spec.base_nodes, spec.attachment, DeriveSeed(spec.seed, "dilink_motif/base"));
  Rng rng = MakeRng(spec.seed, "dilink_motif/motifs");
  EdgeBuilder builder(base.num_nodes());
  builder.CopyFrom(base, 0);
  // Half the houses are bonded base -> top (inbound), half top -> base.
  const int houses = spec.motif_count;
  std::vector<int> order(houses);
  for (int i = 0; i < houses; ++i) order[i] = i;
  for (int i = houses - 1; i > 0; --i) std::swap(order[i], order[UniformIndex(rng, i + 1)]);
  std::vector<bool> inbound(houses, false);
  for (int i = 0; i < houses / 2; ++i) inbound[order[i]] = true;

  const auto bonds = MotifBonds(Motif::kHouse);
  const auto roles = MotifRoles(Motif::kHouse);
  for (int h = 0; h < houses; ++h) {
    const int first = builder.AddNodes(5, 0);
    for (int k = 0; k < 5; ++k) builder.labels()[first + k] = roles[k] + (inbound[h] ? 0 : 3);
    // Internal edges point from the top of the house downwards.
    for (const Edge& b : bonds) builder.AddDirected(first + b.src, first + b.dst, true);
    const int anchor = static_cast<int>(UniformIndex(rng, base.num_nodes()));
    if (inbound[h]) {
      builder.AddDirected(anchor, first, true);
    } else {
      builder.AddDirected(first, anchor, true);
    }
  }
  return Finish(builder.Build(), "dilink_motif",
                "BA base with directed houses, bond direction sets the label",
                MotifBudget(Motif::kHouse), spec.seed);
}

// Two BA communities. Each bond is a pair of port nodes, port a hanging off a
// random node of community A by a reciprocal pair and port b likewise off
// community B. The cross edge runs a -> b (one-way bond) or both ways.
Dataset DiLinkBase(const SyntheticSpec& spec) {
  Require(spec.motif_count >= 2 && spec.motif_count % 2 == 0, ErrorCode::kInvalidArgument,
          "DiLink-Base needs an even number of bonds");
  const int community = spec.base_nodes;
  EdgeBuilder builder(0);
  for (int c = 0; c < 2; ++c) {
    const DiGraph g = BaGraph(community, spec.attachment,
                              DeriveSeed(spec.seed, "dilink_base/" + std::to_string(c)));
    const int offset = builder.AddNodes(g.num_nodes(), 0);
    builder.CopyFrom(g, offset);
  }
  Rng rng = MakeRng(spec.seed, "dilink_base/bonds");
  const int bonds = spec.motif_count;
  for (int i = 0; i < bonds; ++i) {
    const bool one_way = i < bonds / 2;
    const int label = one_way ? 1 : 2;
    const int a = builder.AddNodes(1, label);
    const int b = builder.AddNodes(1, label);
    builder.AddReciprocal(a, static_cast<int>(UniformIndex(rng, community)));
    builder.AddReciprocal(b, community + static_cast<int>(UniformIndex(rng, community)));
    builder.AddDirected(a, b, true);
    if (!one_way) builder.AddDirected(b, a, true);
  }
  return Finish(builder.Build(), "dilink_base",
                "two BA communities joined through port pairs by one-way and two-way bonds", 2,
                spec.seed);
}

}  // namespace

Dataset Generate(const SyntheticSpec& spec) {
  switch (spec.kind) {
    case DatasetKind::kBaShapes: return BaShapes(spec);
    case DatasetKind::kBaCommunity: return BaCommunity(spec);
    case DatasetKind::kTreeCycles: return TreeCycles(spec);
    case DatasetKind::kTreeGrid: return TreeGrid(spec);
    case DatasetKind::kDiLinkMotif: return DiLinkMotif(spec);
    case DatasetKind::kDiLinkBase: return DiLinkBase(spec);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown dataset kind");
}

DiGraph RandomDigraph(int n, double p, uint64_t seed) {
  Require(n >= 1, ErrorCode::kInvalidArgument, "random digraph needs n >= 1");
  Require(p >= 0.0 && p <= 1.0, ErrorCode::kInvalidArgument, "edge probability must be in [0, 1]");
  Rng rng = MakeRng(seed, "random_digraph");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (UniformUnit(rng) < p) edges.push_back({i, j});
    }
  }
  return DiGraph::FromEdgeList(n, std::move(edges));
}

}  // namespace dgx
