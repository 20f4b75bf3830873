#ifndef DGX_DATAGEN_H_
#define DGX_DATAGEN_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "dgx/graph.h"

namespace dgx {

enum class DatasetKind { kBaShapes, kBaCommunity, kTreeCycles, kTreeGrid, kDiLinkMotif, kDiLinkBase };
enum class Motif { kHouse, kCycle6, kGrid3x3 };

const char* DatasetKindName(DatasetKind kind);
DatasetKind ParseDatasetKind(std::string_view name);
inline constexpr DatasetKind kAllDatasetKinds[] = {
    DatasetKind::kBaShapes,   DatasetKind::kBaCommunity, DatasetKind::kTreeCycles,
    DatasetKind::kTreeGrid,   DatasetKind::kDiLinkMotif, DatasetKind::kDiLinkBase};

// Benchmark constants. The base/motif sizes follow the usual explainer
// benchmark conventions.
struct SyntheticSpec {
  DatasetKind kind = DatasetKind::kBaShapes;
  int base_nodes = 300;
  int attachment = 5;
  int motif_count = 80;  // motif instances; bonds for DiLink-Base
  int tree_depth = 8;
  // Random reciprocal noise edges, as a fraction of undirected edges
  // (BA-Shapes / BA-Community only).
  bool noise = true;
  double noise_fraction = 0.1;
  uint64_t seed = 0;

  static SyntheticSpec Defaults(DatasetKind kind, uint64_t seed);
};

Dataset Generate(const SyntheticSpec& spec);

// Preferential-attachment graph stored as reciprocal pairs: an (m+1)-clique
// followed by nodes that each attach to m distinct degree-weighted targets.
DiGraph BaGraph(int n, int m, uint64_t seed);

// Balanced binary tree with levels 0..depth, reciprocal edges.
DiGraph BinaryTree(int depth);

// Appends `count` motif instances, each wired to a uniformly chosen base node
// by one reciprocal pair from the motif's first node. Base nodes get label 0;
// house roles top/middle/bottom get 1..3, cycle and grid nodes get 1.
Dataset AttachMotifs(const DiGraph& base, Motif motif, int count, uint64_t seed);

// Each ordered pair (i, j), i != j, independently present with probability p.
DiGraph RandomDigraph(int n, double p, uint64_t seed);

// Nodes per motif instance and its internal undirected bonds.
int MotifNodeCount(Motif motif);
std::vector<Edge> MotifBonds(Motif motif);

}  // namespace dgx

#endif  // DGX_DATAGEN_H_
