#ifndef DGX_PREPROCESS_H_
#define DGX_PREPROCESS_H_

#include <span>
#include <string_view>
#include <vector>

#include "dgx/graph.h"

namespace dgx {

enum class Provenance { kSymm, kLapNorm };

const char* ProvenanceName(Provenance p);
Provenance ParseProvenance(std::string_view name);

// One edge-attributed contribution to cell (row, col) of a propagation
// operator. A mask value m_e for edge `edge` scales it to coeff * m_e.
struct EdgeTerm {
  int row = 0;
  int col = 0;
  int edge = 0;
  double coeff = 0.0;
};

// Normalized message-passing operator, kept in factored form:
//
//   M(mask) = diag(base_diagonal) + left * right^T + sum_t coeff_t * mask[edge_t] * E(row_t, col_t)
//
// The diagonal and low-rank parts hold self-loops and teleportation and are
// never masked; every edge-attributed cell is listed in `terms`.
class PropagationMatrix {
 public:
  PropagationMatrix() = default;
  PropagationMatrix(Provenance provenance, int num_edges, Vector base_diagonal, Matrix left,
                    Matrix right, std::vector<EdgeTerm> terms);

  Provenance provenance() const { return provenance_; }
  int size() const { return static_cast<int>(base_diagonal_.size()); }
  int num_edges() const { return num_edges_; }
  const Vector& base_diagonal() const { return base_diagonal_; }
  const Matrix& left() const { return left_; }
  const Matrix& right() const { return right_; }
  const std::vector<EdgeTerm>& terms() const { return terms_; }

  // out = M(mask) * h. An empty mask means all ones.
  void Apply(const Matrix& h, std::span<const double> mask, Matrix& out) const;
  // out += M(mask)^T * g.
  void ApplyTransposeAdd(const Matrix& g, std::span<const double> mask, Matrix& out) const;
  // grad_mask[e] += sum over terms of e of coeff * <g.row(row), h.row(col)>.
  void AccumulateMaskGradient(const Matrix& g, const Matrix& h, std::span<double> grad_mask) const;

  Matrix Dense() const;
  Matrix DenseMasked(std::span<const double> mask) const;
  // Self-loop / teleport part only (every edge masked out).
  Matrix DenseBase() const;

  // Directed edges contributing to a cell.
  std::vector<int> EdgesAt(int row, int col) const;

 private:
  Provenance provenance_ = Provenance::kSymm;
  int num_edges_ = 0;
  Vector base_diagonal_;
  Matrix left_;
  Matrix right_;
  std::vector<EdgeTerm> terms_;
};

// PageRank-smoothed transition matrix
//   P_pr = (1 - alpha) * P_edges + u * 1^T,  u_i = ((1 - alpha) [i dangling] + alpha) / n
// where P_edges is the row-normalized out-adjacency.
class TransitionMatrix {
 public:
  TransitionMatrix(const DiGraph& g, double alpha);

  int size() const { return static_cast<int>(teleport_.size()); }
  double alpha() const { return alpha_; }
  // Row-normalized out-edge probability of each edge (before (1 - alpha)).
  const std::vector<double>& edge_probability() const { return edge_probability_; }
  const Vector& teleport() const { return teleport_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // x^T * P_pr
  Vector LeftMultiply(const Vector& x) const;
  Matrix Dense() const;

 private:
  double alpha_;
  std::vector<Edge> edges_;
  std::vector<double> edge_probability_;
  Vector teleport_;
};

struct StationaryDistribution {
  Vector pi;
  double alpha = 0.0;
  int iterations = 0;
};

inline constexpr double kStationaryTolerance = 1e-10;
inline constexpr int kStationaryMaxIterations = 10000;

// Adds every missing reverse edge. Originals keep their indices; each added
// edge is appended and remembers the index of the edge it reverses.
DiGraph Symmetrize(const DiGraph& g);

// D^-1/2 (A + I) D^-1/2 on a symmetric graph (pipeline B).
PropagationMatrix GcnNorm(const DiGraph& g);

TransitionMatrix PageRankTransition(const DiGraph& g, double alpha);

// Lazy power iteration from the uniform vector.
StationaryDistribution ComputeStationaryDistribution(const TransitionMatrix& p);
// Same iteration on an explicit row-stochastic matrix.
StationaryDistribution ComputeStationaryDistribution(const Matrix& p, double alpha = 0.0);

// 1/2 (Pi^1/2 P_pr Pi^-1/2 + Pi^-1/2 P_pr^T Pi^1/2), Pi = diag(pi) (pipeline L).
// Edge (a, b) contributes the same coefficient to cells (a, b) and (b, a).
PropagationMatrix DiLapNorm(const DiGraph& g, double alpha);

// -sum(l log l) over the eigenvalues of L / Tr(L); 0 for the zero matrix.
double VonNeumannEntropy(const Matrix& laplacian);

struct EntropyGap {
  double directed = 0.0;
  double symmetrized = 0.0;
  double gap = 0.0;
};

// Entropies of I - DiLapNorm(g) and I - GcnNorm(Symmetrize(g)).
EntropyGap ComputeEntropyGap(const DiGraph& g, double alpha);

// The graph a pipeline trains on together with its operator.
struct ProcessedGraph {
  DiGraph graph;
  PropagationMatrix prop;
  double alpha = 0.0;
};

ProcessedGraph Preprocess(const DiGraph& g, Provenance provenance, double alpha);

}  // namespace dgx

#endif  // DGX_PREPROCESS_H_
