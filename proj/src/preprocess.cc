#include "dgx/preprocess.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "dgx/error.h"

namespace dgx {

const char* ProvenanceName(Provenance p) {
  return p == Provenance::kSymm ? "symm" : "lapnorm";
}

Provenance ParseProvenance(std::string_view name) {
  if (name == "symm") return Provenance::kSymm;
  if (name == "lapnorm") return Provenance::kLapNorm;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown preprocessing '" + std::string(name) + "' (expected symm or lapnorm)");
}

PropagationMatrix::PropagationMatrix(Provenance provenance, int num_edges, Vector base_diagonal,
                                     Matrix left, Matrix right, std::vector<EdgeTerm> terms)
    : provenance_(provenance),
      num_edges_(num_edges),
      base_diagonal_(std::move(base_diagonal)),
      left_(std::move(left)),
      right_(std::move(right)),
      terms_(std::move(terms)) {
  std::stable_sort(terms_.begin(), terms_.end(), [](const EdgeTerm& a, const EdgeTerm& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
}

void PropagationMatrix::Apply(const Matrix& h, std::span<const double> mask, Matrix& out) const {
  out.resize(h.rows(), h.cols());
  out.noalias() = base_diagonal_.asDiagonal() * h;
  if (left_.cols() > 0) out.noalias() += left_ * (right_.transpose() * h);
  if (mask.empty()) {
    for (const EdgeTerm& t : terms_) out.row(t.row) += t.coeff * h.row(t.col);
  } else {
    for (const EdgeTerm& t : terms_) out.row(t.row) += (t.coeff * mask[t.edge]) * h.row(t.col);
  }
}

void PropagationMatrix::ApplyTransposeAdd(const Matrix& g, std::span<const double> mask,
                                          Matrix& out) const {
  out.noalias() += base_diagonal_.asDiagonal() * g;
  if (left_.cols() > 0) out.noalias() += right_ * (left_.transpose() * g);
  if (mask.empty()) {
    for (const EdgeTerm& t : terms_) out.row(t.col) += t.coeff * g.row(t.row);
  } else {
    for (const EdgeTerm& t : terms_) out.row(t.col) += (t.coeff * mask[t.edge]) * g.row(t.row);
  }
}

void PropagationMatrix::AccumulateMaskGradient(const Matrix& g, const Matrix& h,
                                               std::span<double> grad_mask) const {
  for (const EdgeTerm& t : terms_) grad_mask[t.edge] += t.coeff * g.row(t.row).dot(h.row(t.col));
}

Matrix PropagationMatrix::DenseBase() const {
  Matrix m = Matrix::Zero(size(), size());
  m.diagonal() = base_diagonal_;
  if (left_.cols() > 0) m.noalias() += left_ * right_.transpose();
  return m;
}

Matrix PropagationMatrix::DenseMasked(std::span<const double> mask) const {
  Matrix m = DenseBase();
  for (const EdgeTerm& t : terms_) m(t.row, t.col) += t.coeff * (mask.empty() ? 1.0 : mask[t.edge]);
  return m;
}

Matrix PropagationMatrix::Dense() const { return DenseMasked({}); }

std::vector<int> PropagationMatrix::EdgesAt(int row, int col) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), std::pair(row, col),
                             [](const EdgeTerm& t, const std::pair<int, int>& key) {
                               return t.row != key.first ? t.row < key.first : t.col < key.second;
                             });
  std::vector<int> edges;
  for (; it != terms_.end() && it->row == row && it->col == col; ++it) edges.push_back(it->edge);
  return edges;
}

TransitionMatrix::TransitionMatrix(const DiGraph& g, double alpha) : alpha_(alpha) {
  Require(alpha > 0.0 && alpha < 1.0, ErrorCode::kInvalidArgument,
          "teleport alpha must be in (0, 1), got " + std::to_string(alpha));
  const int n = g.num_nodes();
  edges_ = g.edges();
  edge_probability_.resize(edges_.size());
  for (size_t e = 0; e < edges_.size(); ++e) {
    edge_probability_[e] = 1.0 / g.out_degree(edges_[e].src);
  }
  teleport_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double dangling = g.out_degree(i) == 0 ? 1.0 : 0.0;
    teleport_[i] = ((1.0 - alpha) * dangling + alpha) / n;
  }
}

Vector TransitionMatrix::LeftMultiply(const Vector& x) const {
  Vector y = Vector::Constant(size(), x.dot(teleport_));
  for (size_t e = 0; e < edges_.size(); ++e) {
    y[edges_[e].dst] += (1.0 - alpha_) * edge_probability_[e] * x[edges_[e].src];
  }
  return y;
}

Matrix TransitionMatrix::Dense() const {
  Matrix p = teleport_ * Vector::Ones(size()).transpose();
  for (size_t e = 0; e < edges_.size(); ++e) {
    p(edges_[e].src, edges_[e].dst) += (1.0 - alpha_) * edge_probability_[e];
  }
  return p;
}

DiGraph Symmetrize(const DiGraph& g) {
  std::vector<Edge> edges = g.edges();
  std::vector<int> added_from(edges.size(), -1);
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    if (g.FindEdge(edge.dst, edge.src) < 0) {
      edges.push_back({edge.dst, edge.src});
      added_from.push_back(e);
    }
  }
  // An already symmetric input keeps its plain provenance.
  if (edges.size() == static_cast<size_t>(g.num_edges()) && !g.has_added_edges()) {
    added_from.clear();
  } else if (g.has_added_edges()) {
    for (int e = 0; e < g.num_edges(); ++e) added_from[e] = g.added_from(e);
  }
  return DiGraph::FromOrderedEdges(g.num_nodes(), std::move(edges), g.features(), g.labels(),
                                   g.ground_truth(), std::move(added_from));
}

PropagationMatrix GcnNorm(const DiGraph& g) {
  Require(IsSymmetric(g), ErrorCode::kNotSymmetric,
          "GCN normalization needs a symmetric graph; symmetrize first");
  const int n = g.num_nodes();
  Vector degree(n);
  for (int i = 0; i < n; ++i) degree[i] = g.out_degree(i) + 1.0;
  Vector diagonal = degree.cwiseInverse();
  std::vector<EdgeTerm> terms;
  terms.reserve(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    // Edge i -> j carries the message of i into row j.
    terms.push_back({edge.dst, edge.src, e, 1.0 / std::sqrt(degree[edge.src] * degree[edge.dst])});
  }
  return PropagationMatrix(Provenance::kSymm, g.num_edges(), std::move(diagonal), Matrix(n, 0),
                           Matrix(n, 0), std::move(terms));
}

TransitionMatrix PageRankTransition(const DiGraph& g, double alpha) {
  return TransitionMatrix(g, alpha);
}

namespace {

template <typename Step>
StationaryDistribution PowerIterate(int n, double alpha, Step step) {
  StationaryDistribution result;
  result.alpha = alpha;
  Vector pi = Vector::Constant(n, n > 0 ? 1.0 / n : 0.0);
  for (int it = 1; it <= kStationaryMaxIterations; ++it) {
    // Lazy step (P + I) / 2: same fixed point, and periodic chains still converge.
    Vector next = 0.5 * (step(pi) + pi);
    next /= next.sum();
    const double change = (next - pi).lpNorm<1>();
    pi = std::move(next);
    if (change < kStationaryTolerance) {
      result.pi = std::move(pi);
      result.iterations = it;
      return result;
    }
  }
  throw Error(ErrorCode::kNotConverged, "stationary distribution did not converge in " +
                                            std::to_string(kStationaryMaxIterations) +
                                            " iterations");
}

}  // namespace

StationaryDistribution ComputeStationaryDistribution(const TransitionMatrix& p) {
  Require(p.size() > 0, ErrorCode::kInvalidArgument, "empty transition matrix");
  return PowerIterate(p.size(), p.alpha(), [&](const Vector& x) { return p.LeftMultiply(x); });
}

StationaryDistribution ComputeStationaryDistribution(const Matrix& p, double alpha) {
  Require(p.rows() == p.cols() && p.rows() > 0, ErrorCode::kShapeMismatch,
          "transition matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    Require(p.row(i).minCoeff() >= 0.0 && std::abs(p.row(i).sum() - 1.0) < 1e-9,
            ErrorCode::kInvalidArgument, "row " + std::to_string(i) + " is not stochastic");
  }
  return PowerIterate(static_cast<int>(p.rows()), alpha, [&](const Vector& x) -> Vector {
    return (x.transpose() * p).transpose();
  });
}

PropagationMatrix DiLapNorm(const DiGraph& g, double alpha) {
  const TransitionMatrix p(g, alpha);
  const int n = g.num_nodes();
  if (n == 0) return PropagationMatrix(Provenance::kLapNorm, 0, Vector(), Matrix(), Matrix(), {});
  const StationaryDistribution stationary = ComputeStationaryDistribution(p);
  const Vector s = stationary.pi.cwiseSqrt();
  const Vector s_inv = s.cwiseInverse();
  const Vector su = s.cwiseProduct(p.teleport());

  // Teleport part 1/2 [(s.u)(1/s)^T + (1/s)(s.u)^T] as a rank-2 product.
  Matrix left(n, 2);
  Matrix right(n, 2);
  left.col(0) = 0.5 * su;
  left.col(1) = 0.5 * s_inv;
  right.col(0) = s_inv;
  right.col(1) = su;

  std::vector<EdgeTerm> terms;
  terms.reserve(2 * g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edge(e);
    const double w =
        0.5 * (1.0 - alpha) * p.edge_probability()[e] * s[edge.src] * s_inv[edge.dst];
    terms.push_back({edge.src, edge.dst, e, w});
    terms.push_back({edge.dst, edge.src, e, w});
  }
  return PropagationMatrix(Provenance::kLapNorm, g.num_edges(), Vector::Zero(n), std::move(left),
                           std::move(right), std::move(terms));
}

double VonNeumannEntropy(const Matrix& laplacian) {
  Require(laplacian.rows() == laplacian.cols(), ErrorCode::kShapeMismatch,
          "entropy needs a square operator");
  if (laplacian.rows() == 0) return 0.0;
  const double scale = std::max(1.0, laplacian.cwiseAbs().maxCoeff());
  Require((laplacian - laplacian.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * scale,
          ErrorCode::kNotSymmetric, "entropy needs a symmetric operator");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(laplacian, Eigen::EigenvaluesOnly);
  Require(solver.info() == Eigen::Success, ErrorCode::kNotConverged, "eigensolver failed");
  const Vector& eig = solver.eigenvalues();
  Require(eig.minCoeff() >= -1e-8 * scale, ErrorCode::kInvalidArgument,
          "entropy needs a positive-semidefinite operator");
  const Vector clamped = eig.cwiseMax(0.0);
  const double trace = clamped.sum();
  if (trace <= 1e-300) return 0.0;
  double h = 0.0;
  for (Eigen::Index i = 0; i < clamped.size(); ++i) {
    const double lambda = clamped[i] / trace;
    if (lambda > 0.0) h -= lambda * std::log(lambda);
  }
  return h;
}

EntropyGap ComputeEntropyGap(const DiGraph& g, double alpha) {
  EntropyGap result;
  const int n = g.num_nodes();
  if (n == 0) return result;
  const Matrix identity = Matrix::Identity(n, n);
  Matrix directed = identity - DiLapNorm(g, alpha).Dense();
  // Symmetrize away rounding so the solver sees an exactly symmetric input.
  directed = 0.5 * (directed + directed.transpose()).eval();
  const Matrix symmetrized = identity - GcnNorm(Symmetrize(g)).Dense();
  result.directed = VonNeumannEntropy(directed);
  result.symmetrized = VonNeumannEntropy(symmetrized);
  result.gap = result.directed - result.symmetrized;
  return result;
}

ProcessedGraph Preprocess(const DiGraph& g, Provenance provenance, double alpha) {
  ProcessedGraph result;
  result.alpha = alpha;
  if (provenance == Provenance::kSymm) {
    result.graph = Symmetrize(g);
    result.prop = GcnNorm(result.graph);
  } else {
    result.graph = g;
    result.prop = DiLapNorm(g, alpha);
  }
  return result;
}

}  // namespace dgx
