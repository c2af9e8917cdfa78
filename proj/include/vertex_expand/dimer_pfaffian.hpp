#pragma once

// Decorated ("city") lattice of the staggered F-model at the free-fermion
// point, its Kasteleyn matrix, and dimer partition functions.
//
// Every vertex of an N x M lattice becomes a city of four nodes (left, top,
// right, bottom) joined in a 4-cycle by internal edges of weight
// u = (sqrt(2)/2) exp(beta s / 2). Adjacent cities are joined by external
// edges of weight C = exp(-beta s / 2); a dimer on an external edge is a line
// of the line representation. Lines never cross the outer boundary, which
// matches the fixed ground-state boundary of the vertex model.
//
// Node numbering is city-major (city = r * M + c), then left, top, right,
// bottom.

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vertex_expand/vertex_model.hpp"

namespace vertex_expand::dimer {

enum class CityNode : int { Left = 0, Top = 1, Right = 2, Bottom = 3 };
enum class EdgeKind { Internal, Horizontal, Vertical, Generic };

struct Edge {
  int u;
  int v;
  double weight;
  EdgeKind kind = EdgeKind::Generic;
};

/// Undirected weighted graph; the edge order is the canonical edge index.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int node_count) : node_count_(node_count) {}

  int add_edge(int u, int v, double weight, EdgeKind kind = EdgeKind::Generic);

  int node_count() const noexcept { return node_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }
  std::optional<int> find_edge(int u, int v) const;

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
};

struct DimerWeights {
  double city_edge;      // u
  double external_edge;  // C
};
DimerWeights dimer_weights(double beta_s);

class DecoratedLattice {
 public:
  DecoratedLattice(int rows, int cols, double beta_s);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  double beta_s() const noexcept { return beta_s_; }
  const DimerWeights& weights() const noexcept { return weights_; }
  const WeightedGraph& graph() const noexcept { return graph_; }

  int node(int r, int c, CityNode k) const { return 4 * (r * cols_ + c) + int(k); }

  /// External edge between (r, c) and (r, c + 1), if inside the lattice.
  std::optional<int> horizontal_edge(int r, int c) const;
  /// External edge between (r, c) and (r + 1, c), if inside the lattice.
  std::optional<int> vertical_edge(int r, int c) const;
  /// External edges incident to the city of vertex (r, c): left, top, right,
  /// bottom. Missing entries lie on the boundary and are always empty.
  std::array<std::optional<int>, 4> site_edges(int r, int c) const;

  /// Bounded faces of the planar embedding, each a clockwise node cycle.
  std::vector<std::vector<int>> faces() const;
  /// Planar embedding coordinates of a node.
  std::pair<double, double> position(int node) const;

  /// Edge dump "i j weight kind", one edge per line in canonical order.
  std::string dump() const;

 private:
  int rows_;
  int cols_;
  double beta_s_;
  DimerWeights weights_;
  WeightedGraph graph_;
  std::vector<int> horizontal_;  // rows x (cols - 1), -1 if absent
  std::vector<int> vertical_;    // (rows - 1) x cols
};

/// Builds the decorated lattice for the model. Requires beta*eps = 1/2 ln 2
/// within 1e-12 (NotFreeFermion otherwise); lattice size is rows x cols.
DecoratedLattice build_decorated(const model::ModelParams& params);

/// Induced six-vertex weights w_1..w_6 of a city (shared external weights
/// split evenly between the two cities they join).
std::array<double, 6> induced_vertex_weights(const DimerWeights& w);

/// w1 w2 + w3 w4 - w5 w6 for the induced weights.
double free_fermion_defect(const DimerWeights& w);

/// Oriented edge: R(from, to) = +weight, R(to, from) = -weight.
struct OrientedEdge {
  int from;
  int to;
  double weight;
};

/// LU factorisation of R with cached inverse entries.
class KasteleynFactorization;

/// Anti-symmetric signed adjacency matrix R with Z^2 = det R.
class KasteleynMatrix {
 public:
  KasteleynMatrix(int dimension, std::vector<OrientedEdge> edges);

  int dimension() const noexcept { return dimension_; }
  const std::vector<OrientedEdge>& edges() const noexcept { return edges_; }

  /// R_ij (0 for non-adjacent pairs).
  double entry(int i, int j) const;
  Eigen::MatrixXd dense() const;

  /// Same matrix with node i and its edges removed.
  KasteleynMatrix without_node(int i) const;
  /// Same matrix with the orientation of edge e reversed.
  KasteleynMatrix with_flipped_edge(std::size_t e) const;

  /// ln |det R|; throws SingularMatrix.
  double log_abs_det() const;
  /// (R^{-1})_{ij}; throws SingularMatrix.
  double inverse_entry(int i, int j) const;
  /// Dense block of R^{-1} on the given row/column index set.
  Eigen::MatrixXd inverse_block(std::span<const int> index) const;

  /// Dump "i j weight sign" per edge with i < j and sign = sign of R_ij.
  std::string dump() const;

 private:
  struct Cache;
  const KasteleynFactorization& factorization() const;

  int dimension_;
  std::vector<OrientedEdge> edges_;
  std::shared_ptr<Cache> cache_;  // shared by copies; factorised on first use
};

/// Kasteleyn orientation by the face-parity (dual spanning tree) algorithm.
/// The result is audited; OrientationFailure if the audit fails.
KasteleynMatrix kasteleyn_orientation(const DecoratedLattice& lattice);

struct OrientationAudit {
  bool antisymmetric;
  bool faces_clockwise;  // every face cycle listed clockwise in the embedding
  bool odd_clockwise;    // every bounded face has an odd clockwise edge count
  std::size_t bad_faces;
  bool ok() const { return antisymmetric && faces_clockwise && odd_clockwise; }
};
OrientationAudit audit_orientation(const DecoratedLattice& lattice, const KasteleynMatrix& r);

/// ln Z = 1/2 ln det R. Throws SingularMatrix when no perfect matching exists.
double partition_dimer(const KasteleynMatrix& r);

struct EdgeConstraint {
  int edge;
  bool occupied;
};

/// Node count limit of the matching enumerator.
inline constexpr int kMaxMatchingNodes = 36;

/// Weighted sum over perfect matchings (lowest-index-node branching),
/// optionally restricted by edge constraints. Throws TooLarge.
double enumerate_matchings(const WeightedGraph& graph,
                           std::span<const EdgeConstraint> constraints = {});

/// Largest number of edge constraints accepted by constrained_partition.
inline constexpr std::size_t kMaxConstraints = 5;

struct ConstrainedPartition {
  double log_z0;  // ln Z of the unconstrained model
  double ratio;   // Z_cons / Z_0
  /// ln Z_cons; -inf when the constraints admit no matching.
  double log_value() const;
};

/// Constrained partition function from the trace expansion of
/// sqrt(det(R0 + sum_k eps_k R_k)); empty-edge constraints are reduced to
/// occupied ones by inclusion-exclusion.
ConstrainedPartition constrained_partition(const KasteleynMatrix& r,
                                           std::span<const EdgeConstraint> constraints);

/// Z_cons / Z_0 for "all edges occupied", for every subset of `edges`, indexed
/// by bit mask (bit k set = edges[k] occupied; other edges unconstrained).
/// Edge indices refer to KasteleynMatrix::edges().
std::vector<double> occupied_subset_ratios(const KasteleynMatrix& r, std::span<const int> edges);

/// Partition function with vertex (r, c) constrained to `state`.
ConstrainedPartition vertex_constrained_partition(const DecoratedLattice& lattice,
                                                  const KasteleynMatrix& r, int row, int col,
                                                  model::VertexState state);

/// Weight of all dimer completions of a line configuration (external dimers
/// fixed by the lines, internal ones summed over), by direct enumeration.
double completion_weight(const DecoratedLattice& lattice, const model::LineConfig& lines);

}  // namespace vertex_expand::dimer
