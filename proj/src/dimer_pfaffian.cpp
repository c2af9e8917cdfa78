#include "vertex_expand/dimer_pfaffian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "vertex_expand/errors.hpp"

namespace vertex_expand::dimer {

namespace {

// Dense factorisation up to this dimension; sparse LU above.
constexpr int kDenseLimit = 1024;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::Internal: return "internal";
    case EdgeKind::Horizontal: return "horizontal";
    case EdgeKind::Vertical: return "vertical";
    case EdgeKind::Generic: break;
  }
  return "generic";
}

}  // namespace

// ---------------------------------------------------------------------------
// WeightedGraph

int WeightedGraph::add_edge(int u, int v, double weight, EdgeKind kind) {
  if (u == v || u < 0 || v < 0 || u >= node_count_ || v >= node_count_) {
    throw InvalidArgument("edge endpoints out of range");
  }
  if (!(weight > 0.0)) throw InvalidArgument("dimer weights must be positive");
  edges_.push_back({u, v, weight, kind});
  return int(edges_.size()) - 1;
}

std::optional<int> WeightedGraph::find_edge(int u, int v) const {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return int(i);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Decorated lattice

DimerWeights dimer_weights(double beta_s) {
  return {0.5 * std::numbers::sqrt2 * std::exp(0.5 * beta_s), std::exp(-0.5 * beta_s)};
}

std::array<double, 6> induced_vertex_weights(const DimerWeights& w) {
  const double u = w.city_edge;
  const double c = w.external_edge;
  const double bent = u * c;         // two lines at right angles
  const double empty = 2.0 * u * u;  // no lines: two internal matchings
  const double full = c * c;         // four lines, each sqrt(C) per city
  // Sublattice A labelling: state 6 is the empty city, state 5 the full one.
  return {bent, bent, bent, bent, full, empty};
}

double free_fermion_defect(const DimerWeights& w) {
  const auto x = induced_vertex_weights(w);
  return x[0] * x[1] + x[2] * x[3] - x[4] * x[5];
}

DecoratedLattice::DecoratedLattice(int rows, int cols, double beta_s)
    : rows_(rows), cols_(cols), beta_s_(beta_s), weights_(dimer_weights(beta_s)),
      graph_(4 * rows * cols) {
  if (rows < 1 || cols < 1) throw InvalidArgument("lattice dimensions must be >= 1");
  if (!std::isfinite(beta_s)) throw InvalidArgument("beta_s must be finite");
  horizontal_.assign(std::size_t(rows) * std::max(cols - 1, 0), -1);
  vertical_.assign(std::size_t(std::max(rows - 1, 0)) * cols, -1);
  using K = CityNode;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double u = weights_.city_edge;
      graph_.add_edge(node(r, c, K::Left), node(r, c, K::Top), u, EdgeKind::Internal);
      graph_.add_edge(node(r, c, K::Top), node(r, c, K::Right), u, EdgeKind::Internal);
      graph_.add_edge(node(r, c, K::Right), node(r, c, K::Bottom), u, EdgeKind::Internal);
      graph_.add_edge(node(r, c, K::Bottom), node(r, c, K::Left), u, EdgeKind::Internal);
      if (c + 1 < cols) {
        horizontal_[std::size_t(r) * (cols - 1) + c] =
            graph_.add_edge(node(r, c, K::Right), node(r, c + 1, K::Left),
                            weights_.external_edge, EdgeKind::Horizontal);
      }
      if (r + 1 < rows) {
        vertical_[std::size_t(r) * cols + c] =
            graph_.add_edge(node(r, c, K::Top), node(r + 1, c, K::Bottom),
                            weights_.external_edge, EdgeKind::Vertical);
      }
    }
  }
}

std::optional<int> DecoratedLattice::horizontal_edge(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c + 1 >= cols_) return std::nullopt;
  return horizontal_[std::size_t(r) * (cols_ - 1) + c];
}

std::optional<int> DecoratedLattice::vertical_edge(int r, int c) const {
  if (c < 0 || c >= cols_ || r < 0 || r + 1 >= rows_) return std::nullopt;
  return vertical_[std::size_t(r) * cols_ + c];
}

std::array<std::optional<int>, 4> DecoratedLattice::site_edges(int r, int c) const {
  return {horizontal_edge(r, c - 1), vertical_edge(r, c), horizontal_edge(r, c),
          vertical_edge(r - 1, c)};
}

std::vector<std::vector<int>> DecoratedLattice::faces() const {
  using K = CityNode;
  std::vector<std::vector<int>> out;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      out.push_back({node(r, c, K::Top), node(r, c, K::Right), node(r, c, K::Bottom),
                     node(r, c, K::Left)});
    }
  }
  for (int r = 0; r + 1 < rows_; ++r) {
    for (int c = 0; c + 1 < cols_; ++c) {
      out.push_back({node(r, c, K::Top), node(r + 1, c, K::Bottom), node(r + 1, c, K::Right),
                     node(r + 1, c + 1, K::Left), node(r + 1, c + 1, K::Bottom),
                     node(r, c + 1, K::Top), node(r, c + 1, K::Left), node(r, c, K::Right)});
    }
  }
  return out;
}

std::pair<double, double> DecoratedLattice::position(int n) const {
  const int city = n / 4;
  const double x = 2.0 * (city % cols_);
  const double y = 2.0 * (city / cols_);
  switch (CityNode(n % 4)) {
    case CityNode::Left: return {x - 0.5, y};
    case CityNode::Top: return {x, y + 0.5};
    case CityNode::Right: return {x + 0.5, y};
    case CityNode::Bottom: return {x, y - 0.5};
  }
  return {x, y};
}

std::string DecoratedLattice::dump() const {
  std::ostringstream os;
  for (const auto& e : graph_.edges()) {
    os << std::min(e.u, e.v) << ' ' << std::max(e.u, e.v) << ' ' << format_double(e.weight)
       << ' ' << kind_name(e.kind) << '\n';
  }
  return os.str();
}

DecoratedLattice build_decorated(const model::ModelParams& params) {
  if (std::abs(params.beta_eps() - model::kFreeFermionBetaEps) > 1e-12) {
    throw NotFreeFermion("decorated lattice needs beta*eps = ln(2)/2, got " +
                         format_double(params.beta_eps()));
  }
  return DecoratedLattice(params.rows(), params.cols(), params.beta_s());
}

// ---------------------------------------------------------------------------
// Factorisation

class KasteleynFactorization {
 public:
  explicit KasteleynFactorization(const KasteleynMatrix& r) : n_(r.dimension()) {
    if (n_ == 0) {
      log_det_ = 0.0;
      return;
    }
    if (n_ % 2 != 0) {
      singular_ = true;
      return;
    }
    double scale = 0.0;
    for (const auto& e : r.edges()) scale = std::max(scale, std::abs(e.weight));
    if (n_ <= kDenseLimit) {
      dense_.emplace(r.dense());
      const auto& lu = dense_->matrixLU();
      double acc = 0.0;
      for (int i = 0; i < n_; ++i) {
        const double p = std::abs(lu(i, i));
        if (!(p > 1e-13 * scale)) {
          singular_ = true;
          return;
        }
        acc += std::log(p);
      }
      log_det_ = acc;
    } else {
      Eigen::SparseMatrix<double> sp(n_, n_);
      std::vector<Eigen::Triplet<double>> trips;
      trips.reserve(2 * r.edges().size());
      for (const auto& e : r.edges()) {
        trips.emplace_back(e.from, e.to, e.weight);
        trips.emplace_back(e.to, e.from, -e.weight);
      }
      sp.setFromTriplets(trips.begin(), trips.end());
      sparse_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
      sparse_->analyzePattern(sp);
      sparse_->factorize(sp);
      if (sparse_->info() != Eigen::Success) {
        singular_ = true;
        return;
      }
      log_det_ = sparse_->logAbsDeterminant();
      if (!std::isfinite(log_det_)) singular_ = true;
    }
  }

  double log_abs_det() const {
    require_regular();
    return log_det_;
  }

  const Eigen::VectorXd& column(int j) const {
    require_regular();
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = columns_.find(j);
    if (it != columns_.end()) return it->second;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_);
    rhs(j) = 1.0;
    Eigen::VectorXd x = dense_ ? Eigen::VectorXd(dense_->solve(rhs))
                               : Eigen::VectorXd(sparse_->solve(rhs));
    return columns_.emplace(j, std::move(x)).first->second;
  }

 private:
  void require_regular() const {
    if (singular_) throw SingularMatrix("Kasteleyn matrix is singular: no perfect matching");
  }

  int n_;
  bool singular_ = false;
  double log_det_ = 0.0;
  std::optional<Eigen::PartialPivLU<Eigen::MatrixXd>> dense_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> sparse_;
  mutable std::mutex mutex_;
  mutable std::map<int, Eigen::VectorXd> columns_;
};

struct KasteleynMatrix::Cache {
  std::once_flag once;
  std::unique_ptr<KasteleynFactorization> value;
};

KasteleynMatrix::KasteleynMatrix(int dimension, std::vector<OrientedEdge> edges)
    : dimension_(dimension), edges_(std::move(edges)), cache_(std::make_shared<Cache>()) {
  for (const auto& e : edges_) {
    if (e.from < 0 || e.to < 0 || e.from >= dimension_ || e.to >= dimension_ || e.from == e.to) {
      throw InvalidArgument("Kasteleyn edge endpoints out of range");
    }
  }
}

double KasteleynMatrix::entry(int i, int j) const {
  for (const auto& e : edges_) {
    if (e.from == i && e.to == j) return e.weight;
    if (e.from == j && e.to == i) return -e.weight;
  }
  return 0.0;
}

Eigen::MatrixXd KasteleynMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dimension_, dimension_);
  for (const auto& e : edges_) {
    m(e.from, e.to) += e.weight;
    m(e.to, e.from) -= e.weight;
  }
  return m;
}

KasteleynMatrix KasteleynMatrix::without_node(int i) const {
  if (i < 0 || i >= dimension_) throw InvalidArgument("node index out of range");
  std::vector<OrientedEdge> kept;
  auto shift = [i](int n) { return n > i ? n - 1 : n; };
  for (const auto& e : edges_) {
    if (e.from == i || e.to == i) continue;
    kept.push_back({shift(e.from), shift(e.to), e.weight});
  }
  return KasteleynMatrix(dimension_ - 1, std::move(kept));
}

KasteleynMatrix KasteleynMatrix::with_flipped_edge(std::size_t e) const {
  auto edges = edges_;
  std::swap(edges.at(e).from, edges.at(e).to);
  return KasteleynMatrix(dimension_, std::move(edges));
}

const KasteleynFactorization& KasteleynMatrix::factorization() const {
  std::call_once(cache_->once,
                 [this] { cache_->value = std::make_unique<KasteleynFactorization>(*this); });
  return *cache_->value;
}

double KasteleynMatrix::log_abs_det() const { return factorization().log_abs_det(); }

double KasteleynMatrix::inverse_entry(int i, int j) const {
  return factorization().column(j)(i);
}

Eigen::MatrixXd KasteleynMatrix::inverse_block(std::span<const int> index) const {
  const auto& f = factorization();
  const auto k = Eigen::Index(index.size());
  Eigen::MatrixXd block(k, k);
  for (Eigen::Index b = 0; b < k; ++b) {
    const auto& col = f.column(index[b]);
    for (Eigen::Index a = 0; a < k; ++a) block(a, b) = col(index[a]);
  }
  return block;
}

std::string KasteleynMatrix::dump() const {
  std::ostringstream os;
  for (const auto& e : edges_) {
    const bool forward = e.from < e.to;
    os << std::min(e.from, e.to) << ' ' << std::max(e.from, e.to) << ' '
       << format_double(e.weight) << ' ' << (forward ? "+1" : "-1") << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Orientation

namespace {

struct FaceEdge {
  int edge;
  bool clockwise_forward;  // clockwise traversal goes from edge.u to edge.v
};

std::vector<std::vector<FaceEdge>> face_edges(const DecoratedLattice& lattice) {
  const auto& g = lattice.graph();
  std::map<std::pair<int, int>, int> lookup;
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const auto& e = g.edges()[i];
    lookup[{e.u, e.v}] = int(i);
    lookup[{e.v, e.u}] = int(i);
  }
  std::vector<std::vector<FaceEdge>> out;
  for (const auto& cycle : lattice.faces()) {
    std::vector<FaceEdge> fe;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const int a = cycle[k];
      const int b = cycle[(k + 1) % cycle.size()];
      const int idx = lookup.at({a, b});
      fe.push_back({idx, g.edges()[idx].u == a});
    }
    out.push_back(std::move(fe));
  }
  return out;
}

}  // namespace

KasteleynMatrix kasteleyn_orientation(const DecoratedLattice& lattice) {
  const auto& g = lattice.graph();
  const auto faces = face_edges(lattice);
  const int outer = int(faces.size());
  const std::size_t edge_count = g.edges().size();

  std::vector<std::array<int, 2>> sides(edge_count, {outer, outer});
  std::vector<int> seen(edge_count, 0);
  for (int f = 0; f < outer; ++f) {
    for (const auto& fe : faces[f]) sides[fe.edge][seen[fe.edge]++] = f;
  }

  // Dual spanning tree rooted at the outer face.
  std::vector<std::vector<std::pair<int, int>>> dual(outer + 1);
  for (std::size_t e = 0; e < edge_count; ++e) {
    const auto [a, b] = sides[e];
    if (a == b) continue;  // bridge: outer face on both sides
    dual[a].emplace_back(b, int(e));
    dual[b].emplace_back(a, int(e));
  }
  std::vector<int> parent_edge(outer + 1, -2);
  std::vector<int> bfs_order;
  std::deque<int> queue{outer};
  parent_edge[outer] = -1;
  while (!queue.empty()) {
    const int f = queue.front();
    queue.pop_front();
    bfs_order.push_back(f);
    for (auto [nb, e] : dual[f]) {
      if (parent_edge[nb] != -2) continue;
      parent_edge[nb] = e;
      queue.push_back(nb);
    }
  }
  if (int(bfs_order.size()) != outer + 1) throw OrientationFailure("dual graph is disconnected");

  // forward[e] = +1: oriented u -> v; -1: v -> u; 0: unset (dual-tree edge).
  std::vector<int> forward(edge_count, 1);
  for (int f = 0; f < outer; ++f) forward[parent_edge[f]] = 0;
  for (auto it = bfs_order.rbegin(); it != bfs_order.rend(); ++it) {
    const int f = *it;
    if (f == outer) continue;
    int clockwise = 0;
    const FaceEdge* free_edge = nullptr;
    for (const auto& fe : faces[f]) {
      if (fe.edge == parent_edge[f]) {
        free_edge = &fe;
        continue;
      }
      if (forward[fe.edge] == 0) throw OrientationFailure("unset edge below a face");
      clockwise += (forward[fe.edge] == 1) == fe.clockwise_forward;
    }
    const bool need_clockwise = clockwise % 2 == 0;
    forward[free_edge->edge] = (need_clockwise == free_edge->clockwise_forward) ? 1 : -1;
  }

  std::vector<OrientedEdge> oriented;
  oriented.reserve(edge_count);
  for (std::size_t e = 0; e < edge_count; ++e) {
    const auto& ed = g.edges()[e];
    oriented.push_back(forward[e] == 1 ? OrientedEdge{ed.u, ed.v, ed.weight}
                                       : OrientedEdge{ed.v, ed.u, ed.weight});
  }
  KasteleynMatrix r(g.node_count(), std::move(oriented));
  const auto audit = audit_orientation(lattice, r);
  if (!audit.ok()) {
    throw OrientationFailure(std::to_string(audit.bad_faces) + " faces violate Kasteleyn parity");
  }
  return r;
}

OrientationAudit audit_orientation(const DecoratedLattice& lattice, const KasteleynMatrix& r) {
  OrientationAudit audit{true, true, true, 0};
  const auto& g = lattice.graph();
  if (r.dimension() != g.node_count() || r.edges().size() != g.edges().size()) {
    audit.antisymmetric = false;
    return audit;
  }
  const Eigen::MatrixXd m = r.dense();
  audit.antisymmetric = (m + m.transpose()).cwiseAbs().maxCoeff() == 0.0;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& ed = g.edges()[e];
    if (std::abs(m(ed.u, ed.v)) != ed.weight) audit.antisymmetric = false;
  }
  if (Eigen::Index((m.array() != 0.0).count()) != Eigen::Index(2 * g.edges().size())) {
    audit.antisymmetric = false;
  }

  for (const auto& cycle : lattice.faces()) {
    double area2 = 0.0;
    int clockwise = 0;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const int a = cycle[k];
      const int b = cycle[(k + 1) % cycle.size()];
      const auto [xa, ya] = lattice.position(a);
      const auto [xb, yb] = lattice.position(b);
      area2 += xa * yb - xb * ya;
      clockwise += m(a, b) > 0.0;
    }
    if (!(area2 < 0.0)) audit.faces_clockwise = false;
    if (clockwise % 2 == 0) {
      audit.odd_clockwise = false;
      ++audit.bad_faces;
    }
  }
  return audit;
}

double partition_dimer(const KasteleynMatrix& r) { return 0.5 * r.log_abs_det(); }

// ---------------------------------------------------------------------------
// Matching enumeration

double enumerate_matchings(const WeightedGraph& graph, std::span<const EdgeConstraint> constraints) {
  const int n = graph.node_count();
  if (n > kMaxMatchingNodes) {
    throw TooLarge(std::to_string(n) + " nodes exceed the matching enumeration bound of " +
                   std::to_string(kMaxMatchingNodes));
  }
  const auto& edges = graph.edges();
  std::vector<int> state(edges.size(), -1);  // -1 free, 0 forbidden, 1 forced
  for (const auto& c : constraints) {
    if (c.edge < 0 || std::size_t(c.edge) >= edges.size()) {
      throw InvalidArgument("constraint edge out of range");
    }
    if (state[c.edge] != -1) throw ConstraintConflict("edge constrained twice");
    state[c.edge] = c.occupied ? 1 : 0;
  }
  if (n % 2 != 0) return 0.0;

  std::vector<char> matched(n, 0);
  double prefactor = 1.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (state[e] != 1) continue;
    if (matched[edges[e].u] || matched[edges[e].v]) return 0.0;
    matched[edges[e].u] = matched[edges[e].v] = 1;
    prefactor *= edges[e].weight;
  }
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (state[e] != -1) continue;
    adj[edges[e].u].emplace_back(edges[e].v, edges[e].weight);
    adj[edges[e].v].emplace_back(edges[e].u, edges[e].weight);
  }

  std::function<double(int)> recurse = [&](int start) -> double {
    int i = start;
    while (i < n && matched[i]) ++i;
    if (i == n) return 1.0;
    double total = 0.0;
    matched[i] = 1;
    for (auto [j, w] : adj[i]) {
      if (matched[j]) continue;
      matched[j] = 1;
      total += w * recurse(i + 1);
      matched[j] = 0;
    }
    matched[i] = 0;
    return total;
  };
  return prefactor * recurse(0);
}

double completion_weight(const DecoratedLattice& lattice, const model::LineConfig& lines) {
  const auto& layout = lines.layout();
  if (layout.rows() != lattice.rows() || layout.cols() != lattice.cols() ||
      layout.boundary() != model::Boundary::FixedGroundState) {
    throw InvalidArgument("line configuration does not match the decorated lattice");
  }
  for (std::size_t i = 0; i < layout.horizontal_count(); ++i) {
    if (layout.is_boundary_horizontal(i) && lines.horizontal(i)) return 0.0;
  }
  for (std::size_t i = 0; i < layout.vertical_count(); ++i) {
    if (layout.is_boundary_vertical(i) && lines.vertical(i)) return 0.0;
  }
  // With every external dimer fixed the graph splits into independent cities.
  double weight = 1.0;
  for (int r = 0; r < lattice.rows(); ++r) {
    for (int c = 0; c < lattice.cols(); ++c) {
      const auto in = lines.incident(r, c);
      const std::array<bool, 4> covered = {in.left, in.top, in.right, in.bottom};
      std::array<int, 4> local{};
      int count = 0;
      for (int k = 0; k < 4; ++k) local[k] = covered[k] ? -1 : count++;
      WeightedGraph city(count);
      for (int k = 0; k < 4; ++k) {
        const int a = local[k];
        const int b = local[(k + 1) % 4];
        if (a >= 0 && b >= 0) city.add_edge(a, b, lattice.weights().city_edge, EdgeKind::Internal);
      }
      weight *= enumerate_matchings(city);
    }
  }
  for (int r = 0; r < lattice.rows(); ++r) {
    for (int c = 0; c + 1 < lattice.cols(); ++c) {
      if (lines.horizontal(layout.right(r, c))) weight *= lattice.weights().external_edge;
    }
  }
  for (int r = 0; r + 1 < lattice.rows(); ++r) {
    for (int c = 0; c < lattice.cols(); ++c) {
      if (lines.vertical(layout.top(r, c))) weight *= lattice.weights().external_edge;
    }
  }
  return weight;
}

}  // namespace vertex_expand::dimer
