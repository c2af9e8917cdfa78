// Constrained dimer partition functions.
//
// Perturbing the weight of constrained edge k by a factor (1 + eps_k) gives
//   Z(eps) / Z0 = exp( 1/2 tr ln(1 + sum_k eps_k R0^{-1} R_k) ),
// and the coefficient of prod_{k in S} eps_k is Z(all edges in S occupied)/Z0.
// Each R_k has two entries, so with V the n x 2m matrix of endpoint unit
// vectors the trace reduces to the 2m x 2m matrix M = D(eps) V^T R0^{-1} V.
// Z(eps) is multilinear in the eps_k, so the expansion is carried out in the
// algebra of polynomials modulo eps_k^2, which is exact.

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include "vertex_expand/dimer_pfaffian.hpp"
#include "vertex_expand/errors.hpp"

namespace vertex_expand::dimer {

namespace {

/// Polynomial in m variables with every exponent 0 or 1, stored by subset.
class Multilinear {
 public:
  explicit Multilinear(int vars) : coef_(std::size_t(1) << vars, 0.0) {}

  static Multilinear constant(int vars, double c) {
    Multilinear p(vars);
    p.coef_[0] = c;
    return p;
  }

  double& operator[](std::size_t mask) { return coef_[mask]; }
  double operator[](std::size_t mask) const { return coef_[mask]; }
  std::size_t size() const { return coef_.size(); }

  Multilinear& operator+=(const Multilinear& o) {
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
    return *this;
  }
  Multilinear& operator*=(double s) {
    for (auto& c : coef_) c *= s;
    return *this;
  }

  friend Multilinear operator*(const Multilinear& a, const Multilinear& b) {
    Multilinear out(std::countr_zero(a.coef_.size()));
    const std::size_t n = a.coef_.size();
    for (std::size_t s = 0; s < n; ++s) {
      // Sum over sub-masks t of s: a[t] * b[s \ t].
      double acc = 0.0;
      for (std::size_t t = s;; t = (t - 1) & s) {
        acc += a.coef_[t] * b.coef_[s ^ t];
        if (t == 0) break;
      }
      out.coef_[s] = acc;
    }
    return out;
  }

 private:
  std::vector<double> coef_;
};

using PolyMatrix = std::vector<std::vector<Multilinear>>;

PolyMatrix multiply(const PolyMatrix& a, const PolyMatrix& b, int vars) {
  const std::size_t n = a.size();
  PolyMatrix out(n, std::vector<Multilinear>(n, Multilinear(vars)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

}  // namespace

std::vector<double> occupied_subset_ratios(const KasteleynMatrix& r, std::span<const int> edges) {
  const int m = int(edges.size());
  if (std::size_t(m) > kMaxConstraints) {
    throw TooManyConstraints(std::to_string(m) + " constraints exceed the limit of " +
                             std::to_string(kMaxConstraints));
  }
  std::set<int> distinct(edges.begin(), edges.end());
  if (int(distinct.size()) != m) throw ConstraintConflict("edge constrained twice");
  for (int e : edges) {
    if (e < 0 || std::size_t(e) >= r.edges().size()) {
      throw InvalidArgument("constraint edge out of range");
    }
  }
  if (m == 0) return {1.0};

  std::vector<int> endpoints;
  for (int e : edges) {
    endpoints.push_back(r.edges()[e].from);
    endpoints.push_back(r.edges()[e].to);
  }
  const Eigen::MatrixXd g = r.inverse_block(endpoints);

  // M = D(eps) G with D_k = eps_k r_k [[0, 1], [-1, 0]], r_k = R(from_k, to_k).
  const std::size_t dim = std::size_t(2 * m);
  PolyMatrix mat(dim, std::vector<Multilinear>(dim, Multilinear(m)));
  for (int k = 0; k < m; ++k) {
    const double rk = r.edges()[edges[k]].weight;
    const std::size_t bit = std::size_t(1) << k;
    for (std::size_t j = 0; j < dim; ++j) {
      mat[2 * k][j][bit] = rk * g(2 * k + 1, Eigen::Index(j));
      mat[2 * k + 1][j][bit] = -rk * g(2 * k, Eigen::Index(j));
    }
  }

  // log term: 1/2 sum_{n=1}^{m} (-1)^{n+1} tr(M^n) / n ; M^n = 0 for n > m.
  Multilinear log_ratio(m);
  PolyMatrix power = mat;
  for (int n = 1; n <= m; ++n) {
    if (n > 1) power = multiply(power, mat, m);
    Multilinear tr(m);
    for (std::size_t i = 0; i < dim; ++i) tr += power[i][i];
    tr *= 0.5 * ((n % 2 == 1) ? 1.0 : -1.0) / n;
    log_ratio += tr;
  }

  // exp(log_ratio) = sum_{n=0}^{m} log_ratio^n / n!.
  Multilinear result = Multilinear::constant(m, 1.0);
  Multilinear term = Multilinear::constant(m, 1.0);
  for (int n = 1; n <= m; ++n) {
    term = term * log_ratio;
    term *= 1.0 / n;
    result += term;
  }
  std::vector<double> out(result.size());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = result[s];
  return out;
}

double ConstrainedPartition::log_value() const {
  if (!(ratio > 0.0)) return -std::numeric_limits<double>::infinity();
  return log_z0 + std::log(ratio);
}

ConstrainedPartition constrained_partition(const KasteleynMatrix& r,
                                           std::span<const EdgeConstraint> constraints) {
  std::vector<int> edges;
  std::size_t occupied_mask = 0;
  std::size_t empty_mask = 0;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    edges.push_back(constraints[k].edge);
    (constraints[k].occupied ? occupied_mask : empty_mask) |= std::size_t(1) << k;
  }
  const auto ratios = occupied_subset_ratios(r, edges);
  const double log_z0 = partition_dimer(r);

  // Inclusion-exclusion over the edges required to be empty.
  double ratio = 0.0;
  for (std::size_t t = empty_mask;; t = (t - 1) & empty_mask) {
    const double sign = (std::popcount(t) % 2 == 0) ? 1.0 : -1.0;
    ratio += sign * ratios[occupied_mask | t];
    if (t == 0) break;
  }
  return {log_z0, ratio};
}

ConstrainedPartition vertex_constrained_partition(const DecoratedLattice& lattice,
                                                  const KasteleynMatrix& r, int row, int col,
                                                  model::VertexState state) {
  if (row < 0 || row >= lattice.rows() || col < 0 || col >= lattice.cols()) {
    throw InvalidArgument("site outside the lattice");
  }
  const auto lines = model::lines_of(state, model::sublattice_of(row, col));
  const std::array<bool, 4> wanted = {lines.left, lines.top, lines.right, lines.bottom};
  const auto site = lattice.site_edges(row, col);
  std::vector<EdgeConstraint> constraints;
  bool impossible = false;
  for (int k = 0; k < 4; ++k) {
    if (site[k]) {
      constraints.push_back({*site[k], wanted[k]});
    } else if (wanted[k]) {
      impossible = true;  // a line would have to cross the fixed boundary
    }
  }
  if (impossible) return {partition_dimer(r), 0.0};
  return constrained_partition(r, constraints);
}

}  // namespace vertex_expand::dimer
