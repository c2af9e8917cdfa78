#pragma once

// Staggered F-model on an N x M square lattice: vertex states, energies,
// arrow and line configurations, and the brute-force enumeration oracle.
//
// Conventions
//  * Vertex (r, c) has row r in [0, N) (increasing upwards) and column c in
//    [0, M) (increasing to the right). It lies on sublattice A iff r + c is
//    even.
//  * A horizontal arrow bit is 1 when the arrow points right (+x); a vertical
//    arrow bit is 1 when it points up (+y).
//  * The reference ground state puts state 6 on every A vertex and state 5 on
//    every B vertex. Line occupation s_j = 1 marks arrows opposing it.
//  * Energies are returned already multiplied by beta, so they are
//    dimensionless: states 1-4 carry beta*eps, state 5 carries +beta*s on A
//    and -beta*s on B, state 6 the opposite.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace vertex_expand::model {

/// beta*eps on the free-fermion line.
inline constexpr double kFreeFermionBetaEps = 0.5 * std::numbers::ln2;

enum class Sublattice { A, B };
enum class Boundary { Periodic, FixedGroundState };

std::string to_string(Boundary b);
Boundary parse_boundary(std::string_view text);

inline Sublattice sublattice_of(int row, int col) {
  return ((row + col) % 2 + 2) % 2 == 0 ? Sublattice::A : Sublattice::B;
}

/// One of the six ice-rule vertex states, numbered as in the usual figure
/// (1-4 carry energy eps, 5 and 6 carry the staggered field).
class VertexState {
 public:
  explicit VertexState(int value);
  int value() const noexcept { return value_; }
  auto operator<=>(const VertexState&) const = default;

  /// Ground-state vertex at a site of the given sublattice (the a-vertex).
  static VertexState ground(Sublattice sub) { return VertexState(sub == Sublattice::A ? 6 : 5); }
  /// Full arrow reversal of ground(sub) (the b-vertex).
  static VertexState reversed_ground(Sublattice sub) { return VertexState(sub == Sublattice::A ? 5 : 6); }

 private:
  int value_;
};

/// Which of the four incident arrows point into the vertex.
struct IncidentArrows {
  bool left_in;
  bool top_in;
  bool right_in;
  bool bottom_in;
  auto operator<=>(const IncidentArrows&) const = default;
};

/// Arrow pattern of a state (the inverse of classification).
IncidentArrows arrows_of(VertexState state);

/// Line occupations (left, top, right, bottom) of a vertex state at a site of
/// the given sublattice, relative to the reference ground state.
struct IncidentLines {
  bool left;
  bool top;
  bool right;
  bool bottom;
  int count() const { return int(left) + int(top) + int(right) + int(bottom); }
  auto operator<=>(const IncidentLines&) const = default;
};
IncidentLines lines_of(VertexState state, Sublattice sub);

class ModelParams {
 public:
  /// beta*eps = 1/2 ln 2 + u_shift.
  static ModelParams from_u(double u_shift, double beta_s, int rows, int cols, Boundary boundary);
  static ModelParams from_beta_eps(double beta_eps, double beta_s, int rows, int cols,
                                   Boundary boundary);
  static ModelParams free_fermion(double beta_s, int rows, int cols, Boundary boundary) {
    return from_u(0.0, beta_s, rows, cols, boundary);
  }

  double beta_eps() const noexcept { return beta_eps_; }
  double beta_s() const noexcept { return beta_s_; }
  double u_shift() const noexcept { return u_shift_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  Boundary boundary() const noexcept { return boundary_; }

  ModelParams with_beta_s(double beta_s) const;
  ModelParams with_u(double u_shift) const;
  ModelParams with_size(int rows, int cols) const;

 private:
  ModelParams(double beta_eps, double u_shift, double beta_s, int rows, int cols, Boundary b);

  double beta_eps_;
  double u_shift_;
  double beta_s_;
  int rows_;
  int cols_;
  Boundary boundary_;
};

/// Dimensionless energy beta*e(state, sublattice).
double vertex_energy(VertexState state, Sublattice sub, const ModelParams& params);

/// Edge bookkeeping shared by arrow and line configurations.
///
/// Periodic: N*M horizontal edges (the right edge of each vertex, wrapping)
/// and N*M vertical edges (the top edge of each vertex, wrapping).
/// FixedGroundState: N*(M+1) horizontal and (N+1)*M vertical edges; the
/// outermost ones are boundary edges pinned to the reference ground state.
class EdgeLayout {
 public:
  EdgeLayout(int rows, int cols, Boundary boundary);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  Boundary boundary() const noexcept { return boundary_; }

  std::size_t horizontal_count() const;
  std::size_t vertical_count() const;

  std::size_t left(int r, int c) const;
  std::size_t right(int r, int c) const;
  std::size_t bottom(int r, int c) const;
  std::size_t top(int r, int c) const;

  bool is_boundary_horizontal(std::size_t index) const;
  bool is_boundary_vertical(std::size_t index) const;

  /// Arrow bit of the reference ground state on an edge.
  bool ground_horizontal(std::size_t index) const;
  bool ground_vertical(std::size_t index) const;

  bool operator==(const EdgeLayout&) const = default;

 private:
  int rows_;
  int cols_;
  Boundary boundary_;
};

class ArrowConfig {
 public:
  explicit ArrowConfig(EdgeLayout layout);

  /// Reference ground state, or its full arrow reversal.
  static ArrowConfig ground_state(const EdgeLayout& layout, bool reversed = false);

  const EdgeLayout& layout() const noexcept { return layout_; }
  bool horizontal(std::size_t i) const { return horizontal_.at(i) != 0; }
  bool vertical(std::size_t i) const { return vertical_.at(i) != 0; }
  void set_horizontal(std::size_t i, bool v) { horizontal_.at(i) = v; }
  void set_vertical(std::size_t i, bool v) { vertical_.at(i) = v; }

  IncidentArrows incident(int r, int c) const;
  ArrowConfig reversed() const;

  /// Row-major bit strings, "H:<bits>;V:<bits>".
  std::string serialize() const;
  static ArrowConfig parse(std::string_view text, const EdgeLayout& layout);

  bool operator==(const ArrowConfig&) const = default;

 private:
  EdgeLayout layout_;
  std::vector<std::uint8_t> horizontal_;
  std::vector<std::uint8_t> vertical_;
};

class LineConfig {
 public:
  explicit LineConfig(EdgeLayout layout);

  const EdgeLayout& layout() const noexcept { return layout_; }
  bool horizontal(std::size_t i) const { return horizontal_.at(i) != 0; }
  bool vertical(std::size_t i) const { return vertical_.at(i) != 0; }
  void set_horizontal(std::size_t i, bool v) { horizontal_.at(i) = v; }
  void set_vertical(std::size_t i, bool v) { vertical_.at(i) = v; }

  IncidentLines incident(int r, int c) const;
  std::size_t occupied_count() const;

 private:
  EdgeLayout layout_;
  std::vector<std::uint8_t> horizontal_;
  std::vector<std::uint8_t> vertical_;
};

/// Throws IceRuleViolation unless exactly two arrows point in.
VertexState classify_vertex(const ArrowConfig& config, int r, int c);

/// H(c) = -sum_i beta*e(c(i), i); the configuration weight is exp(H).
double reduced_hamiltonian(const ArrowConfig& config, const ModelParams& params);

LineConfig line_representation(const ArrowConfig& config);

struct WeightedConfig {
  ArrowConfig config;
  double hamiltonian;
  double weight;
};

struct Enumeration {
  double partition_function = 0.0;
  std::vector<WeightedConfig> configs;  // lexicographic in the free-edge bits
};

/// Enumeration bound on the number of free edges.
inline constexpr std::size_t kMaxFreeEdges = 24;

/// Exhaustive sum over ice-rule configurations. Throws TooLarge beyond
/// kMaxFreeEdges free edges.
Enumeration enumerate_partition(const ModelParams& params, bool keep_configs = true);

}  // namespace vertex_expand::model
