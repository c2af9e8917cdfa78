#pragma once

// Column-to-column transfer matrix of the staggered six-vertex model on an
// infinitely long cylinder of circumference N (periodic in the row
// direction). Two successive columns are fused into one operator so that the
// A/B staggering repeats with period one.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vertex_expand/vertex_model.hpp"

namespace vertex_expand::model {

inline constexpr int kMaxTransferWidth = 12;

struct TransferResult {
  double free_energy;       // (1 / 2N) ln lambda_max, per vertex
  double log_eigenvalue;    // ln lambda_max of the two-column operator
  double subleading_ratio;  // estimate of |lambda_2 / lambda_1|
  double gap;               // -ln(subleading_ratio)
  int iterations;
};

class TransferMatrix {
 public:
  /// Requires periodic boundary, even rows, rows <= kMaxTransferWidth. The
  /// column count of `params` is ignored.
  explicit TransferMatrix(const ModelParams& params);

  int width() const noexcept { return width_; }
  std::size_t dimension() const noexcept { return std::size_t(1) << width_; }

  /// out = T_odd T_even in, where state bit r is the arrow on the horizontal
  /// edge crossing row r (1 = pointing right).
  void apply(std::span<const double> in, std::span<double> out) const;

  /// ln tr(T^k): the exact torus partition function with 2k columns.
  double log_trace_power(int k) const;

  /// Dominant eigenvalue by power iteration. Throws NonConvergence.
  TransferResult dominant(double tolerance = 1e-13, int max_iterations = 200000) const;

 private:
  struct Column {
    // CSR by output state.
    std::vector<std::uint32_t> row_start;
    std::vector<std::uint32_t> source;
    std::vector<double> weight;
  };
  static Column build_column(const ModelParams& params, int width, int column_parity);
  static void apply_column(const Column& col, std::span<const double> in, std::span<double> out);

  int width_;
  Column even_;
  Column odd_;
};

/// Free energy per vertex from the dominant eigenvalue at width params.rows().
TransferResult transfer_matrix_free_energy(const ModelParams& params);

struct WidthValue {
  int width;
  double value;
};

/// Infinite-width estimate from a sequence of widths (ascending). Uses the
/// Aitken delta-squared transform on the last three values when the
/// corrections shrink monotonically, else the largest-width value.
double extrapolate_in_width(std::span<const WidthValue> values);

/// Per-vertex densities from finite differences of the transfer-matrix free
/// energy: a-vertices (ground state), b-vertices (reversed), eps-vertices.
struct VertexDensities {
  double a;
  double b;
  double eps;
};
VertexDensities transfer_matrix_densities(const ModelParams& params, double step = 1e-4);

}  // namespace vertex_expand::model
