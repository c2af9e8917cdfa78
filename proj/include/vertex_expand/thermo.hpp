#pragma once

// Infinite-lattice thermodynamics at the free-fermion point: the reduced
// free energy per vertex F0(beta s), its beta*s derivative, the fraction of
// a/b vertices, and the free energy to first order in U.
//
// F0 = (1 / 8 pi^2) int int ln[2 cosh(2 bs) + 2 cos t1 cos t2] dt1 dt2.

#include <cstddef>

namespace vertex_expand::thermo {

struct QuadratureSpec {
  int nodes = 64;            // starting nodes per axis; power of two, >= 16
  double tolerance = 1e-10;  // relative to max(|value|, 1)
  int max_nodes = 1 << 24;

  void validate() const;  // InvalidArgument
};

struct QuadratureResult {
  double value;
  double error_estimate;  // change under the last node doubling
  int nodes;
};

/// F0 by quadrature. The inner angle is integrated in closed form; the outer
/// one by the periodic midpoint rule, doubled until converged (Romberg
/// extrapolation at bs = 0, where the integrand has kinks). ToleranceNotMet.
QuadratureResult baxter_free_energy(double beta_s, const QuadratureSpec& spec = {});

struct SeriesSum {
  double value;
  double tail_bound;  // bound on the omitted terms (asymptotic estimate at bs = 0)
  int terms;
};

/// F0 = 1/2 ln 2 + t/4 - 1/2 sum_{n <= n_max} c_n^2 x^n / (2n), with
/// c_n = (2n)! / (4^n n!^2), t = ln cosh^2(2 bs), x = exp(-t).
SeriesSum baxter_series(double beta_s, int n_max);

/// Series summed until the tail bound is below tolerance. At bs = 0 the tail
/// is summed from the large-n expansion of c_n^2. ToleranceNotMet.
SeriesSum baxter_series_converged(double beta_s, double tolerance = 1e-15);

/// dF0 / d(beta s), odd in beta s.
QuadratureResult dF0_dbetas(double beta_s, const QuadratureSpec& spec = {});

/// Z_b / Z_0, the probability that a given vertex is the reversed ground
/// state vertex, by a tensor midpoint rule over both angles.
QuadratureResult zb_ratio(double beta_s, const QuadratureSpec& spec = {});
/// Z_a / Z_0 = zb_ratio(-beta s).
QuadratureResult za_ratio(double beta_s, const QuadratureSpec& spec = {});

struct FirstOrder {
  double f0;
  double coefficient_from_constraints;  // -(1 - Z_a/Z_0 - Z_b/Z_0)
  double coefficient_from_derivative;   // 1/2 [(dF0/dbs)^2 - 1]
  double u;
  double free_energy;                   // f0 + coefficient * u
};

/// Both first-order coefficients; IdentityMismatch if they differ by more
/// than 10 * spec.tolerance.
FirstOrder first_order_free_energy(double beta_s, double u, const QuadratureSpec& spec = {});

}  // namespace vertex_expand::thermo
