#include "vertex_expand/thermo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "vertex_expand/errors.hpp"
#include "vertex_expand/parallel.hpp"
#include "vertex_expand/series.hpp"

namespace vertex_expand::thermo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kChunk = 4096;
constexpr int kMaxTensorNodes = 1 << 13;

/// Neumaier compensated sum.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Sum of values[i] in index order.
double ordered_sum(const std::vector<double>& values) {
  Accumulator acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

/// Mean of f over the n midpoint nodes of [0, 2 pi). Chunk sums are formed in
/// parallel and reduced in a fixed order.
double midpoint_mean(const std::function<double(double)>& f, int n) {
  const std::size_t chunks = (std::size_t(n) + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks);
  const double h = kTwoPi / n;
  parallel_for(chunks, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      Accumulator acc;
      const std::size_t stop = std::min<std::size_t>(std::size_t(n), (c + 1) * kChunk);
      for (std::size_t k = c * kChunk; k < stop; ++k) acc.add(f((double(k) + 0.5) * h));
      partial[c] = acc.value();
    }
  });
  return ordered_sum(partial) / n;
}

/// Mean over [0, 2 pi) of a periodic function. Spectral doubling, or a
/// Romberg table when the integrand is only piecewise smooth.
QuadratureResult periodic_mean(const std::function<double(double)>& f, const QuadratureSpec& spec,
                               bool romberg) {
  spec.validate();
  std::vector<std::vector<double>> table;
  double previous = midpoint_mean(f, spec.nodes);
  table.push_back({previous});
  for (int n = 2 * spec.nodes; n <= spec.max_nodes; n *= 2) {
    const double m = midpoint_mean(f, n);
    double current = m;
    if (romberg) {
      std::vector<double> row{m};
      double factor = 4.0;
      for (std::size_t k = 0; k < table.back().size(); ++k) {
        row.push_back(row[k] + (row[k] - table.back()[k]) / (factor - 1.0));
        factor *= 4.0;
      }
      current = row.back();
      table.push_back(std::move(row));
    }
    const double change = std::abs(current - previous);
    if (change <= spec.tolerance * std::max(std::abs(current), 1.0)) {
      return {current, change, n};
    }
    previous = current;
  }
  throw ToleranceNotMet("quadrature did not reach tolerance " + std::to_string(spec.tolerance) +
                        " with " + std::to_string(spec.max_nodes) + " nodes");
}

}  // namespace

void QuadratureSpec::validate() const {
  if (nodes < 16 || !std::has_single_bit(unsigned(nodes))) {
    throw InvalidArgument("quadrature nodes must be a power of two >= 16");
  }
  if (max_nodes < nodes) throw InvalidArgument("max_nodes below starting nodes");
  if (!(tolerance > 0.0)) throw InvalidArgument("quadrature tolerance must be positive");
}

QuadratureResult baxter_free_energy(double beta_s, const QuadratureSpec& spec) {
  // Inner angle: (1/2pi) int ln(a + b cos t) dt = ln((a + sqrt(a^2 - b^2)) / 2).
  // With y = 2|bs| and q = exp(-2y) everything stays finite for large y:
  // ln(c + sqrt(sinh^2 y + sin^2 t)) = y + ln((1 + q)/2 + sqrt(((1 - q)/2)^2 + q sin^2 t)).
  const double y = 2.0 * std::abs(beta_s);
  const double q = std::exp(-2.0 * y);
  const double half_diff = -0.5 * std::expm1(-2.0 * y);
  const auto f = [&](double t) {
    const double s = std::sin(t);
    return std::log(0.5 * (1.0 + q) + std::sqrt(half_diff * half_diff + q * s * s));
  };
  QuadratureResult r = periodic_mean(f, spec, beta_s == 0.0);
  r.value = 0.5 * (y + r.value);
  r.error_estimate *= 0.5;
  return r;
}

SeriesSum baxter_series(double beta_s, int n_max) {
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  const double sh = std::sinh(2.0 * beta_s);
  const double t = std::log1p(sh * sh);
  Accumulator acc;
  acc.add(0.5 * std::numbers::ln2);
  acc.add(0.25 * t);
  double c = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    c *= (2.0 * n - 1.0) / (2.0 * n);
    acc.add(-c * c * std::exp(-n * t) / (4.0 * n));
  }
  // c_n^2 <= 1 / (pi n), so the tail is at most (1/4pi) sum_{n > N} x^n / n^2.
  const double x_next = std::exp(-(n_max + 1.0) * t);
  const double nn = n_max + 1.0;
  double bound = x_next / (4.0 * std::numbers::pi * n_max);
  if (t > 0.0) bound = std::min(bound, x_next / (4.0 * std::numbers::pi * nn * nn * -std::expm1(-t)));
  return {acc.value(), bound, n_max};
}

namespace {

/// Hurwitz zeta(s, a) for large a by Euler-Maclaurin.
double hurwitz_zeta_large(double s, double a, const std::vector<series::Rational>& bernoulli) {
  Accumulator acc;
  acc.add(std::pow(a, 1.0 - s) / (s - 1.0));
  acc.add(0.5 * std::pow(a, -s));
  double rising = s;  // s (s+1) ... (s + 2k - 2)
  double factorial = 2.0;
  for (std::size_t k = 1; k <= bernoulli.size(); ++k) {
    acc.add(series::to_double(bernoulli[k - 1]) / factorial * rising *
            std::pow(a, -s - 2.0 * double(k) + 1.0));
    rising *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
    factorial *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
  }
  return acc.value();
}

}  // namespace

SeriesSum baxter_series_converged(double beta_s, double tolerance) {
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (beta_s == 0.0) {
    // c_n^2 = (1 / pi n) sum_k s_k n^-k, so the tail beyond N is
    // (1/4pi) sum_k s_k zeta(k + 2, N + 1).
    constexpr int kHead = 2000;
    constexpr int kOrder = 12;
    const SeriesSum head = baxter_series(0.0, kHead);
    const series::RationalSeries s = series::stirling_correction(kOrder);
    const auto bernoulli = series::bernoulli_numbers(8);
    Accumulator tail;
    for (int k = 0; k <= kOrder; ++k) {
      tail.add(series::to_double(s[k]) * hurwitz_zeta_large(k + 2.0, kHead + 1.0, bernoulli));
    }
    // First omitted Stirling term is O(N^-(K+2)) relative to the tail.
    const double bound = std::pow(double(kHead), -double(kOrder + 2)) / (4.0 * std::numbers::pi);
    return {head.value - tail.value() / (4.0 * std::numbers::pi), bound, kHead};
  }
  for (int n = 64; n <= (1 << 26); n *= 2) {
    const SeriesSum s = baxter_series(beta_s, n);
    if (s.tail_bound <= tolerance) return s;
  }
  throw ToleranceNotMet("series tail did not fall below " + std::to_string(tolerance));
}

QuadratureResult dF0_dbetas(double beta_s, const QuadratureSpec& spec) {
  spec.validate();
  if (beta_s == 0.0) return {0.0, 0.0, spec.nodes};
  // (sinh y / 2pi) int dt / sqrt(sinh^2 y + sin^2 t), y = 2 bs, rescaled by e^-|y|.
  const double y = 2.0 * std::abs(beta_s);
  const double q = std::exp(-2.0 * y);
  const double half_diff = -0.5 * std::expm1(-2.0 * y);
  const auto f = [&](double t) {
    const double s = std::sin(t);
    return half_diff / std::sqrt(half_diff * half_diff + q * s * s);
  };
  QuadratureResult r = periodic_mean(f, spec, false);
  if (beta_s < 0.0) r.value = -r.value;
  return r;
}

QuadratureResult zb_ratio(double beta_s, const QuadratureSpec& spec) {
  spec.validate();
  // Integrand (e^{-2bs} + c1 c2) / (cosh 2bs + c1 c2), both parts times 2 e^{-|y|}.
  const double y = 2.0 * beta_s;
  const double damp = std::exp(-std::abs(y));
  const double num0 = 2.0 * std::exp(-y - std::abs(y));
  const double den0 = 1.0 + damp * damp;
  const auto grid_mean = [&](int n) {
    const double h = kTwoPi / n;
    std::vector<double> cosines(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) cosines[std::size_t(k)] = std::cos((k + 0.5) * h);
    std::vector<double> rows(static_cast<std::size_t>(n));
    parallel_for(std::size_t(n), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        Accumulator acc;
        for (int j = 0; j < n; ++j) {
          const double cc = 2.0 * damp * cosines[i] * cosines[std::size_t(j)];
          acc.add((num0 + cc) / (den0 + cc));
        }
        rows[i] = acc.value();
      }
    });
    return ordered_sum(rows) / (double(n) * n);
  };
  const int cap = std::min(spec.max_nodes, kMaxTensorNodes);
  double previous = grid_mean(spec.nodes);
  for (int n = 2 * spec.nodes; n <= cap; n *= 2) {
    const double m = grid_mean(n);
    const double change = std::abs(m - previous);
    // zb = (mean / 2)^2, so its change is about (mean / 2) * change.
    if (0.5 * std::abs(m) * change <= spec.tolerance) {
      return {0.25 * m * m, 0.5 * std::abs(m) * change, n};
    }
    previous = m;
  }
  throw ToleranceNotMet("zb_ratio did not converge with " + std::to_string(cap) + "^2 nodes");
}

QuadratureResult za_ratio(double beta_s, const QuadratureSpec& spec) {
  return zb_ratio(-beta_s, spec);
}

FirstOrder first_order_free_energy(double beta_s, double u, const QuadratureSpec& spec) {
  const double f0 = baxter_free_energy(beta_s, spec).value;
  const double za = za_ratio(beta_s, spec).value;
  const double zb = zb_ratio(beta_s, spec).value;
  const double d = dF0_dbetas(beta_s, spec).value;
  FirstOrder out{};
  out.f0 = f0;
  out.coefficient_from_constraints = -(1.0 - za - zb);
  out.coefficient_from_derivative = 0.5 * (d * d - 1.0);
  out.u = u;
  out.free_energy = f0 + out.coefficient_from_derivative * u;
  const double gap = std::abs(out.coefficient_from_constraints - out.coefficient_from_derivative);
  if (gap > 10.0 * spec.tolerance) {
    throw IdentityMismatch("first-order coefficients differ by " + std::to_string(gap));
  }
  return out;
}

}  // namespace vertex_expand::thermo
