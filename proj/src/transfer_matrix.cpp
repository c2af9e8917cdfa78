#include "vertex_expand/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "vertex_expand/errors.hpp"
#include "vertex_expand/parallel.hpp"

namespace vertex_expand::model {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TransferMatrix::TransferMatrix(const ModelParams& params) : width_(params.rows()) {
  if (params.boundary() != Boundary::Periodic) {
    throw InvalidArgument("transfer matrix requires periodic boundary");
  }
  if (width_ % 2 != 0 || width_ > kMaxTransferWidth) {
    throw TooLarge("transfer-matrix width must be even and <= " +
                   std::to_string(kMaxTransferWidth));
  }
  even_ = build_column(params, width_, 0);
  odd_ = build_column(params, width_, 1);
}

TransferMatrix::Column TransferMatrix::build_column(const ModelParams& params, int width,
                                                    int column_parity) {
  // Boltzmann weight of every state on both sublattices.
  double weight_of[2][6];
  for (int sub = 0; sub < 2; ++sub) {
    for (int s = 0; s < 6; ++s) {
      weight_of[sub][s] = std::exp(
          -vertex_energy(VertexState(s + 1), sub == 0 ? Sublattice::A : Sublattice::B, params));
    }
  }
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triples;
  const std::uint32_t dim = std::uint32_t(1) << width;

  // Walk up the column choosing (right arrow, top arrow) at each vertex.
  struct Frame {
    int row;
    std::uint32_t out;
    bool bottom_up;
    double w;
  };
  std::vector<Frame> stack;
  for (std::uint32_t in = 0; in < dim; ++in) {
    for (bool wrap_up : {false, true}) {
      stack.clear();
      stack.push_back({0, 0, wrap_up, 1.0});
      while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.row == width) {
          if (f.bottom_up == wrap_up) triples.emplace_back(f.out, in, f.w);
          continue;
        }
        const bool left_in = (in >> f.row) & 1u;
        const bool bottom_in = f.bottom_up;
        const Sublattice sub = sublattice_of(f.row, column_parity);
        for (bool right_bit : {false, true}) {
          for (bool top_up : {false, true}) {
            const bool right_in = !right_bit;
            const bool top_in = !top_up;
            if (int(left_in) + int(bottom_in) + int(right_in) + int(top_in) != 2) continue;
            const IncidentArrows pat{left_in, top_in, right_in, bottom_in};
            int state = 0;
            for (int s = 1; s <= 6; ++s) {
              if (arrows_of(VertexState(s)) == pat) state = s;
            }
            const double w = f.w * weight_of[sub == Sublattice::A ? 0 : 1][state - 1];
            const std::uint32_t out = f.out | (std::uint32_t(right_bit) << f.row);
            stack.push_back({f.row + 1, out, top_up, w});
          }
        }
      }
    }
  }
  std::sort(triples.begin(), triples.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });

  Column col;
  col.row_start.assign(dim + 1, 0);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto [out, in, w] = triples[i];
    if (!col.source.empty() && i > 0 && std::get<0>(triples[i - 1]) == out &&
        std::get<1>(triples[i - 1]) == in) {
      col.weight.back() += w;
      continue;
    }
    col.source.push_back(in);
    col.weight.push_back(w);
    col.row_start[out + 1] = std::uint32_t(col.source.size());
  }
  for (std::uint32_t r = 1; r <= dim; ++r) {
    col.row_start[r] = std::max(col.row_start[r], col.row_start[r - 1]);
  }
  return col;
}

void TransferMatrix::apply_column(const Column& col, std::span<const double> in,
                                  std::span<double> out) {
  parallel_for(out.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      double acc = 0.0;
      for (auto k = col.row_start[r]; k < col.row_start[r + 1]; ++k) {
        acc += col.weight[k] * in[col.source[k]];
      }
      out[r] = acc;
    }
  });
}

void TransferMatrix::apply(std::span<const double> in, std::span<double> out) const {
  std::vector<double> mid(dimension());
  apply_column(even_, in, mid);
  apply_column(odd_, mid, out);
}

double TransferMatrix::log_trace_power(int k) const {
  if (k < 1) throw InvalidArgument("trace power must be >= 1");
  const std::size_t dim = dimension();
  std::vector<double> v(dim), w(dim);
  double trace = 0.0;
  for (std::size_t s = 0; s < dim; ++s) {
    std::fill(v.begin(), v.end(), 0.0);
    v[s] = 1.0;
    for (int i = 0; i < k; ++i) {
      apply(v, w);
      std::swap(v, w);
    }
    trace += v[s];
  }
  return std::log(trace);
}

TransferResult TransferMatrix::dominant(double tolerance, int max_iterations) const {
  const std::size_t dim = dimension();
  std::vector<double> v(dim, 1.0 / std::sqrt(double(dim))), w(dim);
  double log_scale = 0.0;
  double prev_diff = -1.0;
  double ratio = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    apply(v, w);
    const double nrm = norm2(w);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NonConvergence("transfer vector degenerated");
    log_scale = std::log(nrm);
    double diff = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      w[i] /= nrm;
      diff += (w[i] - v[i]) * (w[i] - v[i]);
    }
    diff = std::sqrt(diff);
    if (prev_diff > 0.0 && diff > 1e-11) ratio = diff / prev_diff;
    prev_diff = diff;
    std::swap(v, w);
    if (diff < tolerance) {
      const double r = std::clamp(ratio, 1e-300, 1.0);
      return {log_scale / (2.0 * width_), log_scale, r, -std::log(r), it};
    }
  }
  throw NonConvergence("power iteration did not converge within " +
                       std::to_string(max_iterations) + " iterations");
}

TransferResult transfer_matrix_free_energy(const ModelParams& params) {
  return TransferMatrix(params).dominant();
}

double extrapolate_in_width(std::span<const WidthValue> values) {
  if (values.empty()) throw InvalidArgument("no values to extrapolate");
  const std::size_t n = values.size();
  if (n < 3) return values.back().value;
  const double a = values[n - 3].value;
  const double b = values[n - 2].value;
  const double c = values[n - 1].value;
  const double d1 = b - a;
  const double d2 = c - b;
  const double denom = d2 - d1;
  // Aitken only for monotone, shrinking corrections.
  if (d1 == 0.0 || d2 == 0.0 || (d1 > 0) != (d2 > 0) || std::abs(d2) >= std::abs(d1) ||
      denom == 0.0) {
    return c;
  }
  return c - d2 * d2 / denom;
}

VertexDensities transfer_matrix_densities(const ModelParams& params, double step) {
  auto f_at = [&](const ModelParams& p) { return transfer_matrix_free_energy(p).free_energy; };
  const double u = params.u_shift();
  const double bs = params.beta_s();
  // d f / d(beta eps) = -rho_eps ; d f / d(beta s) = rho_a - rho_b.
  const double dfdu = (f_at(params.with_u(u + step)) - f_at(params.with_u(u - step))) / (2 * step);
  const double dfds =
      (f_at(params.with_beta_s(bs + step)) - f_at(params.with_beta_s(bs - step))) / (2 * step);
  const double eps = -dfdu;
  const double ab = 1.0 - eps;
  return {(ab + dfds) / 2.0, (ab - dfds) / 2.0, eps};
}

}  // namespace vertex_expand::model
