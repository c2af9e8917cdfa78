#include "vertex_expand/vertex_model.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "vertex_expand/errors.hpp"

namespace vertex_expand::model {

namespace {

// In-arrow pattern (left, top, right, bottom) of states 1..6.
constexpr std::array<IncidentArrows, 6> kPatterns = {{
    {true, false, false, true},   // 1: right and up
    {false, true, true, false},   // 2: left and down
    {true, true, false, false},   // 3: right and down
    {false, false, true, true},   // 4: left and up
    {true, false, true, false},   // 5: horizontal in, vertical out
    {false, true, false, true},   // 6: horizontal out, vertical in
}};

int parity(int x) { return ((x % 2) + 2) % 2; }

}  // namespace

std::string to_string(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "fixed";
}

Boundary parse_boundary(std::string_view text) {
  if (text == "periodic") return Boundary::Periodic;
  if (text == "fixed" || text == "fixed-ground-state") return Boundary::FixedGroundState;
  throw InvalidArgument("unknown boundary '" + std::string(text) + "'");
}

VertexState::VertexState(int value) : value_(value) {
  if (value < 1 || value > 6) {
    throw InvalidArgument("vertex state must be in 1..6, got " + std::to_string(value));
  }
}

IncidentArrows arrows_of(VertexState state) { return kPatterns[state.value() - 1]; }

IncidentLines lines_of(VertexState state, Sublattice sub) {
  const IncidentArrows s = arrows_of(state);
  const IncidentArrows g = arrows_of(VertexState::ground(sub));
  return {s.left_in != g.left_in, s.top_in != g.top_in, s.right_in != g.right_in,
          s.bottom_in != g.bottom_in};
}

// ---------------------------------------------------------------------------
// ModelParams

ModelParams::ModelParams(double beta_eps, double u_shift, double beta_s, int rows, int cols,
                         Boundary b)
    : beta_eps_(beta_eps), u_shift_(u_shift), beta_s_(beta_s), rows_(rows), cols_(cols),
      boundary_(b) {
  if (rows < 1 || cols < 1) throw InvalidArgument("lattice dimensions must be >= 1");
  if (b == Boundary::Periodic && (rows % 2 != 0 || cols % 2 != 0)) {
    throw InvalidArgument("periodic staggered lattices need even rows and cols");
  }
  if (!std::isfinite(beta_s) || std::isnan(beta_eps)) {
    throw InvalidArgument("beta_s must be finite and beta_eps a number");
  }
}

ModelParams ModelParams::from_u(double u_shift, double beta_s, int rows, int cols,
                                Boundary boundary) {
  return ModelParams(kFreeFermionBetaEps + u_shift, u_shift, beta_s, rows, cols, boundary);
}

ModelParams ModelParams::from_beta_eps(double beta_eps, double beta_s, int rows, int cols,
                                       Boundary boundary) {
  return ModelParams(beta_eps, beta_eps - kFreeFermionBetaEps, beta_s, rows, cols, boundary);
}

ModelParams ModelParams::with_beta_s(double beta_s) const {
  return ModelParams(beta_eps_, u_shift_, beta_s, rows_, cols_, boundary_);
}

ModelParams ModelParams::with_u(double u_shift) const {
  return from_u(u_shift, beta_s_, rows_, cols_, boundary_);
}

ModelParams ModelParams::with_size(int rows, int cols) const {
  return ModelParams(beta_eps_, u_shift_, beta_s_, rows, cols, boundary_);
}

double vertex_energy(VertexState state, Sublattice sub, const ModelParams& params) {
  const int v = state.value();
  if (v <= 4) return params.beta_eps();
  const bool upper = sub == Sublattice::A;
  if (v == 5) return upper ? params.beta_s() : -params.beta_s();
  return upper ? -params.beta_s() : params.beta_s();
}

// ---------------------------------------------------------------------------
// EdgeLayout

EdgeLayout::EdgeLayout(int rows, int cols, Boundary boundary)
    : rows_(rows), cols_(cols), boundary_(boundary) {
  if (rows < 1 || cols < 1) throw InvalidArgument("lattice dimensions must be >= 1");
  if (boundary == Boundary::Periodic && (rows % 2 != 0 || cols % 2 != 0)) {
    throw InvalidArgument("periodic staggered lattices need even rows and cols");
  }
}

std::size_t EdgeLayout::horizontal_count() const {
  return boundary_ == Boundary::Periodic ? std::size_t(rows_) * cols_
                                         : std::size_t(rows_) * (cols_ + 1);
}

std::size_t EdgeLayout::vertical_count() const {
  return boundary_ == Boundary::Periodic ? std::size_t(rows_) * cols_
                                         : std::size_t(rows_ + 1) * cols_;
}

std::size_t EdgeLayout::right(int r, int c) const {
  if (boundary_ == Boundary::Periodic) return std::size_t(r) * cols_ + c;
  return std::size_t(r) * (cols_ + 1) + c + 1;
}

std::size_t EdgeLayout::left(int r, int c) const {
  if (boundary_ == Boundary::Periodic) return std::size_t(r) * cols_ + (c + cols_ - 1) % cols_;
  return std::size_t(r) * (cols_ + 1) + c;
}

std::size_t EdgeLayout::top(int r, int c) const {
  if (boundary_ == Boundary::Periodic) return std::size_t(r) * cols_ + c;
  return std::size_t(r + 1) * cols_ + c;
}

std::size_t EdgeLayout::bottom(int r, int c) const {
  if (boundary_ == Boundary::Periodic) return std::size_t((r + rows_ - 1) % rows_) * cols_ + c;
  return std::size_t(r) * cols_ + c;
}

bool EdgeLayout::is_boundary_horizontal(std::size_t index) const {
  if (boundary_ == Boundary::Periodic) return false;
  const auto k = index % std::size_t(cols_ + 1);
  return k == 0 || k == std::size_t(cols_);
}

bool EdgeLayout::is_boundary_vertical(std::size_t index) const {
  if (boundary_ == Boundary::Periodic) return false;
  const auto k = index / std::size_t(cols_);
  return k == 0 || k == std::size_t(rows_);
}

bool EdgeLayout::ground_horizontal(std::size_t index) const {
  // Points right iff the vertex on its left is an A vertex.
  int r, c_left;
  if (boundary_ == Boundary::Periodic) {
    r = int(index / cols_);
    c_left = int(index % cols_);
  } else {
    r = int(index / (cols_ + 1));
    c_left = int(index % (cols_ + 1)) - 1;
  }
  return parity(r + c_left) == 0;
}

bool EdgeLayout::ground_vertical(std::size_t index) const {
  // Points up iff the vertex below it is a B vertex.
  int r_below, c;
  if (boundary_ == Boundary::Periodic) {
    r_below = int(index / cols_);
  } else {
    r_below = int(index / cols_) - 1;
  }
  c = int(index % cols_);
  return parity(r_below + c) == 1;
}

// ---------------------------------------------------------------------------
// ArrowConfig / LineConfig

ArrowConfig::ArrowConfig(EdgeLayout layout)
    : layout_(layout),
      horizontal_(layout.horizontal_count(), 0),
      vertical_(layout.vertical_count(), 0) {}

ArrowConfig ArrowConfig::ground_state(const EdgeLayout& layout, bool reversed) {
  ArrowConfig cfg(layout);
  for (std::size_t i = 0; i < cfg.horizontal_.size(); ++i) {
    cfg.horizontal_[i] = layout.ground_horizontal(i) != reversed;
  }
  for (std::size_t i = 0; i < cfg.vertical_.size(); ++i) {
    cfg.vertical_[i] = layout.ground_vertical(i) != reversed;
  }
  return cfg;
}

IncidentArrows ArrowConfig::incident(int r, int c) const {
  return {horizontal(layout_.left(r, c)), !vertical(layout_.top(r, c)),
          !horizontal(layout_.right(r, c)), vertical(layout_.bottom(r, c))};
}

ArrowConfig ArrowConfig::reversed() const {
  ArrowConfig out = *this;
  for (auto& b : out.horizontal_) b = !b;
  for (auto& b : out.vertical_) b = !b;
  return out;
}

std::string ArrowConfig::serialize() const {
  std::string out = "H:";
  for (auto b : horizontal_) out.push_back(b ? '1' : '0');
  out += ";V:";
  for (auto b : vertical_) out.push_back(b ? '1' : '0');
  return out;
}

ArrowConfig ArrowConfig::parse(std::string_view text, const EdgeLayout& layout) {
  ArrowConfig cfg(layout);
  const auto sep = text.find(";V:");
  if (text.substr(0, 2) != "H:" || sep == std::string_view::npos) {
    throw InvalidArgument("arrow config must look like H:<bits>;V:<bits>");
  }
  const auto h = text.substr(2, sep - 2);
  const auto v = text.substr(sep + 3);
  if (h.size() != cfg.horizontal_.size() || v.size() != cfg.vertical_.size()) {
    throw InvalidArgument("arrow config bit count does not match the layout");
  }
  auto fill = [](std::string_view bits, std::vector<std::uint8_t>& dst) {
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != '0' && bits[i] != '1') throw InvalidArgument("arrow bits must be 0 or 1");
      dst[i] = bits[i] == '1';
    }
  };
  fill(h, cfg.horizontal_);
  fill(v, cfg.vertical_);
  return cfg;
}

LineConfig::LineConfig(EdgeLayout layout)
    : layout_(layout),
      horizontal_(layout.horizontal_count(), 0),
      vertical_(layout.vertical_count(), 0) {}

IncidentLines LineConfig::incident(int r, int c) const {
  return {horizontal(layout_.left(r, c)), vertical(layout_.top(r, c)),
          horizontal(layout_.right(r, c)), vertical(layout_.bottom(r, c))};
}

std::size_t LineConfig::occupied_count() const {
  std::size_t n = 0;
  for (auto b : horizontal_) n += b;
  for (auto b : vertical_) n += b;
  return n;
}

// ---------------------------------------------------------------------------
// Operations

VertexState classify_vertex(const ArrowConfig& config, int r, int c) {
  const IncidentArrows in = config.incident(r, c);
  for (int s = 0; s < 6; ++s) {
    if (kPatterns[s] == in) return VertexState(s + 1);
  }
  throw IceRuleViolation("vertex (" + std::to_string(r) + ", " + std::to_string(c) +
                         ") is not two-in/two-out");
}

double reduced_hamiltonian(const ArrowConfig& config, const ModelParams& params) {
  const auto& layout = config.layout();
  double h = 0.0;
  for (int r = 0; r < layout.rows(); ++r) {
    for (int c = 0; c < layout.cols(); ++c) {
      h -= vertex_energy(classify_vertex(config, r, c), sublattice_of(r, c), params);
    }
  }
  return h;
}

LineConfig line_representation(const ArrowConfig& config) {
  const auto& layout = config.layout();
  for (int r = 0; r < layout.rows(); ++r) {
    for (int c = 0; c < layout.cols(); ++c) classify_vertex(config, r, c);
  }
  LineConfig lines(layout);
  for (std::size_t i = 0; i < layout.horizontal_count(); ++i) {
    lines.set_horizontal(i, config.horizontal(i) != layout.ground_horizontal(i));
  }
  for (std::size_t i = 0; i < layout.vertical_count(); ++i) {
    lines.set_vertical(i, config.vertical(i) != layout.ground_vertical(i));
  }
  return lines;
}

Enumeration enumerate_partition(const ModelParams& params, bool keep_configs) {
  const EdgeLayout layout(params.rows(), params.cols(), params.boundary());
  const int rows = params.rows();
  const int cols = params.cols();

  struct EdgeRef {
    bool horizontal;
    std::size_t index;
  };
  // Free edges in vertex order: each vertex contributes its right then top edge.
  std::vector<EdgeRef> order;
  std::vector<int> h_pos(layout.horizontal_count(), -1);
  std::vector<int> v_pos(layout.vertical_count(), -1);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const auto ri = layout.right(r, c);
      if (!layout.is_boundary_horizontal(ri)) {
        h_pos[ri] = int(order.size());
        order.push_back({true, ri});
      }
      const auto ti = layout.top(r, c);
      if (!layout.is_boundary_vertical(ti)) {
        v_pos[ti] = int(order.size());
        order.push_back({false, ti});
      }
    }
  }
  if (order.size() > kMaxFreeEdges) {
    throw TooLarge(std::to_string(order.size()) + " free edges exceed the enumeration bound of " +
                   std::to_string(kMaxFreeEdges));
  }

  // checks[k + 1]: vertices whose last free edge is order[k]; checks[0]: no free edge.
  std::vector<std::vector<std::pair<int, int>>> checks(order.size() + 1);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int last = std::max({h_pos[layout.left(r, c)], h_pos[layout.right(r, c)],
                                 v_pos[layout.top(r, c)], v_pos[layout.bottom(r, c)]});
      checks[last + 1].emplace_back(r, c);
    }
  }

  ArrowConfig cfg = ArrowConfig::ground_state(layout);
  Enumeration result;
  auto ice_ok = [&](std::size_t slot) {
    for (auto [r, c] : checks[slot]) {
      const auto in = cfg.incident(r, c);
      if (int(in.left_in) + int(in.top_in) + int(in.right_in) + int(in.bottom_in) != 2) {
        return false;
      }
    }
    return true;
  };

  if (!ice_ok(0)) return result;
  std::function<void(std::size_t)> descend = [&](std::size_t k) {
    if (k == order.size()) {
      const double h = reduced_hamiltonian(cfg, params);
      const double w = std::exp(h);
      result.partition_function += w;
      if (keep_configs) result.configs.push_back({cfg, h, w});
      return;
    }
    for (bool bit : {false, true}) {
      if (order[k].horizontal) {
        cfg.set_horizontal(order[k].index, bit);
      } else {
        cfg.set_vertical(order[k].index, bit);
      }
      if (ice_ok(k + 1)) descend(k + 1);
    }
  };
  descend(0);
  return result;
}

}  // namespace vertex_expand::model
