#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vertex_expand/errors.hpp"
#include "vertex_expand/vertex_model.hpp"

using namespace vertex_expand;
using namespace vertex_expand::model;

TEST(VertexState, ArrowsRoundTripThroughClassification) {
  for (int s = 1; s <= 6; ++s) {
    const auto a = arrows_of(VertexState(s));
    EXPECT_EQ(int(a.left_in) + int(a.top_in) + int(a.right_in) + int(a.bottom_in), 2);
    // Build a 1x1 fixed config and overwrite its four edges with the pattern.
    EdgeLayout layout(1, 1, Boundary::FixedGroundState);
    ArrowConfig cfg(layout);
    cfg.set_horizontal(layout.left(0, 0), a.left_in);      // in from the left: points right
    cfg.set_horizontal(layout.right(0, 0), !a.right_in);   // in from the right: points left
    cfg.set_vertical(layout.bottom(0, 0), a.bottom_in);    // in from below: points up
    cfg.set_vertical(layout.top(0, 0), !a.top_in);
    EXPECT_EQ(classify_vertex(cfg, 0, 0).value(), s);
  }
  EXPECT_THROW(VertexState(7), InvalidArgument);
}

TEST(VertexState, GroundStateAssignment) {
  EXPECT_EQ(VertexState::ground(Sublattice::A).value(), 6);
  EXPECT_EQ(VertexState::ground(Sublattice::B).value(), 5);
  EXPECT_EQ(VertexState::reversed_ground(Sublattice::A).value(), 5);
  for (auto sub : {Sublattice::A, Sublattice::B}) {
    EXPECT_EQ(lines_of(VertexState::ground(sub), sub).count(), 0);
    EXPECT_EQ(lines_of(VertexState::reversed_ground(sub), sub).count(), 4);
    for (int s = 1; s <= 4; ++s) EXPECT_EQ(lines_of(VertexState(s), sub).count(), 2);
  }
}

TEST(VertexEnergy, MatchesTable) {
  const auto p = ModelParams::from_beta_eps(0.7, 0.3, 2, 2, Boundary::Periodic);
  for (int s = 1; s <= 6; ++s) {
    for (auto sub : {Sublattice::A, Sublattice::B}) {
      EXPECT_DOUBLE_EQ(-vertex_energy(VertexState(s), sub, p),
                       oracle::vertex_h(s, sub == Sublattice::A, 0.7, 0.3));
    }
  }
}

TEST(ModelParams, Validation) {
  EXPECT_THROW(ModelParams::free_fermion(0.0, 3, 2, Boundary::Periodic), InvalidArgument);
  EXPECT_THROW(ModelParams::free_fermion(0.0, 0, 2, Boundary::FixedGroundState), InvalidArgument);
  EXPECT_NO_THROW(ModelParams::free_fermion(0.0, 3, 3, Boundary::FixedGroundState));
  EXPECT_DOUBLE_EQ(ModelParams::from_u(0.1, 0.0, 1, 1, Boundary::FixedGroundState).beta_eps(),
                   kFreeFermionBetaEps + 0.1);
  EXPECT_EQ(parse_boundary("periodic"), Boundary::Periodic);
  EXPECT_EQ(parse_boundary("fixed"), Boundary::FixedGroundState);
  EXPECT_THROW(parse_boundary("open"), InvalidArgument);
}

TEST(ArrowConfig, GroundStateLinesAreEmpty) {
  for (auto b : {Boundary::Periodic, Boundary::FixedGroundState}) {
    EdgeLayout layout(4, 4, b);
    const auto ground = ArrowConfig::ground_state(layout);
    EXPECT_EQ(line_representation(ground).occupied_count(), 0u);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        EXPECT_EQ(classify_vertex(ground, r, c), VertexState::ground(sublattice_of(r, c)));
      }
    }
  }
}

TEST(ArrowConfig, ReversedGroundStateHasFourLinesEverywhere) {
  EdgeLayout layout(4, 2, Boundary::Periodic);
  const auto rev = ArrowConfig::ground_state(layout, true);
  const auto lines = line_representation(rev);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 2; ++c) {
      EXPECT_EQ(lines.incident(r, c).count(), 4);
      EXPECT_EQ(classify_vertex(rev, r, c), VertexState::reversed_ground(sublattice_of(r, c)));
    }
  }
  EXPECT_EQ(rev, ArrowConfig::ground_state(layout).reversed());
}

TEST(ArrowConfig, SerializeRoundTrip) {
  EdgeLayout layout(2, 3, Boundary::FixedGroundState);
  const auto params = ModelParams::free_fermion(0.2, 2, 3, Boundary::FixedGroundState);
  for (const auto& wc : enumerate_partition(params).configs) {
    const auto text = wc.config.serialize();
    EXPECT_EQ(text.rfind("H:", 0), 0u);
    EXPECT_EQ(ArrowConfig::parse(text, layout), wc.config);
  }
  EXPECT_THROW(ArrowConfig::parse("H:1;V:0", layout), InvalidArgument);
}

TEST(ArrowConfig, IceRuleViolationDetected) {
  EdgeLayout layout(2, 2, Boundary::FixedGroundState);
  auto cfg = ArrowConfig::ground_state(layout);
  cfg.set_horizontal(layout.right(0, 0), !cfg.horizontal(layout.right(0, 0)));
  EXPECT_THROW(classify_vertex(cfg, 0, 0), IceRuleViolation);
  EXPECT_THROW(reduced_hamiltonian(cfg, ModelParams::free_fermion(0, 2, 2, Boundary::FixedGroundState)),
               IceRuleViolation);
}

TEST(Enumeration, SingleFixedVertex) {
  const auto e = enumerate_partition(ModelParams::free_fermion(0.3, 1, 1, Boundary::FixedGroundState));
  ASSERT_EQ(e.configs.size(), 1u);
  EXPECT_NEAR(e.partition_function, std::exp(0.3), 1e-15);
}

TEST(Enumeration, EveryConfigurationObeysIceRuleAndLineParity) {
  for (auto [rows, cols, b] : {std::tuple{2, 2, Boundary::Periodic}, std::tuple{2, 4, Boundary::Periodic},
                               std::tuple{3, 3, Boundary::FixedGroundState}}) {
    const auto params = ModelParams::from_u(0.2, 0.4, rows, cols, b);
    const auto e = enumerate_partition(params);
    double z = 0.0;
    for (const auto& wc : e.configs) {
      const auto lines = line_representation(wc.config);
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          EXPECT_NO_THROW(classify_vertex(wc.config, r, c));
          EXPECT_EQ(lines.incident(r, c).count() % 2, 0);
        }
      }
      EXPECT_NEAR(wc.hamiltonian, reduced_hamiltonian(wc.config, params), 1e-12);
      z += wc.weight;
    }
    EXPECT_NEAR(z, e.partition_function, 1e-12 * z);
  }
}

TEST(Enumeration, ArrowReversalMapsFieldToMinusField) {
  for (double bs : {0.3, -0.7}) {
    const auto p = ModelParams::from_u(0.1, bs, 2, 4, Boundary::Periodic);
    const auto plus = enumerate_partition(p);
    const auto minus = enumerate_partition(p.with_beta_s(-bs));
    EXPECT_NEAR(plus.partition_function, minus.partition_function, 1e-12 * plus.partition_function);
    for (const auto& wc : plus.configs) {
      EXPECT_NEAR(wc.hamiltonian, reduced_hamiltonian(wc.config.reversed(), p.with_beta_s(-bs)), 1e-12);
    }
  }
}

TEST(Enumeration, LargeEpsLeavesTwoGroundStates) {
  const auto p = ModelParams::from_beta_eps(40.0, 0.0, 2, 2, Boundary::Periodic);
  EXPECT_NEAR(enumerate_partition(p, false).partition_function / 2.0, 1.0, 1e-12);
}

TEST(Enumeration, SmallestPeriodicLoop) {
  // On the 2x2 torus the configurations with exactly two lines per vertex
  // exist and carry only two-line vertices.
  const auto e = enumerate_partition(ModelParams::free_fermion(0.0, 2, 2, Boundary::Periodic));
  int two_line_only = 0;
  for (const auto& wc : e.configs) {
    const auto lines = line_representation(wc.config);
    bool all_two = true;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) all_two = all_two && lines.incident(r, c).count() == 2;
    two_line_only += all_two;
  }
  EXPECT_GT(two_line_only, 0);
}

TEST(Enumeration, TooLarge) {
  EXPECT_THROW(enumerate_partition(ModelParams::free_fermion(0.0, 4, 4, Boundary::Periodic)), TooLarge);
}

TEST(Enumeration, DeterministicOrder) {
  const auto p = ModelParams::free_fermion(0.1, 2, 3, Boundary::FixedGroundState);
  const auto a = enumerate_partition(p);
  const auto b = enumerate_partition(p);
  ASSERT_EQ(a.configs.size(), b.configs.size());
  for (std::size_t i = 0; i < a.configs.size(); ++i) EXPECT_EQ(a.configs[i].config, b.configs[i].config);
  EXPECT_EQ(a.partition_function, b.partition_function);
}
