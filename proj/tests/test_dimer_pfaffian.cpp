#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vertex_expand/dimer_pfaffian.hpp"
#include "vertex_expand/errors.hpp"

using namespace vertex_expand;
using namespace vertex_expand::dimer;
using model::Boundary;
using model::ModelParams;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Weights, ZeroField) {
  const auto w = dimer_weights(0.0);
  EXPECT_DOUBLE_EQ(w.external_edge, 1.0);
  EXPECT_DOUBLE_EQ(w.city_edge, std::numbers::sqrt2 / 2);
  EXPECT_NEAR(2 * w.city_edge * w.city_edge, 1.0, 1e-15);
}

TEST(Weights, ProductIndependentOfField) {
  for (double bs : {-1.0, 0.4, 2.0}) {
    const auto w = dimer_weights(bs);
    EXPECT_NEAR(w.city_edge * w.external_edge, std::numbers::sqrt2 / 2, 1e-15);
    EXPECT_NEAR(2 * w.city_edge * w.city_edge, std::exp(bs), 1e-14 * std::exp(bs));
  }
}

TEST(Weights, FreeFermionCondition) {
  for (double bs : {-0.5, 0.0, 0.3, 1.7}) {
    const auto w = dimer_weights(bs);
    EXPECT_NEAR(free_fermion_defect(w), 0.0, 1e-14);
    const auto v = induced_vertex_weights(w);
    EXPECT_NEAR(v[0] * v[1] + v[2] * v[3] - v[4] * v[5], 0.0, 1e-14);
  }
}

TEST(BuildDecorated, RejectsOffFreeFermion) {
  EXPECT_THROW(build_decorated(ModelParams::from_u(1e-6, 0.0, 2, 2, Boundary::FixedGroundState)),
               NotFreeFermion);
  const auto lat = build_decorated(ModelParams::free_fermion(0.2, 2, 3, Boundary::FixedGroundState));
  EXPECT_EQ(lat.graph().node_count(), 24);
  // 4 internal per city, 3 horizontal and 2 vertical... 2x3: 2*2 horizontal + 3 vertical.
  EXPECT_EQ(lat.graph().edges().size(), std::size_t(24 + 4 + 3));
}

TEST(Lattice, EveryNodeHasDegreeAtLeastTwo) {
  const DecoratedLattice lat(3, 4, 0.1);
  std::vector<int> degree(std::size_t(lat.graph().node_count()), 0);
  for (const auto& e : lat.graph().edges()) {
    ++degree[std::size_t(e.u)];
    ++degree[std::size_t(e.v)];
    EXPECT_GT(e.weight, 0.0);
  }
  for (int d : degree) EXPECT_GE(d, 2);
}

TEST(Kasteleyn, SingleCity) {
  for (double bs : {0.0, 0.7}) {
    const DecoratedLattice lat(1, 1, bs);
    const auto r = kasteleyn_orientation(lat);
    EXPECT_EQ(r.dimension(), 4);
    const double u = lat.weights().city_edge;
    EXPECT_NEAR(r.dense().determinant(), std::pow(2 * u * u, 2), 1e-13);
  }
  EXPECT_NEAR(partition_dimer(kasteleyn_orientation(DecoratedLattice(1, 1, 0.0))), 0.0, 1e-15);
}

TEST(Kasteleyn, AuditPassesOnAllBuiltLattices) {
  for (int rows = 1; rows <= 5; ++rows) {
    for (int cols = 1; cols <= 5; ++cols) {
      const DecoratedLattice lat(rows, cols, 0.3);
      const auto r = kasteleyn_orientation(lat);
      const auto audit = audit_orientation(lat, r);
      EXPECT_TRUE(audit.ok()) << rows << "x" << cols;
      EXPECT_EQ(audit.bad_faces, 0u);
      const Eigen::MatrixXd d = r.dense();
      EXPECT_EQ((d + d.transpose()).cwiseAbs().maxCoeff(), 0.0);
    }
  }
}

TEST(Kasteleyn, AuditDetectsFlippedEdge) {
  const DecoratedLattice lat(2, 2, 0.3);
  const auto r = kasteleyn_orientation(lat);
  EXPECT_FALSE(audit_orientation(lat, r.with_flipped_edge(5)).ok());
}

TEST(Kasteleyn, PfaffianMatchesMatchings) {
  for (int rows = 1; rows <= 3; ++rows) {
    for (int cols = 1; cols <= 3; ++cols) {
      for (double bs : {-0.5, 0.0, 0.3}) {
        const DecoratedLattice lat(rows, cols, bs);
        const double z = std::exp(partition_dimer(kasteleyn_orientation(lat)));
        const double m = enumerate_matchings(lat.graph());
        EXPECT_NEAR(z / m, 1.0, 1e-10);
        EXPECT_NEAR(m / oracle::matching_sum(lat.graph()), 1.0, 1e-13);
      }
    }
  }
}

TEST(Kasteleyn, TwoByOneCities) {
  const DecoratedLattice lat(2, 1, 0.25);
  EXPECT_NEAR(std::exp(partition_dimer(kasteleyn_orientation(lat))), enumerate_matchings(lat.graph()),
              1e-12);
}

TEST(Kasteleyn, SingularWhenNodeRemoved) {
  const auto r = kasteleyn_orientation(DecoratedLattice(2, 2, 0.0));
  EXPECT_THROW(partition_dimer(r.without_node(3)), SingularMatrix);
}

TEST(Kasteleyn, SparsePathAgreesWithDenseDeterminant) {
  // 17 x 16 cities = 1088 nodes, above the dense threshold.
  const DecoratedLattice lat(17, 16, 0.2);
  const auto r = kasteleyn_orientation(lat);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(r.dense());
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < lu.matrixLU().rows(); ++i) log_det += std::log(std::abs(lu.matrixLU()(i, i)));
  EXPECT_NEAR(r.log_abs_det(), log_det, 1e-8 * std::abs(log_det));
  const Eigen::MatrixXd inv = lu.inverse();
  EXPECT_NEAR(r.inverse_entry(5, 9), inv(5, 9), 1e-10);
}

TEST(Kasteleyn, ConcurrentInverseQueries) {
  const auto r = kasteleyn_orientation(DecoratedLattice(3, 3, 0.1));
  const Eigen::MatrixXd inv = r.dense().inverse();
  std::vector<std::thread> threads;
  std::vector<double> worst(4, 0.0);
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = t; i < r.dimension(); i += 4) {
        for (int j = 0; j < r.dimension(); ++j) {
          worst[std::size_t(t)] = std::max(worst[std::size_t(t)], std::abs(r.inverse_entry(i, j) - inv(i, j)));
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  for (double w : worst) EXPECT_LT(w, 1e-12);
}

TEST(Kasteleyn, GoldenDump) {
  const auto r = kasteleyn_orientation(DecoratedLattice(2, 2, 0.3));
  EXPECT_EQ(r.dump(), read_file(std::string(VERTEX_EXPAND_GOLDEN_DIR) + "/kasteleyn_2x2_bs0.3.txt"));
}

TEST(Matchings, SmallGraphs) {
  WeightedGraph path(2);
  path.add_edge(0, 1, 2.5);
  EXPECT_DOUBLE_EQ(enumerate_matchings(path), 2.5);
  const DecoratedLattice city(1, 1, 0.0);
  EXPECT_NEAR(enumerate_matchings(city.graph()), 2 * std::pow(city.weights().city_edge, 2), 1e-15);
  EXPECT_THROW(enumerate_matchings(DecoratedLattice(3, 4, 0.0).graph()), TooLarge);
}
