#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "json.hpp"
#include "vertex_expand/coulomb.hpp"
#include "vertex_expand/errors.hpp"
#include "vertex_expand/series.hpp"

using namespace vertex_expand;
using namespace vertex_expand::coulomb;
using series::PiPolynomial;
using series::PiRational;

namespace {
constexpr double kPi = std::numbers::pi;
const double kFreeFermion = 0.5 * std::numbers::ln2;
const double kThreshold = 0.5 * std::log(2.0 - std::numbers::sqrt2);
}  // namespace

TEST(J, SpecialPoints) {
  EXPECT_NEAR(j_of_betaeps(kFreeFermion), kPi / 4, 1e-15);
  EXPECT_EQ(j_of_u(0.0), kPi / 4);
  EXPECT_NEAR(j_of_betaeps(kThreshold), kPi / 8, 1e-14);
  EXPECT_LT(j_of_betaeps(-40.0), 1e-8);
  EXPECT_NEAR(j_of_betaeps(std::numbers::ln2), kPi / 2, 1e-15);
  EXPECT_THROW(j_of_betaeps(0.7), OutOfDomain);
  EXPECT_THROW(j_of_u(1.0), OutOfDomain);
}

TEST(J, MonotoneIncreasing) {
  double prev = j_of_betaeps(-3.0);
  for (double be = -2.9; be < std::numbers::ln2; be += 0.05) {
    const double j = j_of_betaeps(be);
    EXPECT_GT(j, prev);
    prev = j;
  }
}

TEST(Exponent, FreeFermionPoint) {
  EXPECT_EQ(singular_exponent_u(0.0).value, 2.0);
  EXPECT_FALSE(singular_exponent_u(0.0).divergent);
  EXPECT_NEAR(singular_exponent(kFreeFermion).value, 2.0, 1e-14);
}

TEST(Exponent, Divergence) {
  EXPECT_DOUBLE_EQ(kt_threshold(), kThreshold);
  EXPECT_TRUE(singular_exponent(kThreshold).divergent);
  EXPECT_TRUE(std::isinf(singular_exponent(kThreshold - 0.1).value));
  EXPECT_FALSE(singular_exponent(kThreshold + 1e-9).divergent);
  // Bisection on the sign of the denominator.
  double lo = kThreshold - 0.05, hi = kThreshold + 0.05;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (2.0 - kPi / (4.0 * j_of_betaeps(mid)) > 0.0 ? hi : lo) = mid;
  }
  EXPECT_NEAR(hi, kThreshold, 1e-12);
  EXPECT_NEAR(kThreshold, -0.2674, 1e-4);
}

TEST(Exponent, ZeroEpsIsAboveTwoAndDecreasing) {
  const auto e0 = singular_exponent(0.0);
  EXPECT_FALSE(e0.divergent);
  EXPECT_GT(e0.value, 2.0);
  double prev = singular_exponent(kThreshold + 0.01).value;
  for (double be = kThreshold + 0.02; be < std::numbers::ln2; be += 0.02) {
    const double e = singular_exponent(be).value;
    EXPECT_LT(e, prev);
    prev = e;
  }
}

TEST(Expansion, LowOrders) {
  const auto e = exponent_u_expansion(4);
  ASSERT_EQ(e.size(), 5u);
  EXPECT_EQ(e[0], PiPolynomial(PiRational(2, 0)));
  EXPECT_EQ(e[1], PiPolynomial(PiRational(-8, 1)));
  EXPECT_THROW(exponent_u_expansion(5), InvalidArgument);
}

TEST(Expansion, SlopeByFiniteDifference) {
  const double fd = (singular_exponent_u(1e-5).value - 2.0) / 1e-5;
  EXPECT_NEAR(fd, -8.0 / kPi, 1e-3);
}

TEST(Expansion, AgreesWithExponentAtSmallU) {
  const auto e = exponent_u_expansion(4);
  for (double u : {1e-3, -1e-3}) {
    double sum = 0.0, pow = 1.0;
    for (const auto& c : e) {
      sum += c.value() * pow;
      pow *= u;
    }
    EXPECT_NEAR(sum, singular_exponent_u(u).value, 1e-12) << u;
  }
}

TEST(Verification, AmplitudesAgree) {
  const auto r = verify_first_order();
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.predicted, PiRational(8, 2));
  EXPECT_EQ(r.computed, PiRational(8, 2));
  const auto j = nlohmann::json::parse(r.to_json());
  EXPECT_EQ(j["predicted"], "{8, 2}");
  EXPECT_EQ(j["computed"], "{8, 2}");
  EXPECT_TRUE(j["equal"].get<bool>());
  EXPECT_TRUE(j["details"].is_object());
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"computed", "details", "equal", "predicted"}));
}
