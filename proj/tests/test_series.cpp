#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "vertex_expand/errors.hpp"
#include "vertex_expand/series.hpp"
#include "vertex_expand/thermo.hpp"

using namespace vertex_expand;
using namespace vertex_expand::series;

namespace {

RationalSeries poly(std::vector<const char*> c, int precision) {
  std::vector<Rational> q;
  for (const char* s : c) q.push_back(parse_rational(s));
  q.resize(std::size_t(precision), Rational(0));
  return {q, precision};
}

std::vector<Rational> fracs(std::vector<const char*> c) {
  std::vector<Rational> q;
  for (const char* s : c) q.push_back(parse_rational(s));
  return q;
}

// Taylor coefficients of e^x - 1 computed by hand.
RationalSeries expm1_series(int precision) {
  std::vector<Rational> c(std::size_t(precision), Rational(0));
  Rational f = 1;
  for (int k = 1; k < precision; ++k) {
    f *= k;
    c[std::size_t(k)] = Rational(1) / f;
  }
  return {c, precision};
}

}  // namespace

TEST(Rationals, TextRoundTrip) {
  EXPECT_EQ(to_string(parse_rational("-6/8")), "-3/4");
  EXPECT_EQ(to_string(parse_rational("5")), "5");
  EXPECT_THROW(parse_rational("1/0"), InvalidArgument);
  EXPECT_THROW(parse_rational("x"), InvalidArgument);
  EXPECT_EQ(PiRational(parse_rational("-1/4"), 1).to_string(), "{-1/4, 1}");
}

TEST(SeriesArith, Product) {
  const auto p = series_arith(poly({"1", "1"}, 4), poly({"1", "-1"}, 4), SeriesOp::Mul);
  EXPECT_EQ(p, poly({"1", "0", "-1"}, 4));
  EXPECT_EQ(p.precision(), 4);
}

TEST(SeriesArith, Derivative) {
  const auto d = series_arith(poly({"0", "0", "0", "1/6"}, 5), {}, SeriesOp::Differentiate);
  EXPECT_EQ(d, poly({"0", "0", "1/2"}, 4));
}

TEST(SeriesArith, LogOfExpIsIdentity) {
  for (int k : {2, 6, 12}) {
    const auto ln = log1p(RationalSeries::variable(k));
    EXPECT_EQ(series_arith(ln, expm1_series(k), SeriesOp::Compose), RationalSeries::variable(k));
    EXPECT_EQ(exp(ln) - RationalSeries::constant(1, k), RationalSeries::variable(k));
  }
}

TEST(SeriesArith, ReciprocalAndArcsin) {
  const auto one_minus_x = poly({"1", "-1"}, 6);
  EXPECT_EQ(one_minus_x.reciprocal(), poly({"1", "1", "1", "1", "1", "1"}, 6));
  // arcsin x = x + x^3/6 + 3x^5/40.
  EXPECT_EQ(arcsin(RationalSeries::variable(6)), poly({"0", "1", "0", "1/6", "0", "3/40"}, 6));
}

TEST(SeriesArith, PrecisionPropagation) {
  const auto a = poly({"1", "2", "3"}, 6);
  const auto b = poly({"1"}, 3);
  EXPECT_EQ((a + b).precision(), 3);
  EXPECT_EQ((a * b).precision(), 3);
  // Outer known to O(y^3) gives O(x^6); the O(x^4) of the inner series
  // enters through the linear term and wins.
  const auto inner = poly({"0", "0", "1"}, 4);
  EXPECT_EQ(poly({"1", "1", "1"}, 3).compose(inner).precision(), 4);
  EXPECT_EQ(poly({"1", "0", "1"}, 3).compose(inner).precision(), 6);
  EXPECT_EQ(RationalSeries::monomial(1, 2, 5).valuation(), 2);
  EXPECT_THROW(a[6], InvalidArgument);
}

TEST(SeriesArith, Errors) {
  EXPECT_THROW(series_arith(poly({"1", "1"}, 3), poly({"1", "1"}, 3), SeriesOp::Compose),
               CompositionAtNonzero);
  EXPECT_THROW(series_arith(RationalSeries::variable(3), {}, SeriesOp::Reciprocal), DivisionByZeroSeries);
  EXPECT_THROW(exp(poly({"1"}, 3)), CompositionAtNonzero);
}

TEST(PiNumbers, Arithmetic) {
  const PiRational a(parse_rational("-2"), 1);
  EXPECT_EQ(a * a, PiRational(4, 2));
  EXPECT_EQ(PiRational(8, 2) / PiRational(-8, 1), PiRational(-1, 1));
  EXPECT_THROW(PiRational(1, 0) / PiRational(1, 2), InvalidArgument);
  EXPECT_NEAR(PiRational(8, 2).value(), 8 / (std::numbers::pi * std::numbers::pi), 1e-15);
  PiPolynomial p(PiRational(2, 0));
  p += PiPolynomial(PiRational(-3, 1));
  EXPECT_FALSE(p.is_monomial());
  EXPECT_NEAR(p.value(), 2 - 3 / std::numbers::pi, 1e-15);
  p += PiPolynomial(PiRational(3, 1));
  EXPECT_EQ(p.as_monomial(), PiRational(2, 0));
}

TEST(Bernoulli, KnownValues) {
  const auto b = bernoulli_numbers(6);
  EXPECT_EQ(b[0], parse_rational("1/6"));
  EXPECT_EQ(b[1], parse_rational("-1/30"));
  EXPECT_EQ(b[2], parse_rational("1/42"));
  EXPECT_EQ(b[3], parse_rational("-1/30"));
  EXPECT_EQ(b[4], parse_rational("5/66"));
  EXPECT_EQ(b[5], parse_rational("-691/2730"));
  EXPECT_EQ(bernoulli_numbers(32).back(), bernoulli_numbers(32).back());
  EXPECT_THROW(bernoulli_numbers(33), InvalidArgument);
}

TEST(Stirling, Bracket) {
  EXPECT_EQ(stirling_correction(3).coefficients(), fracs({"1", "-1/4", "1/32", "1/128"}));
}

TEST(Stirling, MatchesCentralBinomialAtLargeN) {
  const auto s = stirling_correction(8);
  for (int n : {40, 200}) {
    double c = 1.0;
    for (int k = 1; k <= n; ++k) c *= (2.0 * k - 1) / (2.0 * k);
    double bracket = 0.0;
    for (int k = 8; k >= 0; --k) bracket = bracket / n + to_double(s[k]);
    EXPECT_NEAR(std::numbers::pi * n * c * c, bracket, 1e-13);
  }
}

TEST(USingular, LowOrders) {
  const auto u1 = u_p_singular(1);
  EXPECT_EQ(u1.series.coefficients(), fracs({"-1"}));
  EXPECT_EQ(u_p_singular(2).series.coefficients(), fracs({"0", "1"}));
  EXPECT_THROW(u_p_singular(0), InvalidArgument);
}

TEST(USingular, DerivativeRecurrence) {
  for (int p = 1; p <= 7; ++p) {
    EXPECT_EQ(u_p_singular(p + 1).series.derivative(), -u_p_singular(p).series) << p;
  }
}

TEST(FreeEnergySeries, TForm) {
  const auto f = singular_t_series(4);
  EXPECT_EQ(f.bracket(4), fracs({"1", "1/8", "1/192", "-1/3072"}));
  EXPECT_EQ(f.scale, PiRational(parse_rational("-1/4"), 1));
}

TEST(FreeEnergySeries, TOfBetaS) {
  const auto t = t_of_betas(16);
  EXPECT_EQ(t[2], 4);
  EXPECT_EQ(t[4], parse_rational("-8/3"));
  EXPECT_EQ(t[6], parse_rational("128/45"));
  for (int k = 1; k < 16; k += 2) EXPECT_EQ(t[k], 0);
  double v = 0.0;
  for (int k = 16; k >= 0; --k) v = v * 0.1 + to_double(t[k]);
  EXPECT_NEAR(v, 2 * std::log(std::cosh(0.2)), 1e-12);
  EXPECT_THROW(t_of_betas(5), InvalidArgument);
}

TEST(FreeEnergySeries, BetaSForm) {
  const auto s = singular_betas_series(8);
  EXPECT_EQ(s.bracket(8, 2), fracs({"1", "-1/6", "23/180", "-593/5040"}));
  EXPECT_EQ(s.scale, PiRational(-2, 1));
  for (int k = 1; k < 9; k += 2) EXPECT_EQ(s.series[k], 0);
}

TEST(FreeEnergySeries, SingularPartRemovesTheLogFromCurvature) {
  // (F(h) - F(0)) / h^2 grows like ln h; after subtracting the singular part
  // it settles to a constant.
  thermo::QuadratureSpec spec;
  spec.tolerance = 1e-14;
  const auto s = singular_betas_series(8);
  const double f0 = thermo::baxter_free_energy(0.0, spec).value;
  auto curvature = [&](double h, bool subtract) {
    const double f = thermo::baxter_free_energy(h, spec).value - (subtract ? s.evaluate(h) : 0.0);
    return (f - f0) / (h * h);
  };
  const double raw = curvature(0.02, false) - curvature(0.01, false);
  const double reg = curvature(0.02, true) - curvature(0.01, true);
  EXPECT_NEAR(raw, -(2 / std::numbers::pi) * std::log(2.0), 1e-3);
  EXPECT_LT(std::abs(reg), 1e-3);
}

TEST(B2, Bracket) {
  const auto b = b2_series(6);
  EXPECT_EQ(b.bracket(6, 2), fracs({"1", "-2/3", "79/90"}));
  EXPECT_EQ(b.scale, PiRational(8, 2));
  EXPECT_EQ(b.log_power, 2);
}

TEST(B2, SixthOrderFromPrintedBracket) {
  // g = bs^2 - bs^4/6 + 23/180 bs^6; B2 = (2/pi^2) g'^2.
  const auto g = poly({"0", "0", "1", "0", "-1/6", "0", "23/180"}, 8);
  const auto gp = g.derivative();
  const auto sq = gp * gp;
  EXPECT_EQ(Rational(2) * sq[6], parse_rational("316/45"));
  const auto b = b2_series(6);
  EXPECT_EQ(b.scale.q() * b.series[6], parse_rational("316/45"));
  EXPECT_EQ(b.scale.pi_power(), 2);
}

TEST(Determinism, RepeatedPipelinesAgree) {
  EXPECT_EQ(b2_series(8).series, b2_series(8).series);
  EXPECT_EQ(singular_betas_series(8).series, singular_betas_series(8).series);
  EXPECT_THROW(b2_series(9), InvalidArgument);
  EXPECT_THROW(singular_t_series(0), InvalidArgument);
}
