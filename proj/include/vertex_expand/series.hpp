#pragma once

// Exact rational power series and the singular free-energy series built on
// them: the Stirling bracket of the squared central binomial coefficient,
// the singular parts of U_p(t) = sum_n exp(-n t) / n^p, the t- and beta*s-
// expansions of the singular free energy, and the ln^2 amplitude B2 at first
// order in U.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace vertex_expand::series {

using Rational = boost::multiprecision::cpp_rational;

/// "p/q", or "p" for integers.
std::string to_string(const Rational& q);
Rational parse_rational(std::string_view text);
double to_double(const Rational& q);

/// Truncated power series sum_k c_k x^k. Coefficients of degree below
/// precision() are exact; everything from precision() on is unknown.
class RationalSeries {
 public:
  RationalSeries() = default;
  RationalSeries(std::vector<Rational> coefficients, int precision);

  static RationalSeries constant(const Rational& c, int precision);
  static RationalSeries variable(int precision);  // x
  static RationalSeries monomial(const Rational& c, int degree, int precision);

  int precision() const noexcept { return precision_; }
  /// Lowest degree with a nonzero coefficient (precision() if none).
  int valuation() const;
  /// Coefficient of x^k; throws for k >= precision().
  Rational operator[](int k) const;
  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }

  RationalSeries truncated(int precision) const;
  RationalSeries derivative() const;
  /// this(inner(x)); needs inner(0) = 0 (CompositionAtNonzero).
  RationalSeries compose(const RationalSeries& inner) const;
  /// 1 / this; needs a nonzero constant term (DivisionByZeroSeries).
  RationalSeries reciprocal() const;
  /// this(c x).
  RationalSeries scaled_argument(const Rational& c) const;

  RationalSeries operator-() const;
  friend RationalSeries operator+(const RationalSeries& a, const RationalSeries& b);
  friend RationalSeries operator-(const RationalSeries& a, const RationalSeries& b);
  friend RationalSeries operator*(const RationalSeries& a, const RationalSeries& b);
  friend RationalSeries operator*(const Rational& s, const RationalSeries& a);

  bool operator==(const RationalSeries& o) const;

 private:
  void normalize();

  std::vector<Rational> coeffs_;  // size == precision_
  int precision_ = 0;
};

/// exp(a) for a(0) = 0.
RationalSeries exp(const RationalSeries& a);
/// ln(1 + a) for a(0) = 0.
RationalSeries log1p(const RationalSeries& a);
/// arcsin(a) for a(0) = 0.
RationalSeries arcsin(const RationalSeries& a);
/// cosh(x) - 1 to the given precision.
RationalSeries cosh_minus_one(int precision);

enum class SeriesOp { Add, Mul, Compose, Differentiate, Reciprocal };
RationalSeries series_arith(const RationalSeries& a, const RationalSeries& b, SeriesOp op);

/// Exact q * pi^(-k).
class PiRational {
 public:
  PiRational() = default;
  PiRational(Rational q, int pi_power);

  const Rational& q() const noexcept { return q_; }
  int pi_power() const noexcept { return pi_power_; }
  double value() const;

  friend PiRational operator*(const PiRational& a, const PiRational& b);
  /// Throws InvalidArgument on division by zero or a negative result power.
  friend PiRational operator/(const PiRational& a, const PiRational& b);
  friend PiRational operator*(const Rational& s, const PiRational& a);
  bool operator==(const PiRational& o) const;

  /// "{q, pi_power}" text form, e.g. "{-1/4, 1}".
  std::string to_string() const;

 private:
  Rational q_ = 0;
  int pi_power_ = 0;
};

/// Exact finite sum of PiRational terms, sum_k q_k pi^(-k).
class PiPolynomial {
 public:
  PiPolynomial() = default;
  explicit PiPolynomial(const PiRational& term);

  const std::map<int, Rational>& terms() const noexcept { return terms_; }
  bool is_monomial() const { return terms_.size() <= 1; }
  /// The single term; throws InvalidArgument when not a monomial.
  PiRational as_monomial() const;
  double value() const;

  PiPolynomial& operator+=(const PiPolynomial& o);
  friend PiPolynomial operator+(PiPolynomial a, const PiPolynomial& b) { return a += b; }
  bool operator==(const PiPolynomial& o) const;

 private:
  void add(int power, const Rational& q);
  std::map<int, Rational> terms_;  // no zero entries
};

/// scale * series(x) * ln^log_power(x). For log_power = 1 this is the
/// singular part of a function with a logarithmic branch point at x = 0;
/// regular parts are not represented.
struct LogSeries {
  RationalSeries series;
  PiRational scale;
  int log_power = 1;

  /// Moves the leading coefficient into the scale so the series starts at 1.
  LogSeries normalized() const;
  /// Coefficients from the valuation in steps of `step`, through max_degree.
  std::vector<Rational> bracket(int max_degree, int step = 1) const;
  /// scale times the leading coefficient.
  PiRational leading_amplitude() const;
  double evaluate(double x) const;
};

/// B_2, B_4, ..., B_{2 k_max}; k_max <= 32.
std::vector<Rational> bernoulli_numbers(int k_max);

/// Expansion of pi n [(2n)! / (4^n n!^2)]^2 in x = 1/n through x^K, K <= 16.
RationalSeries stirling_correction(int order);

/// Singular part of U_p(t): (-1)^p t^(p-1) / (p-1)! ln t.
LogSeries u_p_singular(int p);

/// Singular part of the free energy in t = ln cosh^2(2 beta s), through t^K
/// (K <= 8): -(1/4pi)(t + t^2/8 + ...) ln t.
LogSeries singular_t_series(int order);

/// t = 2 ln cosh(2 beta s) as a series in beta s through degree K (even, <= 16).
RationalSeries t_of_betas(int order);

/// Singular part in beta s through degree K (<= 8), with ln t replaced by
/// 2 ln|beta s|: -(2/pi)(bs^2 - bs^4/6 + ...) ln|bs|.
LogSeries singular_betas_series(int order);

/// Amplitude B2 of U (bs)^2-series ln^2|bs| at first order in U, through
/// degree K (<= 8): B2 = (2/pi^2) g'(bs)^2 with g the bracket above.
LogSeries b2_series(int order);

}  // namespace vertex_expand::series
