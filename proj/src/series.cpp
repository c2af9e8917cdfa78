#include "vertex_expand/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vertex_expand/errors.hpp"

namespace vertex_expand::series {

namespace {

using boost::multiprecision::cpp_int;

// Coefficients of a * b below `len`, ignoring precision bookkeeping.
std::vector<Rational> mul_raw(const std::vector<Rational>& a, const std::vector<Rational>& b,
                              int len) {
  std::vector<Rational> out(static_cast<std::size_t>(std::max(len, 0)));
  for (std::size_t i = 0; i < a.size() && int(i) < len; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && int(i + j) < len; ++j) {
      if (b[j] != 0) out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

Rational factorial(int n) {
  cpp_int f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return Rational(f);
}

cpp_int binomial(int n, int k) {
  cpp_int b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

std::string to_string(const Rational& q) {
  const cpp_int num = boost::multiprecision::numerator(q);
  const cpp_int den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(cpp_int(std::string(text)));
    const cpp_int num(std::string(text.substr(0, slash)));
    const cpp_int den(std::string(text.substr(slash + 1)));
    if (den == 0) throw InvalidArgument("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw InvalidArgument("malformed rational '" + std::string(text) + "'");
  }
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

// ---------------------------------------------------------------------------
// RationalSeries

RationalSeries::RationalSeries(std::vector<Rational> coefficients, int precision)
    : coeffs_(std::move(coefficients)), precision_(precision) {
  if (precision < 0) throw InvalidArgument("series precision must be >= 0");
  normalize();
}

void RationalSeries::normalize() { coeffs_.resize(std::size_t(precision_)); }

RationalSeries RationalSeries::constant(const Rational& c, int precision) {
  return RationalSeries({c}, precision);
}

RationalSeries RationalSeries::variable(int precision) {
  return RationalSeries({Rational(0), Rational(1)}, precision);
}

RationalSeries RationalSeries::monomial(const Rational& c, int degree, int precision) {
  std::vector<Rational> coeffs(static_cast<std::size_t>(std::max(degree + 1, 0)));
  if (degree >= 0) coeffs[std::size_t(degree)] = c;
  return RationalSeries(std::move(coeffs), precision);
}

int RationalSeries::valuation() const {
  for (int k = 0; k < precision_; ++k) {
    if (coeffs_[std::size_t(k)] != 0) return k;
  }
  return precision_;
}

Rational RationalSeries::operator[](int k) const {
  if (k < 0 || k >= precision_) {
    throw InvalidArgument("coefficient of degree " + std::to_string(k) +
                          " is beyond the series precision " + std::to_string(precision_));
  }
  return coeffs_[std::size_t(k)];
}

RationalSeries RationalSeries::truncated(int precision) const {
  return RationalSeries(coeffs_, std::min(precision, precision_));
}

RationalSeries RationalSeries::derivative() const {
  if (precision_ == 0) return *this;
  std::vector<Rational> d(static_cast<std::size_t>(precision_ - 1));
  for (int k = 1; k < precision_; ++k) d[std::size_t(k - 1)] = coeffs_[std::size_t(k)] * k;
  return RationalSeries(std::move(d), precision_ - 1);
}

RationalSeries RationalSeries::compose(const RationalSeries& inner) const {
  if (inner.precision_ == 0 || inner.coeffs_[0] != 0) {
    throw CompositionAtNonzero("inner series must vanish at zero");
  }
  const int v = inner.valuation();
  int lowest = precision_;
  for (int k = 1; k < precision_; ++k) {
    if (coeffs_[std::size_t(k)] != 0) {
      lowest = k;
      break;
    }
  }
  // The unknown tail of `this` enters at x^(precision * v); that of the inner
  // series at x^(inner.precision + v * (lowest - 1)).
  const long long from_outer = (long long)precision_ * v;
  const long long from_inner = inner.precision_ + (long long)v * (lowest - 1);
  const int p = int(std::min<long long>({from_outer, from_inner, 1 << 20}));

  std::vector<Rational> result(static_cast<std::size_t>(p));
  for (int k = precision_ - 1; k >= 0; --k) {  // Horner
    result = mul_raw(result, inner.coeffs_, p);
    if (p > 0) result[0] += coeffs_[std::size_t(k)];
  }
  return RationalSeries(std::move(result), p);
}

RationalSeries RationalSeries::reciprocal() const {
  if (precision_ == 0 || coeffs_[0] == 0) {
    throw DivisionByZeroSeries("reciprocal needs a nonzero constant term");
  }
  std::vector<Rational> b(static_cast<std::size_t>(precision_));
  const Rational inv = 1 / coeffs_[0];
  b[0] = inv;
  for (int k = 1; k < precision_; ++k) {
    Rational acc = 0;
    for (int i = 1; i <= k; ++i) acc += coeffs_[std::size_t(i)] * b[std::size_t(k - i)];
    b[std::size_t(k)] = -inv * acc;
  }
  return RationalSeries(std::move(b), precision_);
}

RationalSeries RationalSeries::scaled_argument(const Rational& c) const {
  std::vector<Rational> out = coeffs_;
  Rational power = 1;
  for (auto& x : out) {
    x *= power;
    power *= c;
  }
  return RationalSeries(std::move(out), precision_);
}

RationalSeries RationalSeries::operator-() const {
  std::vector<Rational> out = coeffs_;
  for (auto& x : out) x = -x;
  return RationalSeries(std::move(out), precision_);
}

RationalSeries operator+(const RationalSeries& a, const RationalSeries& b) {
  const int p = std::min(a.precision_, b.precision_);
  std::vector<Rational> out(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) out[std::size_t(k)] = a.coeffs_[std::size_t(k)] + b.coeffs_[std::size_t(k)];
  return RationalSeries(std::move(out), p);
}

RationalSeries operator-(const RationalSeries& a, const RationalSeries& b) { return a + (-b); }

RationalSeries operator*(const RationalSeries& a, const RationalSeries& b) {
  const int p = std::min(a.precision_ + b.valuation(), b.precision_ + a.valuation());
  return RationalSeries(mul_raw(a.coeffs_, b.coeffs_, p), p);
}

RationalSeries operator*(const Rational& s, const RationalSeries& a) {
  std::vector<Rational> out = a.coeffs_;
  for (auto& x : out) x *= s;
  return RationalSeries(std::move(out), a.precision_);
}

bool RationalSeries::operator==(const RationalSeries& o) const {
  return precision_ == o.precision_ && coeffs_ == o.coeffs_;
}

RationalSeries exp(const RationalSeries& a) {
  if (a.precision() == 0 || a[0] != 0) throw CompositionAtNonzero("exp needs a(0) = 0");
  const int p = a.precision();
  std::vector<Rational> b(static_cast<std::size_t>(p));
  b[0] = 1;
  // b' = a' b.
  for (int k = 1; k < p; ++k) {
    Rational acc = 0;
    for (int i = 1; i <= k; ++i) acc += Rational(i) * a[i] * b[std::size_t(k - i)];
    b[std::size_t(k)] = acc / k;
  }
  return RationalSeries(std::move(b), p);
}

RationalSeries log1p(const RationalSeries& a) {
  if (a.precision() == 0 || a[0] != 0) throw CompositionAtNonzero("log1p needs a(0) = 0");
  const int p = a.precision();
  const RationalSeries one = RationalSeries::constant(1, p);
  const RationalSeries dlog = a.derivative() * (one + a).reciprocal();
  std::vector<Rational> out(static_cast<std::size_t>(p));
  for (int k = 1; k < p; ++k) out[std::size_t(k)] = dlog[k - 1] / k;
  return RationalSeries(std::move(out), p);
}

RationalSeries arcsin(const RationalSeries& a) {
  if (a.precision() == 0 || a[0] != 0) throw CompositionAtNonzero("arcsin needs a(0) = 0");
  const int p = a.precision();
  // arcsin y = sum_n (2n)! / (4^n n!^2 (2n + 1)) y^(2n+1).
  std::vector<Rational> c(static_cast<std::size_t>(p));
  for (int n = 0; 2 * n + 1 < p; ++n) {
    c[std::size_t(2 * n + 1)] =
        Rational(binomial(2 * n, n), cpp_int(1) << (2 * n)) / Rational(2 * n + 1);
  }
  return RationalSeries(std::move(c), p).compose(a);
}

RationalSeries cosh_minus_one(int precision) {
  std::vector<Rational> c(static_cast<std::size_t>(std::max(precision, 0)));
  for (int k = 2; k < precision; k += 2) c[std::size_t(k)] = 1 / factorial(k);
  return RationalSeries(std::move(c), precision);
}

RationalSeries series_arith(const RationalSeries& a, const RationalSeries& b, SeriesOp op) {
  switch (op) {
    case SeriesOp::Add: return a + b;
    case SeriesOp::Mul: return a * b;
    case SeriesOp::Compose: return a.compose(b);
    case SeriesOp::Differentiate: return a.derivative();
    case SeriesOp::Reciprocal: return a.reciprocal();
  }
  throw InvalidArgument("unknown series operation");
}

// ---------------------------------------------------------------------------
// PiRational / PiPolynomial

PiRational::PiRational(Rational q, int pi_power) : q_(std::move(q)), pi_power_(pi_power) {
  if (pi_power_ < 0) throw InvalidArgument("pi power must be >= 0");
  if (q_ == 0) pi_power_ = 0;
}

double PiRational::value() const {
  return to_double(q_) * std::pow(std::numbers::pi, -double(pi_power_));
}

PiRational operator*(const PiRational& a, const PiRational& b) {
  return PiRational(a.q_ * b.q_, a.pi_power_ + b.pi_power_);
}

PiRational operator/(const PiRational& a, const PiRational& b) {
  if (b.q_ == 0) throw InvalidArgument("division by zero PiRational");
  if (a.q_ == 0) return PiRational(0, 0);
  return PiRational(a.q_ / b.q_, a.pi_power_ - b.pi_power_);
}

PiRational operator*(const Rational& s, const PiRational& a) {
  return PiRational(s * a.q_, a.pi_power_);
}

bool PiRational::operator==(const PiRational& o) const {
  return q_ == o.q_ && pi_power_ == o.pi_power_;
}

std::string PiRational::to_string() const {
  return "{" + series::to_string(q_) + ", " + std::to_string(pi_power_) + "}";
}

PiPolynomial::PiPolynomial(const PiRational& term) { add(term.pi_power(), term.q()); }

void PiPolynomial::add(int power, const Rational& q) {
  if (q == 0) return;
  auto& slot = terms_[power];
  slot += q;
  if (slot == 0) terms_.erase(power);
}

PiRational PiPolynomial::as_monomial() const {
  if (terms_.empty()) return PiRational(0, 0);
  if (terms_.size() > 1) throw InvalidArgument("PiPolynomial has several powers of pi");
  return PiRational(terms_.begin()->second, terms_.begin()->first);
}

double PiPolynomial::value() const {
  double v = 0.0;
  for (const auto& [k, q] : terms_) v += PiRational(q, k).value();
  return v;
}

PiPolynomial& PiPolynomial::operator+=(const PiPolynomial& o) {
  for (const auto& [k, q] : o.terms_) add(k, q);
  return *this;
}

bool PiPolynomial::operator==(const PiPolynomial& o) const { return terms_ == o.terms_; }

// ---------------------------------------------------------------------------
// LogSeries

LogSeries LogSeries::normalized() const {
  const int v = series.valuation();
  if (v >= series.precision()) return *this;
  const Rational lead = series[v];
  return {(1 / lead) * series, lead * scale, log_power};
}

std::vector<Rational> LogSeries::bracket(int max_degree, int step) const {
  std::vector<Rational> out;
  const int last = std::min(max_degree, series.precision() - 1);
  for (int k = series.valuation(); k <= last; k += step) out.push_back(series[k]);
  return out;
}

PiRational LogSeries::leading_amplitude() const {
  const int v = series.valuation();
  if (v >= series.precision()) return PiRational(0, 0);
  return series[v] * scale;
}

double LogSeries::evaluate(double x) const {
  double s = 0.0;
  for (int k = series.precision() - 1; k >= 0; --k) s = s * x + to_double(series[k]);
  return scale.value() * s * std::pow(std::log(std::abs(x)), log_power);
}

// ---------------------------------------------------------------------------
// Free-energy series

std::vector<Rational> bernoulli_numbers(int k_max) {
  if (k_max < 0 || k_max > 32) throw InvalidArgument("bernoulli_numbers needs 0 <= k_max <= 32");
  const int n_max = 2 * k_max;
  std::vector<Rational> b(static_cast<std::size_t>(n_max + 1));
  b[0] = 1;
  // sum_{j=0}^{n} C(n+1, j) B_j = 0.
  for (int n = 1; n <= n_max; ++n) {
    Rational acc = 0;
    for (int j = 0; j < n; ++j) acc += Rational(binomial(n + 1, j)) * b[std::size_t(j)];
    b[std::size_t(n)] = -acc / (n + 1);
  }
  std::vector<Rational> out;
  for (int k = 1; k <= k_max; ++k) out.push_back(b[std::size_t(2 * k)]);
  return out;
}

RationalSeries stirling_correction(int order) {
  if (order < 0 || order > 16) throw InvalidArgument("stirling_correction needs 0 <= K <= 16");
  const int p = order + 1;
  // ln(pi n c_n^2) = 2 sum_k B_2k / (2k(2k-1)) (2^(1-2k) - 2) x^(2k-1), x = 1/n.
  const int k_max = (order + 1) / 2 + 1;
  const auto bern = bernoulli_numbers(k_max);
  std::vector<Rational> expo(static_cast<std::size_t>(p));
  for (int k = 1; k <= k_max; ++k) {
    const int degree = 2 * k - 1;
    if (degree >= p) break;
    const Rational c = bern[std::size_t(k - 1)] / Rational(2 * k * (2 * k - 1));
    const Rational two_pow = Rational(1, cpp_int(1) << (2 * k - 1));
    expo[std::size_t(degree)] = 2 * c * (two_pow - 2);
  }
  return exp(RationalSeries(std::move(expo), p));
}

LogSeries u_p_singular(int p) {
  if (p < 1) throw InvalidArgument("u_p_singular needs p >= 1");
  const Rational sign = (p % 2 == 0) ? 1 : -1;
  return {RationalSeries::monomial(sign / factorial(p - 1), p - 1, p), PiRational(1, 0), 1};
}

LogSeries singular_t_series(int order) {
  if (order < 1 || order > 8) throw InvalidArgument("singular_t_series needs 1 <= K <= 8");
  // F = -(1/2) sum_n c_n^2 / (2n) e^(-n t) = -(1/4pi) sum_j S_j U_{j+2}(t).
  const RationalSeries bracket = stirling_correction(order - 1);
  RationalSeries total = RationalSeries::constant(0, order + 1);
  for (int j = 0; j < order; ++j) {
    const LogSeries up = u_p_singular(j + 2);
    const Rational coeff = up.series[j + 1];
    total = total + RationalSeries::monomial(bracket[j] * coeff, j + 1, order + 1);
  }
  return {total, PiRational(Rational(-1, 4), 1), 1};
}

RationalSeries t_of_betas(int order) {
  if (order < 2 || order > 16 || order % 2 != 0) {
    throw InvalidArgument("t_of_betas needs even K in [2, 16]");
  }
  const RationalSeries ln_cosh = log1p(cosh_minus_one(order + 1));
  return Rational(2) * ln_cosh.scaled_argument(2);
}

LogSeries singular_betas_series(int order) {
  if (order < 2 || order > 8) throw InvalidArgument("singular_betas_series needs 2 <= K <= 8");
  const int even = order - order % 2;
  const LogSeries in_t = singular_t_series(even / 2);
  const RationalSeries composed = in_t.series.compose(t_of_betas(even)).truncated(order + 1);
  // ln t = 2 ln|bs| + regular: keep only the singular factor 2.
  return LogSeries{composed, Rational(2) * in_t.scale, 1}.normalized();
}

LogSeries b2_series(int order) {
  if (order < 2 || order > 8) throw InvalidArgument("b2_series needs 2 <= K <= 8");
  const LogSeries sng = singular_betas_series(order);
  const RationalSeries g_prime = sng.series.derivative();
  // 1/2 (dF0/dbs)^2 carries 1/2 scale^2 g'^2 ln^2|bs|.
  const RationalSeries square = (g_prime * g_prime).truncated(order + 1);
  return LogSeries{square, Rational(1, 2) * (sng.scale * sng.scale), 2}.normalized();
}

}  // namespace vertex_expand::series
