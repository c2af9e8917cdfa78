#include "vertex_expand/coulomb.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"

#include "vertex_expand/errors.hpp"

namespace vertex_expand::coulomb {

namespace {

using series::PiPolynomial;
using series::PiRational;
using series::Rational;
using series::RationalSeries;

double j_from_argument(double arg) {
  if (!(arg >= -1.0 && arg <= 1.0)) {
    throw OutOfDomain("1 - exp(2 beta eps) / 2 = " + std::to_string(arg) + " is outside [-1, 1]");
  }
  return 0.5 * std::acos(arg);
}

Exponent exponent_from_j(double j) {
  const double denominator = 2.0 - std::numbers::pi / (4.0 * j);
  if (!(denominator > 0.0)) return {true, std::numeric_limits<double>::infinity()};
  return {false, 2.0 / denominator};
}

std::string pi_text(const PiRational& p) { return p.to_string(); }

}  // namespace

double j_of_betaeps(double beta_eps) { return j_from_argument(1.0 - 0.5 * std::exp(2.0 * beta_eps)); }

double j_of_u(double u) { return j_from_argument(-std::expm1(2.0 * u)); }

double kt_threshold() { return 0.5 * std::log(2.0 - std::numbers::sqrt2); }

Exponent singular_exponent(double beta_eps) {
  const double j = j_of_betaeps(beta_eps);
  if (beta_eps <= kt_threshold()) return {true, std::numeric_limits<double>::infinity()};
  return exponent_from_j(j);
}

Exponent singular_exponent_u(double u) {
  const double j = j_of_u(u);
  if (u + 0.5 * std::numbers::ln2 <= kt_threshold()) {
    return {true, std::numeric_limits<double>::infinity()};
  }
  return exponent_from_j(j);
}

std::vector<PiPolynomial> exponent_u_expansion(int order) {
  if (order < 0 || order > 4) throw InvalidArgument("exponent_u_expansion needs 0 <= K <= 4");
  const int p = order + 1;
  // With w = 1 - exp(2U) and a = arcsin w: j = pi/4 - a/2, and the exponent
  // 2 / (2 - pi/4j) = 2 + sum_{k >= 1} (4a/pi)^k.
  std::vector<Rational> w(static_cast<std::size_t>(p));
  Rational term = 1;
  for (int n = 1; n < p; ++n) {
    term = term * 2 / n;
    w[std::size_t(n)] = -term;
  }
  const RationalSeries a = series::arcsin(RationalSeries(std::move(w), p));

  std::vector<PiPolynomial> out(static_cast<std::size_t>(p));
  out[0] = PiPolynomial(PiRational(2, 0));
  RationalSeries power = RationalSeries::constant(1, p);
  Rational four_k = 1;
  for (int k = 1; k < p; ++k) {
    power = power * a;
    four_k *= 4;
    for (int n = 1; n < p; ++n) {
      out[std::size_t(n)] += PiPolynomial(PiRational(four_k * power[n], k));
    }
  }
  return out;
}

std::string VerificationReport::to_json() const {
  nlohmann::json j;
  j["predicted"] = pi_text(predicted);
  j["computed"] = pi_text(computed);
  j["equal"] = equal;
  j["details"] = details;
  return j.dump();
}

VerificationReport verify_first_order() {
  const auto e = exponent_u_expansion(1);
  const PiRational slope = e[1].as_monomial();
  // Order U^0: A(U) bs^(2 + e1 U) contributes residue * e1 * bs^2 ln|bs|, which
  // must reproduce the singular amplitude of the free-fermion free energy.
  const PiRational singular = series::singular_betas_series(2).leading_amplitude();
  const PiRational residue = singular / slope;
  // Order U^1 ln^2 term: residue * e1^2 / 2!.
  const PiRational predicted = Rational(1, 2) * (residue * slope * slope);
  const PiRational computed = series::b2_series(2).leading_amplitude();

  VerificationReport report{predicted, computed, predicted == computed, {}};
  report.details["exponent_u0"] = pi_text(e[0].as_monomial());
  report.details["exponent_u1"] = pi_text(slope);
  report.details["singular_amplitude"] = pi_text(singular);
  report.details["pole_residue"] = pi_text(residue);
  if (!report.equal) {
    throw VerificationFailed("predicted " + pi_text(predicted) + " != computed " +
                             pi_text(computed));
  }
  return report;
}

}  // namespace vertex_expand::coulomb
