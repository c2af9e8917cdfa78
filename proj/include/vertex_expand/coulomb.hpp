#pragma once

// Coulomb-gas form of the leading singularity in the staggered field and its
// check against the exact first-order series.

#include <map>
#include <string>
#include <vector>

#include "vertex_expand/series.hpp"

namespace vertex_expand::coulomb {

/// j = 1/2 arccos(1 - 1/2 exp(2 beta eps)). OutOfDomain for beta eps > ln 2.
double j_of_betaeps(double beta_eps);

/// Same, parametrised by U = beta eps - 1/2 ln 2 (exact at U = 0).
double j_of_u(double u);

/// 1/2 ln(2 - sqrt 2): below and at this point the exponent is infinite.
double kt_threshold();

struct Exponent {
  bool divergent;
  double value;  // 2 / (2 - pi / 4j); +inf when divergent
};

Exponent singular_exponent(double beta_eps);
Exponent singular_exponent_u(double u);

/// Coefficients e_0..e_K (K <= 4) of the exponent as a series in U; each is a
/// polynomial in 1/pi with rational coefficients.
std::vector<series::PiPolynomial> exponent_u_expansion(int order);

struct VerificationReport {
  series::PiRational predicted;  // order-U amplitude of bs^2 ln^2|bs| from the Coulomb form
  series::PiRational computed;   // leading coefficient of B2
  bool equal;
  std::map<std::string, std::string> details;

  /// {"computed", "details", "equal", "predicted"} with sorted keys.
  std::string to_json() const;
};

/// Matches the pole residue of A(U) to the U = 0 singular amplitude, expands
/// A(U) bs^(e(U)) to order U and compares the ln^2 amplitude with B2.
/// VerificationFailed when the two exact values differ.
VerificationReport verify_first_order();

}  // namespace vertex_expand::coulomb
