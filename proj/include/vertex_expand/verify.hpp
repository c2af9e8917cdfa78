#pragma once

// Acceptance checks shared by the `verify` subcommand and the acceptance
// test binary. Each criterion runs its oracle comparison and reports the
// worst deviation it saw.

#include <string>
#include <string_view>
#include <vector>

namespace vertex_expand::verify {

struct CriterionResult {
  int id;
  std::string name;   // e.g. "kasteleyn"
  std::string suite;  // suite the criterion belongs to
  bool passed;
  double metric;      // worst deviation (0 for exact checks)
  double threshold;
  std::string detail;
};

struct VerifyOptions {
  /// Reverses the orientation of one edge of every Kasteleyn matrix; a
  /// correct suite must then fail.
  bool flip_kasteleyn_sign = false;
};

/// Suite names: all, kasteleyn, identity, series, coulomb.
bool is_suite(std::string_view suite);

/// Runs the criteria of `suite` in id order. InvalidArgument for an unknown
/// suite. Failures are reported, not thrown.
std::vector<CriterionResult> run_suite(std::string_view suite, const VerifyOptions& options = {});

/// Deterministic JSON report: {"criteria": [...], "passed": bool, "suite": s}.
std::string report_json(std::string_view suite, const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

// Individual criteria.
CriterionResult check_kasteleyn(const VerifyOptions& options = {});
CriterionResult check_mapping(const VerifyOptions& options = {});
CriterionResult check_free_energy();
CriterionResult check_first_order();
CriterionResult check_constrained(const VerifyOptions& options = {});
CriterionResult check_series();
CriterionResult check_coulomb();

}  // namespace vertex_expand::verify
