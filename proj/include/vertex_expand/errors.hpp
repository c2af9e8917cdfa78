#pragma once

#include <stdexcept>
#include <string>

namespace vertex_expand {

/// Base class of every error raised by the library. `kind()` is the stable
/// machine-readable name used in CLI diagnostics and reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define VERTEX_EXPAND_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

// Usage / domain errors.
VERTEX_EXPAND_DEFINE_ERROR(InvalidArgument);
VERTEX_EXPAND_DEFINE_ERROR(TooLarge);
VERTEX_EXPAND_DEFINE_ERROR(OutOfDomain);
VERTEX_EXPAND_DEFINE_ERROR(IceRuleViolation);
VERTEX_EXPAND_DEFINE_ERROR(NotFreeFermion);
VERTEX_EXPAND_DEFINE_ERROR(TooManyConstraints);
VERTEX_EXPAND_DEFINE_ERROR(ConstraintConflict);
VERTEX_EXPAND_DEFINE_ERROR(CompositionAtNonzero);
VERTEX_EXPAND_DEFINE_ERROR(DivisionByZeroSeries);

// Numerical failures.
VERTEX_EXPAND_DEFINE_ERROR(NonConvergence);
VERTEX_EXPAND_DEFINE_ERROR(OrientationFailure);
VERTEX_EXPAND_DEFINE_ERROR(SingularMatrix);
VERTEX_EXPAND_DEFINE_ERROR(ToleranceNotMet);
VERTEX_EXPAND_DEFINE_ERROR(IdentityMismatch);
VERTEX_EXPAND_DEFINE_ERROR(VerificationFailed);

#undef VERTEX_EXPAND_DEFINE_ERROR

}  // namespace vertex_expand
