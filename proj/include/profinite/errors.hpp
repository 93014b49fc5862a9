#pragma once

#include <stdexcept>
#include <string>

namespace profinite {

// Base of every error raised by the library. Each subclass names the axiom or
// precondition that failed so the CLI can report it verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PROFINITE_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

PROFINITE_DEFINE_ERROR(JoinFailure);
PROFINITE_DEFINE_ERROR(EmptySection);
PROFINITE_DEFINE_ERROR(InfinitePoset);
PROFINITE_DEFINE_ERROR(NotComparable);
PROFINITE_DEFINE_ERROR(DimensionMismatch);
PROFINITE_DEFINE_ERROR(FamilyMismatch);
PROFINITE_DEFINE_ERROR(IllDefinedSection);
PROFINITE_DEFINE_ERROR(Incomparable);
PROFINITE_DEFINE_ERROR(MorphismViolation);
PROFINITE_DEFINE_ERROR(NotInvertible);
PROFINITE_DEFINE_ERROR(SingularForm);
PROFINITE_DEFINE_ERROR(NonconvergentSolve);
PROFINITE_DEFINE_ERROR(NonSymplecticAction);
PROFINITE_DEFINE_ERROR(ZeroVector);
PROFINITE_DEFINE_ERROR(TimeOutOfRange);
PROFINITE_DEFINE_ERROR(ParseError);

#undef PROFINITE_DEFINE_ERROR

}  // namespace profinite
