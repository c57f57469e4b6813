#pragma once

#include <stdexcept>
#include <string>

namespace spectune {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SPECTUNE_DEFINE_ERROR(Name)            \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what)     \
        : Error(#Name ": " + what) {}          \
  }

SPECTUNE_DEFINE_ERROR(InvalidParam);
SPECTUNE_DEFINE_ERROR(ConnectivityFailure);
SPECTUNE_DEFINE_ERROR(EmptyCore);
SPECTUNE_DEFINE_ERROR(EmptyScope);
SPECTUNE_DEFINE_ERROR(DimensionMismatch);
SPECTUNE_DEFINE_ERROR(InfeasibleBudget);
SPECTUNE_DEFINE_ERROR(DegenerateBaseline);
SPECTUNE_DEFINE_ERROR(ParseError);

#undef SPECTUNE_DEFINE_ERROR

}  // namespace spectune
