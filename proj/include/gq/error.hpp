#pragma once

#include <stdexcept>
#include <string>

namespace gq {

/// Base class for every domain error raised by the library. The CLI maps
/// these to exit code 1 and prints `kind: message` on one line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define GQ_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what) : Error(#Name, what) {}         \
  };

GQ_DEFINE_ERROR(DivisionByZero)
GQ_DEFINE_ERROR(SpecMismatch)
GQ_DEFINE_ERROR(InvalidField)
GQ_DEFINE_ERROR(DimensionMismatch)
GQ_DEFINE_ERROR(NotRegularPoint)
GQ_DEFINE_ERROR(TooLarge)
GQ_DEFINE_ERROR(InvalidPermutation)
GQ_DEFINE_ERROR(NotAnAutomorphism)
GQ_DEFINE_ERROR(NotInvariant)
GQ_DEFINE_ERROR(CharTooSmall)
GQ_DEFINE_ERROR(BadDecomposition)
GQ_DEFINE_ERROR(BudgetExceeded)
GQ_DEFINE_ERROR(NotCompatible)
GQ_DEFINE_ERROR(ParseError)
GQ_DEFINE_ERROR(RefusesIncomplete)

#undef GQ_DEFINE_ERROR

}  // namespace gq
