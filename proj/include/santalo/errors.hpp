#pragma once

#include <stdexcept>
#include <string>

namespace santalo {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define SANTALO_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {}       \
  };

SANTALO_DEFINE_ERROR(RangeError)
SANTALO_DEFINE_ERROR(InvalidFunction)
SANTALO_DEFINE_ERROR(InvalidParameter)
SANTALO_DEFINE_ERROR(GridError)
SANTALO_DEFINE_ERROR(GridTooSmall)
SANTALO_DEFINE_ERROR(NotAdmissible)
SANTALO_DEFINE_ERROR(NotAbsolutelyContinuous)
SANTALO_DEFINE_ERROR(InvalidDensity)
SANTALO_DEFINE_ERROR(InvalidMeasure)
SANTALO_DEFINE_ERROR(DimensionError)
SANTALO_DEFINE_ERROR(DomainError)
SANTALO_DEFINE_ERROR(SolverError)
SANTALO_DEFINE_ERROR(InfeasibleTarget)
SANTALO_DEFINE_ERROR(NotApplicable)
SANTALO_DEFINE_ERROR(ParseError)
SANTALO_DEFINE_ERROR(UsageError)

#undef SANTALO_DEFINE_ERROR

/// Raised when an iterative solver stops before reaching its tolerance.
class NonConverged : public Error {
public:
  NonConverged(const std::string& what, double residual)
      : Error("NonConverged: " + what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

}  // namespace santalo
