#pragma once

#include <stdexcept>
#include <string>

namespace polyfreq {

/// Base class for every error raised by the library.
///
/// Errors fall in two families that the command line maps to distinct exit
/// codes: validation errors (bad input geometry or parameters) and solver
/// errors (numerical failure).
class Error : public std::runtime_error {
public:
  enum class Kind { Validation, Solver };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

#define POLYFREQ_DEFINE_ERROR(Name, kind)                                   \
  class Name : public Error {                                               \
  public:                                                                   \
    explicit Name(const std::string& what) : Error(Kind::kind, #Name ": " + what) {} \
  };

POLYFREQ_DEFINE_ERROR(InvalidPolygon, Validation)
POLYFREQ_DEFINE_ERROR(DegenerateRadius, Validation)
POLYFREQ_DEFINE_ERROR(Unsupported, Validation)
POLYFREQ_DEFINE_ERROR(DegenerateTriangle, Validation)
POLYFREQ_DEFINE_ERROR(Degenerate, Validation)
POLYFREQ_DEFINE_ERROR(StepRejected, Validation)
POLYFREQ_DEFINE_ERROR(FrameMismatch, Validation)
POLYFREQ_DEFINE_ERROR(DomainError, Validation)
POLYFREQ_DEFINE_ERROR(NoEquilibrium, Validation)
POLYFREQ_DEFINE_ERROR(InputError, Validation)
POLYFREQ_DEFINE_ERROR(SolverError, Solver)
POLYFREQ_DEFINE_ERROR(NoConvergence, Solver)

#undef POLYFREQ_DEFINE_ERROR

}  // namespace polyfreq
