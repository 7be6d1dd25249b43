#ifndef DYNCO_ERRORS_HPP
#define DYNCO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dynco {

/// Base class of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not chain (dim_in/dim_out, partial-trace factors, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value violates a domain invariant (non-Hermitian, not CPTP, bad probabilities, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The SDP backend did not reach an optimal, certified point.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace dynco

#endif  // DYNCO_ERRORS_HPP
