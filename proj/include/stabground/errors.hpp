#pragma once

#include <stdexcept>
#include <string>

namespace stabground {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched qubit counts or vector lengths.
struct DimensionError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
// Request exceeds a configured size cap (enumeration, dense simulation).
struct CapacityError : Error {
  using Error::Error;
};
// Argument outside the mathematical domain of a formula.
struct DomainError : Error {
  using Error::Error;
};
// A structure fails its invariants (generator sets, tableaux).
struct ValidationError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct SearchFailure : Error {
  using Error::Error;
};

}  // namespace stabground
