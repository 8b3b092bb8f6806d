#pragma once

#include <stdexcept>
#include <string>

namespace means {

// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};
struct ArityMismatch : Error {
  using Error::Error;
};
struct InversionFailure : Error {
  using Error::Error;
};
struct InvariantError : Error {
  using Error::Error;
};
struct DegenerateFit : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct SpecParseError : Error {
  using Error::Error;
};
struct UsageError : Error {
  using Error::Error;
};

}  // namespace means
