#pragma once

#include <stdexcept>
#include <string>

namespace coarse {

// Base for every error raised by the library. The CLI maps the concrete type
// to an exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: out-of-range indices, empty generator sets, ...
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A documented precondition of a construction does not hold. The message
// names a witness (point, pair or set) whenever one exists.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Materialization or iteration bound exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

// A construction produced something its own argument rules out.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace coarse
