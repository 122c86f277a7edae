#pragma once

#include <stdexcept>

namespace dfsopt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (unknown ids, missing columns, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// The requested lineup or program has no feasible solution.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Invalid user configuration (conflicting locks, impossible stack, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dfsopt
