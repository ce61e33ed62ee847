#pragma once

#include <stdexcept>
#include <string>

namespace lisopt {

/// Bad or unparsable configuration input. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain (pilot length too
/// short, K out of range, negative Lambert-W argument, ...). Exit code 3.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A probability-zero degenerate channel input, e.g. an exactly zero
/// coefficient handed to the phase configuration.
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lisopt
