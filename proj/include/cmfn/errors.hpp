#ifndef CMFN_ERRORS_HPP
#define CMFN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cmfn {

// Invalid sizes, widths, bounds, flags.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Dimension / length mismatch between values that must agree.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Division by a jet with vanishing constant term, log of nonpositive value, ...
struct SingularOperation : std::domain_error {
  using std::domain_error::domain_error;
};

// Non-finite intermediate inside a traced computation.
struct NumericFault : std::runtime_error {
  NumericFault(const std::string& msg, std::string node_tag)
      : std::runtime_error(msg + " [node: " + node_tag + "]"), tag(std::move(node_tag)) {}
  std::string tag;
};

// Root bracketing failed.
struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation needs data the problem does not provide (e.g. analytic solution).
struct UnsupportedOperation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All training attempts ended in line-search failure.
struct TrainingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cmfn

#endif
