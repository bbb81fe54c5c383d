#pragma once

#include <stdexcept>
#include <string>

namespace qmorph {

/// Malformed or out-of-domain input (non-reduced word, y <= 0, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric routine failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration or search exceeded its configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation not available for the given model (e.g. conjugacy on matrices).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmorph
