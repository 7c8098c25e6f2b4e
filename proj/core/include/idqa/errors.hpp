#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace idqa {

/// Bad input: out-of-range parameters, malformed files, inconsistent sizes.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The numerics gave up: step-size underflow, step limit, norm drift.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Division by a vanishing amplitude with no regularization floor.
class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

using WarningHandler = std::function<void(std::string_view)>;

/// Installs the sink for non-fatal warnings. The default writes to stderr.
/// Returns the previous handler.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace idqa
