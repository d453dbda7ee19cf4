#pragma once

#include <cmath>
#include <limits>
#include <optional>

namespace lsi {

/// A nonnegative quantity carried by its logarithm, since bounds such as
/// 2*delta*exp(24 R^2/delta) leave double range long before they stop being
/// interesting.
struct LogValue {
  double log = -std::numeric_limits<double>::infinity();

  static LogValue from_log(double log_value) { return LogValue{log_value}; }
  static LogValue from_linear(double value) { return LogValue{std::log(value)}; }

  /// The linear value, or nullopt when it overflows a double.
  std::optional<double> linear() const {
    const double v = std::exp(log);
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  }

  /// exp(log), possibly +inf.
  double value() const { return std::exp(log); }

  friend bool operator<(LogValue a, LogValue b) { return a.log < b.log; }
  friend LogValue operator*(LogValue a, LogValue b) { return LogValue{a.log + b.log}; }
};

}  // namespace lsi
