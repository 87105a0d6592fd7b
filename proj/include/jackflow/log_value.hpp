#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jackflow {

/// Nonnegative quantity carried as log-magnitude; sign 0 marks an exact zero.
struct LogValue {
  double log_abs = 0.0;
  int sign = 1;

  static LogValue zero() noexcept { return {-std::numeric_limits<double>::infinity(), 0}; }
  static LogValue one() noexcept { return {0.0, 1}; }
  static LogValue from_log(double l) noexcept { return std::isinf(l) && l < 0 ? zero() : LogValue{l, 1}; }
  static LogValue from_value(double v) {
    if (v < 0.0) throw std::domain_error("LogValue holds nonnegative quantities only");
    return v == 0.0 ? zero() : LogValue{std::log(v), 1};
  }

  bool is_zero() const noexcept { return sign == 0; }
  /// Linear value; overflows to +inf for huge magnitudes.
  double value() const noexcept { return sign == 0 ? 0.0 : std::exp(log_abs); }

  LogValue& operator*=(const LogValue& o) noexcept {
    if (sign == 0 || o.sign == 0) return *this = zero();
    log_abs += o.log_abs;
    return *this;
  }
  LogValue& operator/=(const LogValue& o) {
    if (o.sign == 0) throw std::domain_error("LogValue division by zero");
    if (sign == 0) return *this;
    log_abs -= o.log_abs;
    return *this;
  }
  friend LogValue operator*(LogValue a, const LogValue& b) noexcept { return a *= b; }
  friend LogValue operator/(LogValue a, const LogValue& b) { return a /= b; }
};

}  // namespace jackflow
