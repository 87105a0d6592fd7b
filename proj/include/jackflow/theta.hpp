#pragma once

#include <stdexcept>
#include <string>

namespace jackflow {

/// Jack parameter θ > 0; the matching Dyson exponent is β = 2θ.
class Theta {
 public:
  explicit Theta(double value) : value_(value) {
    if (!(value > 0.0) || value != value)
      throw std::invalid_argument("theta must be positive, got " + std::to_string(value));
  }
  static Theta from_beta(double beta) { return Theta(beta / 2.0); }

  double value() const noexcept { return value_; }
  double beta() const noexcept { return 2.0 * value_; }

  friend bool operator==(const Theta&, const Theta&) = default;

 private:
  double value_;
};

}  // namespace jackflow
