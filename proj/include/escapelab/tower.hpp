#pragma once

#include <compare>
#include <cstddef>
#include <string>

namespace escapelab {

/// Non-negative magnitude in iterated-exponential form: value = exp^level(residual).
///
/// Canonical form: for level >= 1 the residual lies in [1, e); level 0 stores the plain
/// value in [0, e). Canonical values are totally ordered by (level, residual), because
/// level k covers exactly [exp^k(1), exp^(k+1)(1)).
class TowerValue {
 public:
  TowerValue() = default;

  static TowerValue from_real(double value);
  /// The value e^log_value; log_value may be negative.
  static TowerValue from_log(double log_value);

  std::size_t level() const { return level_; }
  double residual() const { return residual_; }

  /// Finite double when the value fits, +infinity otherwise.
  double to_double() const;
  bool representable() const;

  /// Natural log as a double, +infinity when the log itself does not fit, -infinity at zero.
  double log_double() const;
  /// Natural log as a tower; requires value >= 1.
  TowerValue log() const;
  TowerValue exp() const;

  /// value + shift. Once the value exceeds the double range the shift is below one unit
  /// in the last place of the residual and the value is returned unchanged.
  TowerValue add(double shift) const;
  /// value * factor for factor > 0.
  TowerValue scale(double factor) const;

  std::string to_string() const;

  friend std::partial_ordering operator<=>(const TowerValue& a, const TowerValue& b) {
    if (a.level_ != b.level_) return a.level_ <=> b.level_;
    return a.residual_ <=> b.residual_;
  }
  friend bool operator==(const TowerValue& a, const TowerValue& b) = default;

 private:
  TowerValue(std::size_t level, double residual) : level_(level), residual_(residual) {}

  std::size_t level_ = 0;
  double residual_ = 0.0;
};

}  // namespace escapelab
