#include "escapelab/tower.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "escapelab/errors.hpp"

namespace escapelab {

namespace {
constexpr double kE = std::numbers::e;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Beyond this a bounded additive shift no longer changes a double-rounded value.
constexpr double kShiftAbsorbed = 1e300;
}  // namespace

TowerValue TowerValue::from_real(double value) {
  if (!(value >= 0.0) || std::isinf(value)) {
    throw DomainError("tower values need a finite non-negative real");
  }
  std::size_t level = 0;
  while (value >= kE) {
    value = std::log(value);
    ++level;
  }
  return {level, value};
}

TowerValue TowerValue::from_log(double log_value) {
  if (std::isnan(log_value)) throw DomainError("log magnitude is NaN");
  if (log_value == -kInf) return {};
  if (log_value < 1.0) return {0, std::exp(log_value)};
  return from_real(log_value).exp();
}

double TowerValue::to_double() const {
  double v = residual_;
  for (std::size_t i = 0; i < level_; ++i) {
    v = std::exp(v);
    if (std::isinf(v)) return kInf;
  }
  return v;
}

bool TowerValue::representable() const { return std::isfinite(to_double()); }

double TowerValue::log_double() const {
  if (level_ == 0) return std::log(residual_);
  return TowerValue(level_ - 1, residual_).to_double();
}

TowerValue TowerValue::log() const {
  if (level_ == 0) {
    if (residual_ < 1.0) throw DomainError("log of a magnitude below 1 is negative");
    return {0, std::log(residual_)};
  }
  return {level_ - 1, residual_};
}

TowerValue TowerValue::exp() const {
  if (level_ == 0 && residual_ < 1.0) return {0, std::exp(residual_)};
  return {level_ + 1, residual_};
}

TowerValue TowerValue::add(double shift) const {
  const double v = to_double();
  if (v < kShiftAbsorbed) {
    const double sum = v + shift;
    if (sum < 0.0) throw DomainError("tower addition produced a negative value");
    return from_real(sum);
  }
  return *this;
}

TowerValue TowerValue::scale(double factor) const {
  if (!(factor > 0.0)) throw DomainError("tower scale factor must be positive");
  const double v = to_double();
  if (v < kShiftAbsorbed && std::isfinite(v * factor)) return from_real(v * factor);
  return log().add(std::log(factor)).exp();
}

std::string TowerValue::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "exp^" << level_ << "(" << residual_ << ")";
  return os.str();
}

}  // namespace escapelab
