#include "escapelab/expmap.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "escapelab/errors.hpp"

namespace escapelab {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLogOverflow = std::log(kOverflowThreshold);

BigFloat precise_principal_arg(const BigComplex& w) {
  if (w.im.is_zero() && w.re.sign() < 0) return BigFloat::pi(w.precision());
  return atan2(w.im, w.re);
}

}  // namespace

std::complex<double> SafePoint::point() const {
  if (const auto* z = std::get_if<std::complex<double>>(&value_)) return *z;
  throw DomainError("tower-form point has no argument");
}

TowerValue SafePoint::magnitude() const {
  if (const auto* t = std::get_if<TowerValue>(&value_)) return *t;
  return TowerValue::from_real(std::abs(std::get<std::complex<double>>(value_)));
}

double SafePoint::log_modulus() const {
  if (const auto* t = std::get_if<TowerValue>(&value_)) return t->log_double();
  return std::log(std::abs(std::get<std::complex<double>>(value_)));
}

double principal_arg(std::complex<double> w) {
  const double a = std::arg(w);
  return a == -kPi ? kPi : a;
}

ExpMap::ExpMap(std::complex<double> lambda, long precision_bits)
    : lambda_(lambda),
      abs_lambda_(std::abs(lambda)),
      log_abs_lambda_(std::log(std::abs(lambda))),
      arg_lambda_(principal_arg(lambda)),
      precision_bits_(precision_bits),
      precise_log_abs_lambda_(precision_bits),
      precise_arg_lambda_(precision_bits) {
  if (lambda == std::complex<double>{}) throw InvalidArgument("lambda must be nonzero");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
    throw InvalidArgument("lambda must be finite");
  }
  const BigComplex precise(lambda, precision_bits);
  precise_log_abs_lambda_ = log(precise.abs());
  precise_arg_lambda_ = precise_principal_arg(precise);
}

SafePoint ExpMap::apply(const SafePoint& z) const {
  if (z.is_tower()) return SafePoint::tower(max_modulus_tower(z.magnitude()));
  const std::complex<double> p = z.point();
  const double log_modulus = log_abs_lambda_ + p.real();
  if (log_modulus >= kLogOverflow) return SafePoint::tower(TowerValue::from_log(log_modulus));
  return SafePoint::cartesian(std::polar(std::exp(log_modulus), p.imag() + arg_lambda_));
}

PrecisePoint ExpMap::apply(const PrecisePoint& z) const {
  if (const auto* t = std::get_if<TowerValue>(&z)) return max_modulus_tower(*t);
  const auto& p = std::get<BigComplex>(z);
  BigFloat log_modulus = p.re + precise_log_abs_lambda_;
  if (log_modulus >= kLogOverflow) return TowerValue::from_log(log_modulus.to_double());
  const BigFloat modulus = exp(log_modulus);
  const BigFloat angle = p.im + precise_arg_lambda_;
  return BigComplex(modulus * cos(angle), modulus * sin(angle));
}

std::vector<SafePoint> ExpMap::orbit(std::complex<double> z0, std::size_t n) const {
  std::vector<SafePoint> out;
  out.reserve(n + 1);
  out.push_back(SafePoint::cartesian(z0));
  for (std::size_t i = 0; i < n; ++i) out.push_back(apply(out.back()));
  return out;
}

std::vector<PrecisePoint> ExpMap::orbit(const BigComplex& z0, std::size_t n) const {
  std::vector<PrecisePoint> out;
  out.reserve(n + 1);
  out.emplace_back(z0);
  for (std::size_t i = 0; i < n; ++i) out.push_back(apply(out.back()));
  return out;
}

double ExpMap::max_modulus(double r) const {
  if (r < 0.0) throw InvalidArgument("radius must be non-negative");
  return std::exp(log_abs_lambda_ + r);
}

TowerValue ExpMap::max_modulus_tower(const TowerValue& r) const {
  const double v = r.to_double();
  if (std::isfinite(v)) return TowerValue::from_log(v + log_abs_lambda_);
  return r.add(log_abs_lambda_).exp();
}

TowerValue ExpMap::max_modulus_iter(double r, std::size_t n) const {
  if (!(r >= 0.0)) throw InvalidArgument("radius must be non-negative");
  if (abs_lambda_ <= 1.0 / std::numbers::e && r <= escape_threshold()) {
    throw NotEscaping("maximum-modulus iterates from r do not tend to infinity");
  }
  TowerValue value = TowerValue::from_real(r);
  for (std::size_t i = 0; i < n; ++i) value = max_modulus_tower(value);
  return value;
}

double ExpMap::min_modulus(double r) const {
  if (r < 0.0) throw InvalidArgument("radius must be non-negative");
  return std::exp(log_abs_lambda_ - r);
}

double ExpMap::escape_threshold() const {
  if (abs_lambda_ > 1.0 / std::numbers::e) return 0.0;
  // |lambda| e^x > x  <=>  log|lambda| + x - log x > 0, increasing for x > 1. The
  // minimum sits at x = log(1/|lambda|) >= 1 where the expression is <= 0.
  auto excess = [this](double x) { return log_abs_lambda_ + x - std::log(x); };
  double lo = std::max(1.0, -log_abs_lambda_);
  double hi = 1e3;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

std::complex<double> ExpMap::inverse_branch(std::complex<double> w, long long k) const {
  if (w == std::complex<double>{}) throw ZeroArgument("inverse branch of 0 is undefined");
  const double re = std::log(std::abs(w)) - log_abs_lambda_;
  const double im = principal_arg(w) - arg_lambda_ + 2.0 * kPi * static_cast<double>(k);
  return {re, im};
}

BigComplex ExpMap::inverse_branch(const BigComplex& w, const mpz_class& k) const {
  if (w.re.is_zero() && w.im.is_zero()) throw ZeroArgument("inverse branch of 0 is undefined");
  const long p = std::max(w.precision(), precision_bits_);
  BigFloat re = log(w.abs()) - precise_log_abs_lambda_;
  BigFloat im = precise_principal_arg(w) - precise_arg_lambda_ +
                BigFloat::pi(p) * BigFloat(mpz_class(2 * k), p);
  return {std::move(re), std::move(im)};
}

double log_plus_p(double x, unsigned p) {
  for (unsigned i = 0; i < p; ++i) x = x >= 1.0 ? std::log(x) : 0.0;
  return x;
}

}  // namespace escapelab
