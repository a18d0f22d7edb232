#pragma once

#include <complex>
#include <cstddef>
#include <gmpxx.h>
#include <variant>
#include <vector>

#include "escapelab/bigfloat.hpp"
#include "escapelab/tower.hpp"

namespace escapelab {

/// Magnitudes at or above this switch an orbit to tower form.
inline constexpr double kOverflowThreshold = 1e300;

/// A complex orbit value: cartesian while |z| < kOverflowThreshold, otherwise only its
/// magnitude survives, as a tower. Argument information is lost in tower form.
class SafePoint {
 public:
  SafePoint() : value_(std::complex<double>{}) {}
  static SafePoint cartesian(std::complex<double> z) { return SafePoint(z); }
  static SafePoint tower(TowerValue magnitude) { return SafePoint(magnitude); }

  bool is_tower() const { return std::holds_alternative<TowerValue>(value_); }
  bool sign_unknown() const { return is_tower(); }
  /// Throws DomainError for tower points.
  std::complex<double> point() const;
  TowerValue magnitude() const;
  /// log|z|; +infinity when the log exceeds the double range, -infinity at zero.
  double log_modulus() const;

 private:
  explicit SafePoint(std::complex<double> z) : value_(z) {}
  explicit SafePoint(TowerValue t) : value_(t) {}
  std::variant<std::complex<double>, TowerValue> value_;
};

/// Orbit point from the extended-precision path.
using PrecisePoint = std::variant<BigComplex, TowerValue>;

/// f(z) = lambda * e^z for a fixed nonzero lambda.
///
/// Immutable after construction. The precision (53..1024 bits) applies to the
/// BigComplex overloads; lambda itself is taken exactly from its double components.
class ExpMap {
 public:
  explicit ExpMap(std::complex<double> lambda, long precision_bits = 53);

  std::complex<double> lambda() const { return lambda_; }
  double abs_lambda() const { return abs_lambda_; }
  double log_abs_lambda() const { return log_abs_lambda_; }
  /// Principal argument in (-pi, pi].
  double arg_lambda() const { return arg_lambda_; }
  long precision_bits() const { return precision_bits_; }

  SafePoint apply(const SafePoint& z) const;
  SafePoint apply(std::complex<double> z) const { return apply(SafePoint::cartesian(z)); }
  /// Extended-precision step; switches to tower form at kOverflowThreshold.
  PrecisePoint apply(const PrecisePoint& z) const;

  std::vector<SafePoint> orbit(std::complex<double> z0, std::size_t n) const;
  std::vector<PrecisePoint> orbit(const BigComplex& z0, std::size_t n) const;

  /// M(r, f) = |lambda| e^r; +infinity on overflow (see max_modulus_tower).
  double max_modulus(double r) const;
  TowerValue max_modulus_tower(const TowerValue& r) const;
  /// n-fold iterate of r -> |lambda| e^r. Throws NotEscaping when r is not above
  /// escape_threshold().
  TowerValue max_modulus_iter(double r, std::size_t n) const;
  /// m(r, f) = |lambda| e^{-r}.
  double min_modulus(double r) const;
  /// Infimum of radii whose maximum-modulus iterates tend to infinity: the largest
  /// real solution of |lambda| e^x = x when |lambda| <= 1/e, else 0.
  double escape_threshold() const;
  /// Default base point for M^n(R, f): escape_threshold() + 1.
  double default_base_radius() const { return escape_threshold() + 1.0; }

  /// The preimage of w in the branch whose imaginary part satisfies
  /// Im(z) + arg(lambda) = Arg(w) + 2 pi k. Throws ZeroArgument for w = 0.
  std::complex<double> inverse_branch(std::complex<double> w, long long k) const;
  BigComplex inverse_branch(const BigComplex& w, const mpz_class& k) const;

  /// log|lambda| and arg(lambda) at the map's precision.
  const BigFloat& precise_log_abs_lambda() const { return precise_log_abs_lambda_; }
  const BigFloat& precise_arg_lambda() const { return precise_arg_lambda_; }

 private:
  std::complex<double> lambda_;
  double abs_lambda_;
  double log_abs_lambda_;
  double arg_lambda_;
  long precision_bits_;
  BigFloat precise_log_abs_lambda_;
  BigFloat precise_arg_lambda_;
};

/// p-fold composition of log+(x) = log x for x >= 1, 0 otherwise.
double log_plus_p(double x, unsigned p);

/// Principal argument normalized to (-pi, pi] (maps -pi, produced for a negative-zero
/// imaginary part, to pi).
double principal_arg(std::complex<double> w);

}  // namespace escapelab
