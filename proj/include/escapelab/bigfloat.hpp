#pragma once

// Thin value-semantic wrapper over an MPFR real, plus a cartesian complex built on it.
// Every value carries its own binary precision; binary operations round to the larger
// precision of the two operands.

#include <mpfr.h>

#include <complex>
#include <gmpxx.h>
#include <string>
#include <utility>

namespace escapelab {

class BigFloat {
 public:
  static constexpr long kMinPrecision = 53;
  static constexpr long kMaxPrecision = 1024;

  explicit BigFloat(long precision = kMinPrecision);
  BigFloat(double value, long precision);
  BigFloat(const mpz_class& value, long precision);
  BigFloat(const std::string& decimal, long precision);

  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  static BigFloat pi(long precision);

  long precision() const { return static_cast<long>(mpfr_get_prec(value_)); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Decimal string with enough digits to round-trip at this precision.
  std::string to_string() const;
  /// Exact floor / ceiling as GMP integers.
  mpz_class floor_to_mpz() const;
  mpz_class ceil_to_mpz() const;

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  mpfr_ptr raw() { return value_; }
  mpfr_srcptr raw() const { return value_; }

  BigFloat& operator+=(const BigFloat& rhs);
  BigFloat& operator-=(const BigFloat& rhs);
  BigFloat& operator*=(const BigFloat& rhs);
  BigFloat& operator/=(const BigFloat& rhs);

  friend BigFloat operator+(BigFloat lhs, const BigFloat& rhs) { return lhs += rhs; }
  friend BigFloat operator-(BigFloat lhs, const BigFloat& rhs) { return lhs -= rhs; }
  friend BigFloat operator*(BigFloat lhs, const BigFloat& rhs) { return lhs *= rhs; }
  friend BigFloat operator/(BigFloat lhs, const BigFloat& rhs) { return lhs /= rhs; }
  friend BigFloat operator+(BigFloat lhs, double rhs);
  friend BigFloat operator-(BigFloat lhs, double rhs);
  friend BigFloat operator*(BigFloat lhs, double rhs);
  friend BigFloat operator/(BigFloat lhs, double rhs);
  BigFloat operator-() const;

  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.value_, b.value_) != 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.value_, b.value_) != 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.value_, b.value_) != 0; }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend bool operator<(const BigFloat& a, double b) { return mpfr_cmp_d(a.value_, b) < 0; }
  friend bool operator<=(const BigFloat& a, double b) { return mpfr_cmp_d(a.value_, b) <= 0; }
  friend bool operator>(const BigFloat& a, double b) { return mpfr_cmp_d(a.value_, b) > 0; }
  friend bool operator>=(const BigFloat& a, double b) { return mpfr_cmp_d(a.value_, b) >= 0; }

  friend BigFloat exp(const BigFloat& x);
  friend BigFloat log(const BigFloat& x);
  friend BigFloat sin(const BigFloat& x);
  friend BigFloat cos(const BigFloat& x);
  friend BigFloat sqrt(const BigFloat& x);
  friend BigFloat abs(const BigFloat& x);
  friend BigFloat atan2(const BigFloat& y, const BigFloat& x);
  friend BigFloat hypot(const BigFloat& x, const BigFloat& y);
  friend BigFloat pow(const BigFloat& base, long exponent);

 private:
  mpfr_t value_;
};

inline const BigFloat& max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }
inline const BigFloat& min(const BigFloat& a, const BigFloat& b) { return b < a ? b : a; }

struct BigComplex {
  BigFloat re;
  BigFloat im;

  explicit BigComplex(long precision = BigFloat::kMinPrecision) : re(precision), im(precision) {}
  BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
  BigComplex(std::complex<double> z, long precision) : re(z.real(), precision), im(z.imag(), precision) {}

  long precision() const { return re.precision(); }
  BigFloat abs() const { return hypot(re, im); }
  BigFloat arg() const { return atan2(im, re); }
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

}  // namespace escapelab
