#include "escapelab/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace escapelab {

namespace {

long checked(long precision) {
  if (precision < BigFloat::kMinPrecision || precision > BigFloat::kMaxPrecision) {
    throw std::invalid_argument("precision must lie in [53, 1024] bits, got " + std::to_string(precision));
  }
  return precision;
}

long wider(const BigFloat& a, const BigFloat& b) { return std::max(a.precision(), b.precision()); }

}  // namespace

BigFloat::BigFloat(long precision) {
  mpfr_init2(value_, checked(precision));
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double value, long precision) {
  mpfr_init2(value_, checked(precision));
  mpfr_set_d(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const mpz_class& value, long precision) {
  mpfr_init2(value_, checked(precision));
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const std::string& decimal, long precision) {
  mpfr_init2(value_, checked(precision));
  if (mpfr_set_str(value_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(value_);
    throw std::invalid_argument("not a decimal number: " + decimal);
  }
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

BigFloat BigFloat::pi(long precision) {
  BigFloat out(precision);
  mpfr_const_pi(out.value_, MPFR_RNDN);
  return out;
}

std::string BigFloat::to_string() const {
  if (!is_finite()) {
    return mpfr_nan_p(value_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
  }
  if (is_zero()) return "0";
  // Digits needed to round-trip: 1 + ceil(p * log10(2)).
  const auto digits = static_cast<std::size_t>(1 + std::ceil(precision() * 0.30102999566398120));
  mpfr_exp_t exponent = 0;
  char* raw_digits = mpfr_get_str(nullptr, &exponent, 10, digits, value_, MPFR_RNDN);
  std::string mantissa(raw_digits);
  mpfr_free_str(raw_digits);
  std::string out;
  if (!mantissa.empty() && mantissa.front() == '-') {
    out.push_back('-');
    mantissa.erase(0, 1);
  }
  out += mantissa.substr(0, 1);
  out += '.';
  out += mantissa.substr(1);
  out += 'e';
  out += std::to_string(static_cast<long>(exponent) - 1);
  return out;
}

mpz_class BigFloat::floor_to_mpz() const {
  mpz_class out;
  BigFloat tmp(precision());
  mpfr_floor(tmp.value_, value_);
  mpfr_get_z(out.get_mpz_t(), tmp.value_, MPFR_RNDD);
  return out;
}

mpz_class BigFloat::ceil_to_mpz() const {
  mpz_class out;
  BigFloat tmp(precision());
  mpfr_ceil(tmp.value_, value_);
  mpfr_get_z(out.get_mpz_t(), tmp.value_, MPFR_RNDU);
  return out;
}

BigFloat& BigFloat::operator+=(const BigFloat& rhs) {
  const long p = wider(*this, rhs);
  if (p > precision()) mpfr_prec_round(value_, p, MPFR_RNDN);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& rhs) {
  const long p = wider(*this, rhs);
  if (p > precision()) mpfr_prec_round(value_, p, MPFR_RNDN);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& rhs) {
  const long p = wider(*this, rhs);
  if (p > precision()) mpfr_prec_round(value_, p, MPFR_RNDN);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& rhs) {
  const long p = wider(*this, rhs);
  if (p > precision()) mpfr_prec_round(value_, p, MPFR_RNDN);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

BigFloat operator+(BigFloat lhs, double rhs) {
  mpfr_add_d(lhs.value_, lhs.value_, rhs, MPFR_RNDN);
  return lhs;
}

BigFloat operator-(BigFloat lhs, double rhs) {
  mpfr_sub_d(lhs.value_, lhs.value_, rhs, MPFR_RNDN);
  return lhs;
}

BigFloat operator*(BigFloat lhs, double rhs) {
  mpfr_mul_d(lhs.value_, lhs.value_, rhs, MPFR_RNDN);
  return lhs;
}

BigFloat operator/(BigFloat lhs, double rhs) {
  mpfr_div_d(lhs.value_, lhs.value_, rhs, MPFR_RNDN);
  return lhs;
}

BigFloat BigFloat::operator-() const {
  BigFloat out(*this);
  mpfr_neg(out.value_, out.value_, MPFR_RNDN);
  return out;
}

BigFloat exp(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_exp(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigFloat log(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_log(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigFloat sin(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_sin(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigFloat cos(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_cos(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigFloat sqrt(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_sqrt(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigFloat abs(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_abs(out.value_, x.value_, MPFR_RNDN);
  return out;
}

BigFloat atan2(const BigFloat& y, const BigFloat& x) {
  BigFloat out(wider(x, y));
  mpfr_atan2(out.value_, y.value_, x.value_, MPFR_RNDN);
  return out;
}

BigFloat hypot(const BigFloat& x, const BigFloat& y) {
  BigFloat out(wider(x, y));
  mpfr_hypot(out.value_, x.value_, y.value_, MPFR_RNDN);
  return out;
}

BigFloat pow(const BigFloat& base, long exponent) {
  BigFloat out(base.precision());
  mpfr_pow_si(out.value_, base.value_, exponent, MPFR_RNDN);
  return out;
}

}  // namespace escapelab
