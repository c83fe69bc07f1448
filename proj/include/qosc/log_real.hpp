#ifndef QOSC_LOG_REAL_HPP
#define QOSC_LOG_REAL_HPP

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "qosc/errors.hpp"

namespace qosc {

// Signed real number stored as (sign, log|x|). Products and quotients are
// exact in the exponent; sums use log1p so that magnitudes far beyond the
// double range (q^n for large n) stay representable.
class LogReal {
 public:
  LogReal() = default;  // zero

  explicit LogReal(double x) {
    if (std::isnan(x)) throw domain_error("LogReal: NaN input");
    if (x == 0.0) return;
    sign_ = x > 0 ? 1 : -1;
    log_abs_ = std::log(std::fabs(x));
  }

  static LogReal from_log(double log_abs, int sign = 1) {
    LogReal r;
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return r;
    r.sign_ = sign > 0 ? 1 : -1;
    r.log_abs_ = log_abs;
    return r;
  }

  int sign() const noexcept { return sign_; }
  bool is_zero() const noexcept { return sign_ == 0; }
  // log|x|; -inf for zero.
  double log_abs() const noexcept {
    return sign_ == 0 ? -std::numeric_limits<double>::infinity() : log_abs_;
  }
  double value() const noexcept { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_abs_); }
  bool fits_double() const noexcept { return sign_ == 0 || log_abs_ < 709.78; }

  LogReal operator-() const noexcept {
    LogReal r = *this;
    r.sign_ = -r.sign_;
    return r;
  }

  LogReal& operator*=(const LogReal& o) noexcept {
    if (sign_ == 0 || o.sign_ == 0) {
      *this = LogReal();
    } else {
      sign_ *= o.sign_;
      log_abs_ += o.log_abs_;
    }
    return *this;
  }

  LogReal& operator/=(const LogReal& o) {
    if (o.sign_ == 0) throw domain_error("LogReal: division by zero");
    if (sign_ != 0) {
      sign_ *= o.sign_;
      log_abs_ -= o.log_abs_;
    }
    return *this;
  }

  LogReal& operator+=(const LogReal& o) noexcept {
    if (o.sign_ == 0) return *this;
    if (sign_ == 0) {
      *this = o;
      return *this;
    }
    const bool self_larger = log_abs_ >= o.log_abs_;
    const double hi = self_larger ? log_abs_ : o.log_abs_;
    const double lo = self_larger ? o.log_abs_ : log_abs_;
    const int hi_sign = self_larger ? sign_ : o.sign_;
    const double ratio = std::exp(lo - hi);
    if (sign_ == o.sign_) {
      log_abs_ = hi + std::log1p(ratio);
      sign_ = hi_sign;
    } else if (ratio == 1.0) {
      *this = LogReal();
    } else {
      log_abs_ = hi + std::log1p(-ratio);
      sign_ = hi_sign;
    }
    return *this;
  }

  LogReal& operator-=(const LogReal& o) noexcept { return *this += -o; }

  friend LogReal operator*(LogReal a, const LogReal& b) noexcept { return a *= b; }
  friend LogReal operator/(LogReal a, const LogReal& b) { return a /= b; }
  friend LogReal operator+(LogReal a, const LogReal& b) noexcept { return a += b; }
  friend LogReal operator-(LogReal a, const LogReal& b) noexcept { return a -= b; }

  friend LogReal operator*(LogReal a, double b) { return a *= LogReal(b); }
  friend LogReal operator*(double a, LogReal b) { return b *= LogReal(a); }
  friend LogReal operator/(LogReal a, double b) { return a /= LogReal(b); }
  friend LogReal operator+(LogReal a, double b) { return a += LogReal(b); }
  friend LogReal operator+(double a, LogReal b) { return b += LogReal(a); }
  friend LogReal operator/(double a, const LogReal& b) { return LogReal(a) / b; }
  friend LogReal operator-(LogReal a, double b) { return a -= LogReal(b); }
  friend LogReal operator-(double a, const LogReal& b) { return LogReal(a) - b; }

  friend bool operator==(const LogReal& a, const LogReal& b) noexcept {
    return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log_abs_ == b.log_abs_);
  }
  friend bool operator<(const LogReal& a, const LogReal& b) noexcept {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    if (a.sign_ == 0) return false;
    return a.sign_ > 0 ? a.log_abs_ < b.log_abs_ : a.log_abs_ > b.log_abs_;
  }
  friend bool operator>(const LogReal& a, const LogReal& b) noexcept { return b < a; }
  friend bool operator<=(const LogReal& a, const LogReal& b) noexcept { return !(b < a); }
  friend bool operator>=(const LogReal& a, const LogReal& b) noexcept { return !(a < b); }

  // Decimal rendering with `digits` significant digits, valid far outside
  // the double range ("1.2345678901234567e+1234").
  std::string to_string(int digits = 17) const {
    if (sign_ == 0) return "0";
    if (fits_double() && log_abs_ > -708.0) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*g", digits, value());
      return buf;
    }
    const double l10 = log_abs_ / std::log(10.0);
    double exponent = std::floor(l10);
    double mantissa = std::pow(10.0, l10 - exponent);
    // round first so that 9.99.. cannot print as 10.0
    const double unit = std::pow(10.0, digits - 1);
    mantissa = std::round(mantissa * unit) / unit;
    if (mantissa >= 10.0) {
      mantissa /= 10.0;
      exponent += 1.0;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s%.*fe%+.0f", sign_ < 0 ? "-" : "", digits - 1, mantissa,
                  exponent);
    return buf;
  }

 private:
  int sign_ = 0;
  double log_abs_ = 0.0;
};

inline LogReal sqrt(const LogReal& x) {
  if (x.sign() < 0) throw domain_error("LogReal: sqrt of negative value");
  return LogReal::from_log(0.5 * x.log_abs(), x.sign());
}

inline LogReal abs(const LogReal& x) { return LogReal::from_log(x.log_abs(), x.is_zero() ? 0 : 1); }

// Integer power; sign follows parity of the exponent.
inline LogReal pow(const LogReal& x, int k) {
  if (k == 0) return LogReal(1.0);
  if (x.is_zero()) {
    if (k < 0) throw domain_error("LogReal: negative power of zero");
    return LogReal();
  }
  const int s = (x.sign() < 0 && (k % 2 != 0)) ? -1 : 1;
  return LogReal::from_log(k * x.log_abs(), s);
}

}  // namespace qosc

#endif  // QOSC_LOG_REAL_HPP
