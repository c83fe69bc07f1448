#ifndef QOSC_SCALAR_HPP
#define QOSC_SCALAR_HPP

#include <cmath>
#include <concepts>
#include <string>
#include <type_traits>

#include "qosc/errors.hpp"
#include "qosc/log_real.hpp"

namespace qosc {

// The two scalar kinds the closed forms are written against: plain doubles
// (overflow raises qosc::overflow_error) and LogReal (never overflows).
template <class S>
concept Scalar = std::same_as<S, double> || std::same_as<S, LogReal>;

namespace scalar {

template <Scalar S>
S from_double(double x) {
  return S(x);
}

template <Scalar S>
void require_finite(const S& x, const char* what) {
  if constexpr (std::is_same_v<S, double>) {
    if (!std::isfinite(x))
      throw overflow_error(std::string(what) + ": result is not finite in double precision");
  } else {
    (void)x;
    (void)what;
  }
}

// e^x
template <Scalar S>
S exp(double x) {
  if constexpr (std::is_same_v<S, double>) {
    const double r = std::exp(x);
    require_finite(r, "exp");
    return r;
  } else {
    return LogReal::from_log(x);
  }
}

// e^x - 1 without cancellation for small |x|.
template <Scalar S>
S expm1(double x) {
  if constexpr (std::is_same_v<S, double>) {
    const double r = std::expm1(x);
    require_finite(r, "expm1");
    return r;
  } else {
    if (x == 0.0) return LogReal();
    if (x < 0.0) return LogReal::from_log(std::log(-std::expm1(x)), -1);
    if (x > 30.0) return LogReal::from_log(x + std::log1p(-std::exp(-x)));
    return LogReal::from_log(std::log(std::expm1(x)));
  }
}

template <Scalar S>
S sinh(double x) {
  if constexpr (std::is_same_v<S, double>) {
    const double r = std::sinh(x);
    require_finite(r, "sinh");
    return r;
  } else {
    if (x == 0.0) return LogReal();
    const double ax = std::fabs(x);
    const int s = x > 0 ? 1 : -1;
    if (ax > 30.0) return LogReal::from_log(ax - std::log(2.0) + std::log1p(-std::exp(-2.0 * ax)), s);
    return LogReal::from_log(std::log(std::sinh(ax)), s);
  }
}

inline double to_double(double x) { return x; }
inline double to_double(const LogReal& x) { return x.value(); }

inline double log_abs(double x) { return std::log(std::fabs(x)); }
inline double log_abs(const LogReal& x) { return x.log_abs(); }

inline std::string to_string(double x, int digits = 17) { return LogReal(x).to_string(digits); }
inline std::string to_string(const LogReal& x, int digits = 17) { return x.to_string(digits); }

}  // namespace scalar
}  // namespace qosc

#endif  // QOSC_SCALAR_HPP
