#ifndef QOSC_QCALC_HPP
#define QOSC_QCALC_HPP

// q-deformed arithmetic and the basic hypergeometric series used by the
// oscillator solution: q-numbers, q-factorials, q-Pochhammer symbols, the
// q-exponential, the q-derivative on coefficient vectors, the 1phi0 series
// and terminating 2phi1 series (with little q-Jacobi polynomials on top).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "qosc/errors.hpp"
#include "qosc/log_real.hpp"
#include "qosc/scalar.hpp"

namespace qosc {

// Truncation policy for infinite series.
struct SeriesControl {
  double tol = 1e-14;    // absolute tail bound
  int max_terms = 10000;

  void validate() const {
    if (!(tol > 0.0)) throw domain_error("SeriesControl: tol must be positive");
    if (max_terms < 1) throw domain_error("SeriesControl: max_terms must be >= 1");
  }
};

namespace detail {

inline void require_positive_base(double q, const char* what) {
  if (!(q > 0.0) || !std::isfinite(q))
    throw domain_error(std::string(what) + ": base q must be finite and positive");
}

// Below this |q-1| the q-number is summed as a binomial series in (q-1).
inline constexpr double kNearOneThreshold = 1e-8;

// [x]_q for real x, double precision.
inline double q_number_real(double x, double q) {
  const double delta = q - 1.0;
  if (delta == 0.0) return x;
  if (std::fabs(delta) < kNearOneThreshold && std::fabs(x * delta) < 0.5) {
    // ((1+d)^x - 1)/d = sum_k C(x, k+1) d^k
    double sum = x;
    double binom = x;  // C(x, 1)
    for (int k = 1; k < 64; ++k) {
      binom *= (x - k) / (k + 1.0);
      const double term = binom * std::pow(delta, k);
      sum += term;
      if (std::fabs(term) <= 1e-17 * std::fabs(sum)) break;
    }
    return sum;
  }
  return std::expm1(x * std::log1p(delta)) / delta;
}

}  // namespace detail

// [n]_q = (q^n - 1)/(q - 1); equals n at q = 1. Negative n follows the same
// formula (formal extension).
template <Scalar S = double>
S q_number(int n, double q) {
  detail::require_positive_base(q, "q_number");
  if constexpr (std::is_same_v<S, double>) {
    const double r = detail::q_number_real(n, q);
    scalar::require_finite(r, "q_number");
    return r;
  } else {
    const double delta = q - 1.0;
    const double x = n * std::log1p(delta);
    if (std::fabs(x) < 700.0) return LogReal(detail::q_number_real(n, q));
    const LogReal num = scalar::expm1<LogReal>(x);
    return num / LogReal(delta);
  }
}

// [n]_q! with [0]_q! = 1.
template <Scalar S = double>
S q_factorial(int n, double q) {
  if (n < 0) throw domain_error("q_factorial: n must be >= 0");
  S acc = scalar::from_double<S>(1.0);
  for (int j = 2; j <= n; ++j) {
    acc = acc * q_number<S>(j, q);
    scalar::require_finite(acc, "q_factorial");
  }
  return acc;
}

// [n]_q!! = [n]_q [n-2]_q ... down to [1]_q or [2]_q; 1 for n = 0 and n = -1.
template <Scalar S = double>
S q_double_factorial(int n, double q) {
  if (n < -1) throw domain_error("q_double_factorial: n must be >= -1");
  S acc = scalar::from_double<S>(1.0);
  for (int j = n; j > 1; j -= 2) {
    acc = acc * q_number<S>(j, q);
    scalar::require_finite(acc, "q_double_factorial");
  }
  return acc;
}

// (a; q)_n = (1 - a)(1 - a q)...(1 - a q^{n-1}).
template <Scalar S = double>
S q_pochhammer(double a, double q, int n) {
  if (n < 0) throw domain_error("q_pochhammer: n must be >= 0");
  detail::require_positive_base(q, "q_pochhammer");
  S acc = scalar::from_double<S>(1.0);
  const double log_q = std::log(q);
  for (int k = 0; k < n; ++k) {
    const double aqk = a * std::pow(q, k);
    if (std::isfinite(aqk)) {
      acc = acc * scalar::from_double<S>(1.0 - aqk);
    } else if constexpr (std::is_same_v<S, LogReal>) {
      // |a q^k| beyond double range: 1 - a q^k == -a q^k to working precision.
      acc = acc * (LogReal(-a) * LogReal::from_log(k * log_q));
    } else {
      throw overflow_error("q_pochhammer: factor overflows double precision");
    }
    scalar::require_finite(acc, "q_pochhammer");
  }
  return acc;
}

// log [n]_q! accumulated without overflow.
inline double log_q_factorial(int n, double q) { return q_factorial<LogReal>(n, q).log_abs(); }

// c sqrt([n]_q), finite whenever the product is; c = 0 gives 0 even when
// [n]_q itself overflows.
inline double times_sqrt_q_number(double c, int n, double q) {
  if (c == 0.0) return 0.0;
  return (LogReal(c) * sqrt(q_number<LogReal>(n, q))).value();
}

inline double log_q_double_factorial(int n, double q) {
  return q_double_factorial<LogReal>(n, q).log_abs();
}

// ---------------------------------------------------------------------------
// Coefficient-vector calculus. Entry m of a vector is the coefficient of xi^m.

// D_q: xi^m -> [m]_q xi^{m-1}.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> q_derivative(
    const Eigen::MatrixBase<Derived>& c, double q) {
  using T = typename Derived::Scalar;
  const Eigen::Index n = c.size();
  if (n <= 1) return Eigen::Matrix<T, Eigen::Dynamic, 1>::Zero(1);
  Eigen::Matrix<T, Eigen::Dynamic, 1> out(n - 1);
  for (Eigen::Index m = 1; m < n; ++m) out(m - 1) = q_number(static_cast<int>(m), q) * c(m);
  return out;
}

// f(xi) -> f(lambda xi).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> dilate(
    const Eigen::MatrixBase<Derived>& c, double lambda) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out = c;
  double power = 1.0;
  for (Eigen::Index m = 0; m < out.size(); ++m) {
    out(m) *= power;
    power *= lambda;
  }
  return out;
}

// f(xi) -> xi f(xi).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> multiply_by_xi(
    const Eigen::MatrixBase<Derived>& c) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(c.size() + 1);
  out(0) = 0;
  out.tail(c.size()) = c;
  return out;
}

template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, 1> poly_mul(const Eigen::MatrixBase<DA>& a,
                                                                const Eigen::MatrixBase<DB>& b) {
  Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, 1> out =
      Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, 1>::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i + j) += a(i) * b(j);
  return out;
}

// Sum of two coefficient vectors of possibly different length.
template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, 1> poly_add(const Eigen::MatrixBase<DA>& a,
                                                                const Eigen::MatrixBase<DB>& b) {
  Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, 1> out =
      Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, 1>::Zero(std::max(a.size(), b.size()));
  out.head(a.size()) += a;
  out.head(b.size()) += b;
  return out;
}

// Horner evaluation.
template <typename Derived>
typename Derived::Scalar poly_eval(const Eigen::MatrixBase<Derived>& c,
                                   typename Derived::Scalar x) {
  typename Derived::Scalar acc = 0;
  for (Eigen::Index m = c.size() - 1; m >= 0; --m) acc = acc * x + c(m);
  return acc;
}

// ---------------------------------------------------------------------------
// Series.

// Coefficients a^n / [n]_q! of E_q(a xi), truncated once the next term
// magnitude at |xi| = radius drops below ctl.tol.
Eigen::VectorXd q_exp_coefficients(double a, double q, const SeriesControl& ctl = {},
                                   double radius = 1.0);

// 1phi0(a; -; base, z) = sum_k (a; base)_k / (base; base)_k z^k.
double one_phi_zero(double a, double base, double z, const SeriesControl& ctl = {});

// 1phi0 with numerator parameter a = base^lambda. The term ratio is written
// with q-numbers, so the formal base -> 1 limit (binomial series
// (1 - z)^{-lambda}) is evaluated without 0/0.
double one_phi_zero_power(double lambda, double base, double z, const SeriesControl& ctl = {});

// Term coefficients T_k, k = 0..n, of the terminating series
// 2phi1(base^{-n}, a2; b1; base, z) = sum_k T_k z^k.
Eigen::VectorXd two_phi_one_terms(int n, double a2, double b1, double base);

double two_phi_one_terminating(int n, double a2, double b1, double base, double z);

// Coefficients in x of p_n(x; a, b; base) = 2phi1(base^{-n}, a b base^{n+1}; a base; base, base x).
Eigen::VectorXd little_q_jacobi_coefficients(int n, double a, double b, double base);

double little_q_jacobi(int n, double x, double a, double b, double base);

}  // namespace qosc

#endif  // QOSC_QCALC_HPP
