#include "qosc/qcalc.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace qosc {

Eigen::VectorXd q_exp_coefficients(double a, double q, const SeriesControl& ctl, double radius) {
  ctl.validate();
  // E_q is entire only for q >= 1; q < 1 is not needed anywhere.
  if (!(q >= 1.0)) throw domain_error("q_exp_coefficients: requires q >= 1");
  if (!(radius >= 0.0)) throw domain_error("q_exp_coefficients: radius must be >= 0");

  std::vector<double> coeffs{1.0};
  double c = 1.0;
  double scale = 1.0;  // radius^n
  for (int n = 1; n <= ctl.max_terms; ++n) {
    c *= a / q_number(n, q);
    scale *= radius;
    if (std::fabs(c) * scale < ctl.tol || c == 0.0) {
      return Eigen::Map<Eigen::VectorXd>(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    }
    coeffs.push_back(c);
  }
  throw convergence_error("q_exp_coefficients: no convergence within max_terms");
}

namespace {

// Sum a series from its term-ratio function. `asymptotic_ratio` bounds the
// magnitude of every later ratio, which turns the last term into a
// geometric tail bound.
template <typename RatioFn>
double sum_by_ratio(RatioFn ratio, double asymptotic_ratio, const SeriesControl& ctl,
                    const char* what) {
  ctl.validate();
  if (asymptotic_ratio >= 1.0)
    throw convergence_error(std::string(what) + ": divergent parameters (term ratio -> " +
                            std::to_string(asymptotic_ratio) + ")");
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    const double r = ratio(k);
    term *= r;
    sum += term;
    if (term == 0.0) return sum;
    const double rho = std::max(std::fabs(r), asymptotic_ratio);
    if (rho < 1.0 && std::fabs(term) * rho / (1.0 - rho) < ctl.tol) return sum;
  }
  throw convergence_error(std::string(what) + ": no convergence within max_terms");
}

}  // namespace

double one_phi_zero(double a, double base, double z, const SeriesControl& ctl) {
  detail::require_positive_base(base, "one_phi_zero");
  if (z == 0.0) return 1.0;
  if (base == 1.0)
    throw domain_error("one_phi_zero: base 1 is 0/0 here; use one_phi_zero_power");
  const double asym = base > 1.0 ? std::fabs(a * z / base) : std::fabs(z);
  auto ratio = [&](int k) {
    if (base > 1.0) {
      const double inv = std::pow(base, -k);
      return z * (inv - a) / (inv - base);
    }
    return z * (1.0 - a * std::pow(base, k)) / (1.0 - std::pow(base, k + 1));
  };
  return sum_by_ratio(ratio, asym, ctl, "one_phi_zero");
}

double one_phi_zero_power(double lambda, double base, double z, const SeriesControl& ctl) {
  detail::require_positive_base(base, "one_phi_zero_power");
  if (z == 0.0) return 1.0;
  const double log_base = std::log(base);
  const double asym =
      base > 1.0 ? std::fabs(z) * std::pow(base, lambda - 1.0) : std::fabs(z);
  auto ratio = [&](int k) {
    if ((k + 1.0) * std::fabs(log_base) < 50.0) {
      return z * detail::q_number_real(lambda + k, base) / detail::q_number_real(k + 1.0, base);
    }
    // [lambda+k]/[k+1] = (base^{-k} - base^lambda)/(base^{-k} - base), overflow-free
    const double inv = std::exp(-k * log_base);
    return z * (inv - std::exp(lambda * log_base)) / (inv - base);
  };
  return sum_by_ratio(ratio, asym, ctl, "one_phi_zero_power");
}

Eigen::VectorXd two_phi_one_terms(int n, double a2, double b1, double base) {
  if (n < 0) throw domain_error("two_phi_one_terms: n must be >= 0");
  detail::require_positive_base(base, "two_phi_one_terms");
  if (base == 1.0) throw domain_error("two_phi_one_terms: base must differ from 1");
  Eigen::VectorXd terms(n + 1);
  terms(0) = 1.0;
  for (int k = 0; k < n; ++k) {
    const double bk = std::pow(base, k);
    const double den = (1.0 - base * bk) * (1.0 - b1 * bk);
    if (den == 0.0)
      throw domain_error("two_phi_one_terms: vanishing denominator factor (b1 = base^-" +
                         std::to_string(k) + ")");
    const double num = (1.0 - std::pow(base, k - n)) * (1.0 - a2 * bk);
    terms(k + 1) = terms(k) * num / den;
  }
  return terms;
}

double two_phi_one_terminating(int n, double a2, double b1, double base, double z) {
  return poly_eval(two_phi_one_terms(n, a2, b1, base), z);
}

Eigen::VectorXd little_q_jacobi_coefficients(int n, double a, double b, double base) {
  Eigen::VectorXd c = two_phi_one_terms(n, a * b * std::pow(base, n + 1), a * base, base);
  return dilate(c, base);
}

double little_q_jacobi(int n, double x, double a, double b, double base) {
  return poly_eval(little_q_jacobi_coefficients(n, a, b, base), x);
}

}  // namespace qosc
