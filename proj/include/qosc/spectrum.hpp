#ifndef QOSC_SPECTRUM_HPP
#define QOSC_SPECTRUM_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qosc/deformation.hpp"
#include "qosc/errors.hpp"
#include "qosc/qcalc.hpp"
#include "qosc/scalar.hpp"

namespace qosc {

// Below this alpha*beta the exponential formula is replaced by the quadratic
// single-parameter spectrum.
inline constexpr double kQuadraticSpectrumThreshold = 1e-20;

// Quadratic spectrum of the alpha = 0 oscillator:
// (n + 1/2) sqrt(1 + beta^2/4) + beta (n^2 + n + 1/2)/2.
inline double energy_alpha_zero(double beta, int n) {
  if (beta < 0.0) throw domain_error("energy_alpha_zero: beta must be >= 0");
  if (n < 0) throw domain_error("energy_alpha_zero: n must be >= 0");
  const double nn = n;
  return (nn + 0.5) * std::sqrt(1.0 + 0.25 * beta * beta) + 0.5 * beta * (nn * nn + nn + 0.5);
}

// alpha = beta spectrum (q + 1)([n]_q + [n+1]_q)/4.
template <Scalar S = double>
S energy_equal(double q, int n) {
  if (n < 0) throw domain_error("energy_equal: n must be >= 0");
  if (!(q >= 1.0)) throw domain_error("energy_equal: requires q >= 1");
  const S r = (q + 1.0) / 4.0 * (q_number<S>(n, q) + q_number<S>(n + 1, q));
  scalar::require_finite(r, "energy_equal");
  return r;
}

namespace detail {

inline void require_level(int n, const char* what) {
  if (n < 0) throw domain_error(std::string(what) + ": n must be >= 0");
}

// The surviving parameter when the spectrum degenerates to the quadratic one.
inline double quadratic_parameter(const DerivedParams& dp) {
  return std::max(dp.params.alpha, dp.params.beta);
}

inline bool uses_quadratic_spectrum(const DerivedParams& dp) {
  if (dp.regime == Regime::alpha_zero || dp.regime == Regime::beta_zero) return true;
  if (dp.regime == Regime::general)
    return dp.params.alpha * dp.params.beta <= kQuadraticSpectrumThreshold;
  return false;
}

}  // namespace detail

// Exponential spectrum
//   e_n = u^2/(4 gamma) {(1 - t^2/q^{n-1}) [n]_q + (q^n - t^2/q^n)/2}
// evaluated as
//   g s ([n]_q + q^n/2) + v^2/(4 gamma) {(1 - q^{1-n}) [n]_q + sinh(n ln q)}
// which is the same expression with u^2 - v^2 = 4 gamma g s substituted, so
// nothing cancels when t -> -1 and q -> 1 together. Every term is >= 0.
template <Scalar S = double>
S energy_general(const DerivedParams& dp, int n) {
  detail::require_level(n, "energy");
  const double gamma = dp.gamma_value();
  const double v = dp.v_value();
  const double gs = dp.g * dp.s;
  const double w = v * v / (4.0 * gamma);
  const double lq = dp.log_q;
  const S qn = q_number<S>(n, dp.q);
  const S qpow = scalar::exp<S>(n * lq);
  S e = gs * (qn + qpow / 2.0);
  if (w != 0.0 && n > 0) {
    const S shrink = -scalar::expm1<S>((1 - n) * lq);  // 1 - q^{1-n}
    e = e + w * (shrink * qn + scalar::sinh<S>(n * lq));
  }
  scalar::require_finite(e, "energy");
  return e;
}

// e_n for any regime; single-parameter regimes use the quadratic spectrum.
template <Scalar S = double>
S energy(const DerivedParams& dp, int n) {
  detail::require_level(n, "energy");
  if (detail::uses_quadratic_spectrum(dp))
    return scalar::from_double<S>(energy_alpha_zero(detail::quadratic_parameter(dp), n));
  return energy_general<S>(dp, n);
}

// e_n - e_0 = K^2 (1 - t^2/q^n) [n]_q / 2, evaluated as
// (q + 1)/2 {g s + v^2/(4 gamma) (1 - q^{-n})} [n]_q.
template <Scalar S = double>
S excitation_energy(const DerivedParams& dp, int n) {
  detail::require_level(n, "excitation_energy");
  if (detail::uses_quadratic_spectrum(dp)) {
    const double beta = detail::quadratic_parameter(dp);
    const double nn = n;
    return scalar::from_double<S>(nn * std::sqrt(1.0 + 0.25 * beta * beta) +
                                  0.5 * beta * (nn * nn + nn));
  }
  const double gamma = dp.gamma_value();
  const double v = dp.v_value();
  const double w = v * v / (4.0 * gamma);
  const S shrink = -scalar::expm1<S>(-n * dp.log_q);  // 1 - q^{-n}
  const S r = (dp.q + 1.0) / 2.0 * (dp.g * dp.s + w * shrink) * q_number<S>(n, dp.q);
  scalar::require_finite(r, "excitation_energy");
  return r;
}

struct SpectrumRequest {
  DerivedParams dp;
  int n_max = 10;
  bool log_domain = false;
};

template <Scalar S>
struct SpectrumRow {
  int n = 0;
  S energy{};
  S excitation{};
};

// Rows n = 0..n_max. Strict monotonicity is checked, not assumed.
template <Scalar S = double>
std::vector<SpectrumRow<S>> spectrum_table(const SpectrumRequest& req) {
  if (req.n_max < 0) throw domain_error("spectrum_table: n_max must be >= 0");
  std::vector<SpectrumRow<S>> rows;
  rows.reserve(static_cast<std::size_t>(req.n_max) + 1);
  for (int n = 0; n <= req.n_max; ++n) {
    SpectrumRow<S> row{n, energy<S>(req.dp, n), excitation_energy<S>(req.dp, n)};
    if (!rows.empty() && !(row.energy > rows.back().energy))
      throw consistency_error("spectrum_table: e_" + std::to_string(n) +
                              " is not above e_" + std::to_string(n - 1) +
                              " (precision collapse)");
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qosc

#endif  // QOSC_SPECTRUM_HPP
