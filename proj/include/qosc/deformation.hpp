#ifndef QOSC_DEFORMATION_HPP
#define QOSC_DEFORMATION_HPP

// Parameters of the oscillator under [X, P] = i(1 + alpha X^2 + beta P^2):
// the factorization constants (k, g, s), the scaling-shape-invariance
// variables (gamma, q, u, v, t, d, K) and the partner-Hamiltonian hierarchy
// h_i = (a_i P^2 + b_i X^2)/2 + c_i.

#include <cmath>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "qosc/errors.hpp"
#include "qosc/log_real.hpp"
#include "qosc/scalar.hpp"

namespace qosc {

struct DeformationParams {
  double alpha = 0.0;
  double beta = 0.0;

  // Throws qosc::domain_error unless alpha >= 0, beta >= 0, alpha*beta < 1.
  void validate() const;
};

enum class Regime { general, alpha_zero, beta_zero, equal, undeformed };

std::string_view to_string(Regime r);

// Parameters below this are treated as exactly zero.
inline constexpr double kZeroParameter = 1e-12;

struct DerivedParams {
  DeformationParams params;  // as classified: sub-threshold parameters are zeroed
  Regime regime = Regime::undeformed;

  double k = 1.0;
  double g = 1.0;
  double s = 1.0;
  double q = 1.0;
  double log_q = 0.0;  // 2 atanh(sqrt(alpha beta)), exact near q = 1
  double eps0 = 0.5;

  // Undefined when exactly one of alpha, beta vanishes (gamma = sqrt(beta/alpha)
  // is 0 or infinite); that case is described by the translation hierarchy.
  std::optional<double> gamma;
  std::optional<double> u;
  std::optional<double> v;
  std::optional<double> t;
  std::optional<double> d;
  std::optional<double> big_k;

  double sqrt_alpha_beta() const { return std::sqrt(params.alpha * params.beta); }

  // True when the q-boson (Fock) representation exists: general, equal and
  // undeformed regimes.
  bool has_fock_representation() const { return gamma.has_value(); }

  // Accessors for the Fock-representation variables; throw domain_error in
  // the single-parameter regimes.
  double gamma_value() const;
  double u_value() const;
  double v_value() const;
  double t_value() const;
  double big_k_value() const;
};

DerivedParams derive(const DeformationParams& params);

template <Scalar S>
struct HierarchyLevel {
  int index = 0;
  S g{};
  S s{};
  std::optional<S> u;
  std::optional<S> v;
  std::optional<double> t;
  S gs{};   // g_i s_i
  S eps{};  // factorization energy epsilon_i
  S a{};    // h_i = (a_i P^2 + b_i X^2)/2 + c_i
  S b{};
  S c{};
  S mass_ratio{};  // m_i / m = 1 / a_i
  S freq_ratio{};  // omega_i / omega = sqrt(a_i b_i)
};

// Number of levels whose q^i growth still fits a double.
inline int max_double_levels(const DerivedParams& dp) {
  if (dp.log_q == 0.0) return std::numeric_limits<int>::max();
  const double limit = 700.0 / dp.log_q;
  return limit > 1e9 ? std::numeric_limits<int>::max() : static_cast<int>(limit);
}

// Levels 0..levels-1 of the partner hierarchy. Level 0 is h = (P^2 + X^2)/2.
template <Scalar S>
std::vector<HierarchyLevel<S>> hierarchy(const DerivedParams& dp, int levels) {
  if (levels < 1) throw domain_error("hierarchy: levels must be >= 1");
  using std::sqrt;
  std::vector<HierarchyLevel<S>> out;
  out.reserve(static_cast<std::size_t>(levels));
  const auto one = scalar::from_double<S>(1.0);
  S c_acc = scalar::from_double<S>(0.0);

  for (int i = 0; i < levels; ++i) {
    HierarchyLevel<S> L;
    L.index = i;
    if (dp.regime == Regime::alpha_zero) {
      // translation shape invariance: g_i = g + i beta, s_i = 1
      L.g = scalar::from_double<S>(dp.g + i * dp.params.beta);
      L.s = one;
      L.gs = L.g;
      L.a = L.g * (L.g - scalar::from_double<S>(dp.params.beta));
      L.b = one;
    } else if (dp.regime == Regime::beta_zero) {
      // mirror image under X <-> P
      L.g = one;
      L.s = scalar::from_double<S>(dp.s + i * dp.params.alpha);
      L.gs = L.s;
      L.a = one;
      L.b = L.s * (L.s - scalar::from_double<S>(dp.params.alpha));
    } else {
      const double gamma = *dp.gamma;
      const double v = *dp.v;
      const double h = 0.5 * i * dp.log_q;
      const S grow = scalar::exp<S>(h);
      const S sh = scalar::sinh<S>(h);
      // g_i = (u_i + v_i)/2, s_i = (u_i - v_i)/(2 gamma) with u_i = q^{i/2} u,
      // v_i = q^{-i/2} v, rewritten so the large u, v never cancel.
      L.g = dp.g * grow - v * sh;
      L.s = dp.s * grow + (v / gamma) * sh;
      L.u = *dp.u * grow;
      L.v = v * scalar::exp<S>(-h);
      L.t = *dp.t * std::exp(-2.0 * h);
      L.gs = L.g * L.s;
      const double two_over_q1 = 2.0 / (dp.q + 1.0);  // 1 - sqrt(alpha beta)
      const double qm1_half = 0.5 * (dp.q - 1.0);
      L.a = two_over_q1 * L.g * (L.g + qm1_half * *L.v);
      L.b = two_over_q1 * L.s * (L.s - (qm1_half / gamma) * *L.v);
    }
    L.eps = i == 0 ? L.gs / 2.0 : (out.back().gs + L.gs) / 2.0;
    L.c = c_acc;
    c_acc = c_acc + L.gs;
    L.mass_ratio = one / L.a;
    L.freq_ratio = sqrt(L.a * L.b);
    scalar::require_finite(L.gs, "hierarchy");
    scalar::require_finite(L.c, "hierarchy");
    scalar::require_finite(L.a, "hierarchy");
    scalar::require_finite(L.b, "hierarchy");
    out.push_back(std::move(L));
  }
  return out;
}

// Closed-form (a_i, b_i, c_i) in terms of (u, t, q, gamma), general regime.
struct HierarchyCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};
HierarchyCoefficients hierarchy_coefficients_closed(const DerivedParams& dp, int i);

// Coefficients of the first partner h_1 = p2 P^2 + x2 X^2 + constant,
// expressed through k alone.
struct QuadraticHamiltonian {
  double p2 = 0.0;
  double x2 = 0.0;
  double constant = 0.0;
};
QuadraticHamiltonian partner_h1(const DerivedParams& dp);

}  // namespace qosc

#endif  // QOSC_DEFORMATION_HPP
