#include "qosc/deformation.hpp"

#include <cmath>
#include <string>

#include "qosc/qcalc.hpp"

namespace qosc {

void DeformationParams::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw domain_error("deformation parameters must be finite");
  if (alpha < 0.0 || beta < 0.0) throw domain_error("deformation parameters must be >= 0");
  if (!(alpha * beta < 1.0)) throw domain_error("deformation parameters require alpha*beta < 1");
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::general: return "general";
    case Regime::alpha_zero: return "alpha_zero";
    case Regime::beta_zero: return "beta_zero";
    case Regime::equal: return "equal";
    case Regime::undeformed: return "undeformed";
  }
  return "unknown";
}

namespace {

double require(const std::optional<double>& x, const char* name, Regime r) {
  if (!x)
    throw domain_error(std::string(name) + " is undefined in regime " + std::string(to_string(r)));
  return *x;
}

}  // namespace

double DerivedParams::gamma_value() const { return require(gamma, "gamma", regime); }
double DerivedParams::u_value() const { return require(u, "u", regime); }
double DerivedParams::v_value() const { return require(v, "v", regime); }
double DerivedParams::t_value() const { return require(t, "t", regime); }
double DerivedParams::big_k_value() const { return require(big_k, "K", regime); }

DerivedParams derive(const DeformationParams& params) {
  params.validate();
  DerivedParams dp;
  dp.params = params;
  const bool alpha_zero = params.alpha < kZeroParameter;
  const bool beta_zero = params.beta < kZeroParameter;
  if (alpha_zero) dp.params.alpha = 0.0;
  if (beta_zero) dp.params.beta = 0.0;
  const double alpha = dp.params.alpha;
  const double beta = dp.params.beta;

  const double half_diff = 0.5 * (beta - alpha);
  // positive root of k^2 - (beta - alpha) k - 1 = 0, without cancellation
  const double root = std::sqrt(1.0 + half_diff * half_diff);
  dp.k = half_diff >= 0.0 ? half_diff + root : 1.0 / (root - half_diff);
  // 1 - alpha k = k (k - beta) = k (1 - alpha beta) / (root + (alpha + beta)/2),
  // so s^2 never sees the cancellation in 1 - alpha k
  dp.s = std::sqrt((root + 0.5 * (alpha + beta)) / (dp.k * (1.0 - alpha * beta)));
  dp.g = dp.s * dp.k;

  if (alpha_zero && beta_zero) {
    dp.regime = Regime::undeformed;
    dp.gamma = 1.0;
  } else if (alpha_zero || beta_zero) {
    dp.regime = alpha_zero ? Regime::alpha_zero : Regime::beta_zero;
  } else if (std::fabs(alpha - beta) <= 1e-15 * std::max(alpha, beta)) {
    dp.regime = Regime::equal;
    dp.k = 1.0;
    dp.g = dp.s = 1.0 / std::sqrt(1.0 - alpha);
    dp.gamma = 1.0;
  } else {
    dp.regime = Regime::general;
    dp.gamma = std::sqrt(beta / alpha);
  }

  const double r = std::sqrt(alpha * beta);
  dp.q = (1.0 + r) / (1.0 - r);
  dp.log_q = 2.0 * std::atanh(r);
  dp.eps0 = 0.5 * dp.g * dp.s;

  if (dp.gamma) {
    const double gamma = *dp.gamma;
    dp.u = dp.g + gamma * dp.s;
    dp.v = dp.regime == Regime::general ? dp.g - gamma * dp.s : 0.0;
    dp.t = dp.regime == Regime::general ? (dp.k - gamma) / (dp.k + gamma) : 0.0;
    dp.d = *dp.u * *dp.v;
    dp.big_k = *dp.u * std::sqrt((dp.q + 1.0) / (4.0 * gamma));
  }
  return dp;
}

HierarchyCoefficients hierarchy_coefficients_closed(const DerivedParams& dp, int i) {
  if (i < 0) throw domain_error("hierarchy_coefficients_closed: i must be >= 0");
  const double u = dp.u_value();
  const double gamma = dp.gamma_value();
  const double t = dp.t_value();
  const double q = dp.q;
  const double qi = std::pow(q, i);
  const double q_im1 = std::pow(q, i - 1);
  HierarchyCoefficients h;
  h.a = u * u / (2.0 * (q + 1.0)) * (qi + t) * (1.0 + t / q_im1);
  h.b = u * u / (2.0 * gamma * gamma * (q + 1.0)) * (qi - t) * (1.0 - t / q_im1);
  // c_i = sum_{j<i} g_j s_j = u^2/(4 gamma) (1 - t^2/q^{i-1}) [i]_q
  h.c = u * u / (4.0 * gamma) * (1.0 - t * t / q_im1) * q_number(i, q);
  return h;
}

QuadraticHamiltonian partner_h1(const DerivedParams& dp) {
  const double alpha = dp.params.alpha;
  const double beta = dp.params.beta;
  const double k = dp.k;
  const double denom = 1.0 - alpha * k;
  return {0.5 * (1.0 + (2.0 * beta - alpha) * k) / denom, 0.5 * (1.0 + alpha * k) / denom,
          k / denom};
}

}  // namespace qosc
