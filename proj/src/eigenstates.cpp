#include "qosc/eigenstates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qosc/log_real.hpp"
#include "qosc/spectrum.hpp"

namespace qosc {

EvenOddPolynomial::EvenOddPolynomial(int degree) : degree_(degree) {
  if (degree < 0) throw domain_error("EvenOddPolynomial: degree must be >= 0");
  coeffs_ = Eigen::VectorXd::Zero(degree + 1);
}

EvenOddPolynomial EvenOddPolynomial::from_coefficients(int degree, const Eigen::VectorXd& coeffs) {
  EvenOddPolynomial p(degree);
  if (coeffs.size() > degree + 1)
    throw domain_error("EvenOddPolynomial: more coefficients than degree + 1");
  for (Eigen::Index m = 0; m < coeffs.size(); ++m) {
    if ((degree - m) % 2 != 0) {
      if (coeffs(m) != 0.0)
        throw domain_error("EvenOddPolynomial: nonzero coefficient of wrong parity at xi^" +
                           std::to_string(m));
      continue;
    }
    p.coeffs_(m) = coeffs(m);
  }
  return p;
}

void EvenOddPolynomial::set_coeff(int m, double value) {
  if (m < 0 || m > degree_) throw domain_error("EvenOddPolynomial: exponent out of range");
  if ((degree_ - m) % 2 != 0) throw domain_error("EvenOddPolynomial: exponent of wrong parity");
  coeffs_(m) = value;
}

// ---------------------------------------------------------------------------

double coeff_f_closed(int n, int m, double q, double t) {
  if (m == -1) return 0.0;
  if (n < 0 || m < 0 || m > n) throw domain_error("coeff_f_closed: need 0 <= m <= n");
  if ((n - m) % 2 != 0) throw domain_error("coeff_f_closed: m must have the parity of n");
  const int half_gap = (n - m) / 2;
  const int shift = (n + m - 2) / 2;
  const LogReal ratio = q_factorial<LogReal>(n, q) /
                        (q_factorial<LogReal>(m, q) * q_double_factorial<LogReal>(n - m, q));
  const LogReal power = pow(LogReal(-t / std::pow(q, shift)), half_gap);
  const LogReal poch = q_pochhammer<LogReal>(t * t / std::pow(q, 2 * n - 1), q * q, (n + m) / 2);
  const LogReal f = ratio * power * poch;
  if (!f.fits_double()) throw overflow_error("coeff_f_closed: coefficient overflows double");
  return f.value();
}

std::vector<Eigen::VectorXd> coeff_f_recursive(int n_max, double q, double t) {
  if (n_max < 0) throw domain_error("coeff_f_recursive: n_max must be >= 0");
  // rows[j][n] holds f_{n,.}(q, t/q^j); row n at shift j consumes row n-1 at
  // shift j+1, so the triangle n + j <= n_max is exactly what is needed.
  std::vector<std::vector<Eigen::VectorXd>> rows(static_cast<std::size_t>(n_max) + 1);
  for (int j = n_max; j >= 0; --j) {
    const double tau = t / std::pow(q, j);
    auto& level = rows[static_cast<std::size_t>(j)];
    level.reserve(static_cast<std::size_t>(n_max - j) + 1);
    level.push_back(Eigen::VectorXd::Ones(1));
    for (int n = 1; n <= n_max - j; ++n) {
      const Eigen::VectorXd& prev = rows[static_cast<std::size_t>(j) + 1][static_cast<std::size_t>(n) - 1];
      const int np = n - 1;
      auto f_prev = [&](int m) { return (m < 0 || m > np) ? 0.0 : prev(m); };
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n + 1);
      for (int m = n; m >= 0; m -= 2) {
        row(m) = (1.0 - tau * tau / std::pow(q, np - m + 2)) * f_prev(m - 1) -
                 tau * q_number(m + 1, q) * f_prev(m + 1);
      }
      level.push_back(std::move(row));
    }
  }
  return std::move(rows[0]);
}

namespace {

void require_t(double t, const char* what) {
  if (!(std::fabs(t) < 1.0)) throw domain_error(std::string(what) + ": requires |t| < 1");
}

}  // namespace

double normalization(int n, double q, double t, const SeriesControl& ctl) {
  if (n < 0) throw domain_error("normalization: n must be >= 0");
  require_t(t, "normalization");
  const LogReal fact = q_factorial<LogReal>(n, q);
  const LogReal poch = q_pochhammer<LogReal>(t * t * std::pow(q, 1 - 2 * n), q, n);
  const double series = one_phi_zero_power(0.5, q * q, t * t / std::pow(q, 2 * n), ctl);
  const LogReal inv_sq = fact * poch * LogReal(series);
  if (inv_sq.sign() <= 0) throw consistency_error("normalization: non-positive norm");
  return std::exp(-0.5 * inv_sq.log_abs());
}

double normalization_recursive(int n, double q, double t, const SeriesControl& ctl) {
  if (n < 0) throw domain_error("normalization_recursive: n must be >= 0");
  require_t(t, "normalization_recursive");
  // N_n(t) = prod_{j=1..n} {[j]_q (1 - tau_j^2/q^j)}^{-1/2} * N_0(t/q^n),
  // where level j is entered with tau_j = t/q^{n-j}.
  double log_n = -0.5 * std::log(one_phi_zero_power(0.5, q * q, t * t / std::pow(q, 2 * n), ctl));
  for (int j = 1; j <= n; ++j) {
    const double tau = t / std::pow(q, n - j);
    log_n -= 0.5 * std::log(q_number(j, q) * (1.0 - tau * tau / std::pow(q, j)));
  }
  return std::exp(log_n);
}

// ---------------------------------------------------------------------------

namespace {

EvenOddPolynomial polynomial_closed(int n, double q, double t) {
  EvenOddPolynomial p(n);
  for (int m = n; m >= 0; m -= 2) p.set_coeff(m, coeff_f_closed(n, m, q, t));
  return p;
}

EvenOddPolynomial polynomial_recursive(int n, double q, double t) {
  // Build P_0(t/q^n), P_1(t/q^{n-1}), ..., P_n(t).
  Eigen::VectorXd c = Eigen::VectorXd::Ones(1);
  for (int j = 0; j < n; ++j) {
    const double tau = t / std::pow(q, n - j - 1);  // argument of P_{j+1}
    const Eigen::VectorXd shifted_term =
        (tau * tau / std::pow(q, j + 1)) * multiply_by_xi(dilate(c, q));
    Eigen::VectorXd next = poly_add(multiply_by_xi(c), -shifted_term);
    next = poly_add(next, -tau * q_derivative(c, q));
    c = std::move(next);
  }
  // Exponents of the wrong parity come out as exact zeros.
  return EvenOddPolynomial::from_coefficients(n, c);
}

EvenOddPolynomial polynomial_jacobi(int n, double q, double t) {
  if (t == 0.0) throw route_error("jacobi", "argument -q^k (q-1) xi^2 / t is singular at t = 0");
  if (q == 1.0) throw route_error("jacobi", "prefactor t/(q-1) is singular at q = 1");
  const int nu = n / 2;
  const double q2 = q * q;
  double prefactor = 0.0;
  double scale = 0.0;  // x = scale * xi^2
  Eigen::VectorXd jac;
  try {
    if (n % 2 == 0) {
      prefactor = q_pochhammer(q, q2, nu) * q_pochhammer(t * t / std::pow(q, 4 * nu - 1), q2, nu) *
                  std::pow(t / (std::pow(q, nu - 1) * (q - 1.0)), nu);
      scale = -std::pow(q, 2 * nu - 2) * (q - 1.0) / t;
      jac = little_q_jacobi_coefficients(nu, 1.0 / q, t * t / std::pow(q, 4 * nu), q2);
    } else {
      prefactor = q_pochhammer(q * q2, q2, nu) *
                  q_pochhammer(t * t / std::pow(q, 4 * nu + 1), q2, nu + 1) *
                  std::pow(t / (std::pow(q, nu) * (q - 1.0)), nu);
      scale = -std::pow(q, 2 * nu - 1) * (q - 1.0) / t;
      jac = little_q_jacobi_coefficients(nu, q, t * t / std::pow(q, 4 * nu + 2), q2);
    }
  } catch (const domain_error& e) {
    throw route_error("jacobi", e.what());
  }
  EvenOddPolynomial p(n);
  double power = 1.0;
  for (int k = 0; k <= nu; ++k) {
    p.set_coeff(2 * k + n % 2, prefactor * jac(k) * power);
    power *= scale;
  }
  for (int m = n % 2; m <= n; m += 2)
    if (!std::isfinite(p.coeff(m))) throw route_error("jacobi", "non-finite coefficient");
  return p;
}

}  // namespace

EvenOddPolynomial polynomial_p(int n, double q, double t, PolynomialRoute route) {
  if (n < 0) throw domain_error("polynomial_p: n must be >= 0");
  switch (route) {
    case PolynomialRoute::closed: return polynomial_closed(n, q, t);
    case PolynomialRoute::recursive: return polynomial_recursive(n, q, t);
    case PolynomialRoute::jacobi: return polynomial_jacobi(n, q, t);
  }
  throw domain_error("polynomial_p: unknown route");
}

// ---------------------------------------------------------------------------

Eigen::VectorXd FockExpansion::dense(int d) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  const int m = std::min(d, dim());
  out.head(m) = coeffs.head(m);
  return out;
}

FockExpansion fock_expansion(double q, double t, const EvenOddPolynomial& p, int sigma_max,
                             double normalization_factor) {
  if (sigma_max < 0) throw domain_error("fock_expansion: sigma_max must be >= 0");
  const int n = p.degree();
  const int par = n % 2;
  const int dim = 2 * sigma_max + 2;

  // log [j]_q! and log [j]_q!! for j < dim
  std::vector<double> log_fact(static_cast<std::size_t>(dim), 0.0);
  std::vector<double> log_dfact(static_cast<std::size_t>(dim), 0.0);
  for (int j = 1; j < dim; ++j) {
    const double lj = q_number<LogReal>(j, q).log_abs();
    log_fact[j] = log_fact[j - 1] + lj;
    log_dfact[j] = (j >= 2 ? log_dfact[j - 2] : 0.0) + lj;
  }

  // E_{q^2}(tau xi^2/(q+1)) = sum_j tau^j xi^{2j} / [2j]_q!!, tau = t/q^n
  const double tau = t / std::pow(q, n);
  const double log_tau = tau == 0.0 ? 0.0 : std::log(std::fabs(tau));
  const int tau_sign = tau < 0 ? -1 : 1;
  const int mu_max = (n - par) / 2;

  FockExpansion out;
  out.n = n;
  out.parity = p.parity();
  out.sigma_max = sigma_max;
  out.coeffs = Eigen::VectorXd::Zero(dim);
  for (int sigma = 0; sigma <= sigma_max; ++sigma) {
    const int idx = 2 * sigma + par;
    LogReal acc;
    for (int mu = 0; mu <= std::min(sigma, mu_max); ++mu) {
      const double f = p.coeff(2 * mu + par);
      if (f == 0.0) continue;
      const int k = sigma - mu;
      if (tau == 0.0 && k > 0) continue;
      const int sign = (k % 2 == 1) ? tau_sign : 1;
      const double log_mag = 0.5 * log_fact[idx] - log_dfact[2 * k] + k * log_tau;
      acc += LogReal(f) * LogReal::from_log(log_mag, sign);
    }
    out.coeffs(idx) = normalization_factor * acc.value();
  }
  out.norm_squared = out.coeffs.squaredNorm();

  // Geometric continuation of the last two same-parity coefficients.
  const double last = std::fabs(out.coeffs(2 * sigma_max + par));
  if (last == 0.0) {
    out.tail_bound = 0.0;
  } else if (sigma_max == 0) {
    out.tail_bound = std::numeric_limits<double>::infinity();
  } else {
    const double prev = std::fabs(out.coeffs(2 * sigma_max - 2 + par));
    const double rho = prev == 0.0 ? std::numeric_limits<double>::infinity() : last / prev;
    out.tail_bound = rho < 1.0 ? last * last * rho * rho / (1.0 - rho * rho)
                               : std::numeric_limits<double>::infinity();
  }
  return out;
}

void align_phase(Eigen::VectorXd& v, double threshold) {
  const double cutoff = threshold * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::fabs(v(i)) > cutoff) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

int adaptive_sigma_max(double q, double t, int n) {
  const EvenOddPolynomial p = polynomial_p(n, q, t, PolynomialRoute::closed);
  const int par = n % 2;
  int sigma = 16;
  while (true) {
    if (sigma < n / 2 + 1) sigma *= 2;
    const FockExpansion e = fock_expansion(q, t, p, sigma, 1.0);
    const double peak = e.coeffs.cwiseAbs().maxCoeff();
    if (std::fabs(e.coeffs(2 * sigma + par)) < 1e-14 * peak || sigma >= 512) return sigma;
    sigma = std::min(2 * sigma, 512);
  }
}

FockExpansion eigenstate_fock(double q, double t, int n, int sigma_max, Phase phase,
                              double tail_tol) {
  if (n < 0) throw domain_error("eigenstate_fock: n must be >= 0");
  require_t(t, "eigenstate_fock");
  if (!(q >= 1.0)) throw domain_error("eigenstate_fock: requires q >= 1");
  if (sigma_max <= 0) sigma_max = adaptive_sigma_max(q, t, n);
  const EvenOddPolynomial p = polynomial_p(n, q, t, PolynomialRoute::closed);
  FockExpansion e = fock_expansion(q, t, p, sigma_max, normalization(n, q, t));
  if (e.tail_bound > tail_tol)
    throw convergence_error("eigenstate_fock: truncation at sigma_max = " +
                            std::to_string(sigma_max) + " leaves tail " +
                            std::to_string(e.tail_bound) + " > " + std::to_string(tail_tol));
  if (phase == Phase::canonical) align_phase(e.coeffs);
  return e;
}

namespace {

void require_fock(const DerivedParams& dp, const char* what) {
  if (!dp.has_fock_representation())
    throw domain_error(std::string(what) + ": no q-boson representation in regime " +
                       std::string(to_string(dp.regime)));
}

}  // namespace

FockExpansion eigenstate_fock(const DerivedParams& dp, int n, int sigma_max, Phase phase,
                              double tail_tol) {
  require_fock(dp, "eigenstate_fock");
  return eigenstate_fock(dp.q, dp.t_value(), n, sigma_max, phase, tail_tol);
}

FockExpansion ground_state_fock(const DerivedParams& dp, int sigma_max, double tail_tol) {
  return eigenstate_fock(dp, 0, sigma_max, Phase::canonical, tail_tol);
}

double ladder_check(const DerivedParams& dp, int n, int sigma_max) {
  require_fock(dp, "ladder_check");
  if (n < 0) throw domain_error("ladder_check: n must be >= 0");
  if (sigma_max < 1) throw domain_error("ladder_check: sigma_max must be >= 1");
  const double q = dp.q;
  const double t = dp.t_value();
  constexpr double no_tail_limit = std::numeric_limits<double>::infinity();

  const FockExpansion lower = eigenstate_fock(q, t / q, n, sigma_max, Phase::natural, no_tail_limit);
  const FockExpansion upper =
      eigenstate_fock(q, t, n + 1, sigma_max + 1, Phase::natural, no_tail_limit);
  return ladder_residual(dp, lower, upper);
}

double ladder_residual(const DerivedParams& dp, const FockExpansion& lower,
                       const FockExpansion& upper) {
  require_fock(dp, "ladder_residual");
  if (upper.n != lower.n + 1) throw domain_error("ladder_residual: upper must be level n + 1");
  const double q = dp.q;
  const double t = dp.t_value();
  // B^+ = K (b^+ - t b)/sqrt(2) with b^+|m> = sqrt([m+1])|m+1>, b|m> = sqrt([m])|m-1>
  const int d = std::max(upper.dim(), lower.dim() + 1);
  Eigen::VectorXd raised = Eigen::VectorXd::Zero(d);
  for (int m = 0; m < lower.dim(); ++m) {
    const double c = lower.coeffs(m);
    if (c == 0.0) continue;
    raised(m + 1) += times_sqrt_q_number(c, m + 1, q);
    if (m >= 1) raised(m - 1) -= t * times_sqrt_q_number(c, m, q);
  }
  const double k_factor = dp.big_k_value() / std::sqrt(2.0);
  raised *= k_factor / std::sqrt(excitation_energy(dp, upper.n));
  return (upper.dense(d) - raised).norm();
}

// ---------------------------------------------------------------------------

Eigen::VectorXd hermite_coefficients(int n) {
  if (n < 0) throw domain_error("hermite_coefficients: n must be >= 0");
  Eigen::VectorXd h = Eigen::VectorXd::Ones(1);
  for (int j = 0; j < n; ++j) {
    // H_{j+1} = 2x H_j - H_j'
    Eigen::VectorXd next = 2.0 * multiply_by_xi(h);
    next = poly_add(next, -q_derivative(h, 1.0));
    h = std::move(next);
  }
  return h;
}

HermitePair hermite_limit(int n, double t) {
  if (!(t > 0.0 && t < 1.0)) throw domain_error("hermite_limit: requires 0 < t < 1");
  const double a = std::sqrt((1.0 - t * t) / (2.0 * t));
  const double c = std::sqrt(0.5 * t * (1.0 - t * t));
  const Eigen::VectorXd h = hermite_coefficients(n);
  EvenOddPolynomial scaled(n);
  const double cn = std::pow(c, n);
  for (int m = n; m >= 0; m -= 2) scaled.set_coeff(m, cn * std::pow(a, m) * h(m));
  return {polynomial_p(n, 1.0, t, PolynomialRoute::recursive), scaled};
}

}  // namespace qosc
