#include "qosc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "qosc/eigenstates.hpp"
#include "qosc/errors.hpp"
#include "qosc/fock_oracle.hpp"
#include "qosc/qcalc.hpp"
#include "qosc/spectrum.hpp"

namespace qosc {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "unknown";
}

std::vector<std::string> fault_sensitive_checks() {
  return {"ladder_recursion", "oracle_overlap", "gram_identity", "f_recursion",
          "polynomial_routes"};
}

bool VerifyReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

const CheckResult* VerifyReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

CheckResult measured(std::string name, double residual, double tol, std::string note = {}) {
  // NaN compares false and therefore fails
  const auto status = residual <= tol ? CheckStatus::pass : CheckStatus::fail;
  return {std::move(name), status, residual, tol, std::move(note)};
}

CheckResult skipped(std::string name, double tol, std::string note) {
  return {std::move(name), CheckStatus::skipped, 0.0, tol, std::move(note)};
}

// Worst per-entry relative deviation of `a` from `ref`; entries where `ref`
// vanishes are measured against max|ref| instead.
double coeff_rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& ref) {
  const Eigen::Index n = std::max(a.size(), ref.size());
  auto at = [](const Eigen::VectorXd& v, Eigen::Index i) { return i < v.size() ? v(i) : 0.0; };
  const double scale = ref.size() ? ref.cwiseAbs().maxCoeff() : 0.0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = at(ref, i);
    const double d = std::fabs(at(a, i) - r);
    if (d == 0.0) continue;
    const double den = r != 0.0 ? std::fabs(r) : scale;
    worst = std::max(worst, den > 0.0 ? d / den : inf);
  }
  return worst;
}

double rel(double a, double ref) {
  if (a == ref) return 0.0;
  return std::fabs(a - ref) / std::fabs(ref);
}

// Closed-form polynomials and Fock states, with the optional planted fault.
struct States {
  double q;
  bool fault;

  EvenOddPolynomial closed(int n, double t) const {
    EvenOddPolynomial p = polynomial_p(n, q, t, PolynomialRoute::closed);
    if (fault && n == kFaultLevel) p.set_coeff(0, p.coeff(0) + kFaultSize * p.max_abs());
    return p;
  }

  double f(int n, int m, double t) const {
    if (fault && n == kFaultLevel) return closed(n, t).coeff(m);
    return coeff_f_closed(n, m, q, t);
  }

  FockExpansion state(int n, double t, int sigma_max, Phase phase) const {
    FockExpansion e = fock_expansion(q, t, closed(n, t), sigma_max, normalization(n, q, t));
    if (phase == Phase::canonical) align_phase(e.coeffs);
    return e;
  }
};

class Battery {
 public:
  Battery(const DerivedParams& dp, const VerifyConfig& cfg)
      : dp_(dp), cfg_(cfg), states_{dp.q, cfg.inject_fault} {}

  std::vector<CheckResult> run() {
    add("oracle_spectrum", 1e-8, [&] { return oracle_spectrum(); });
    add("ground_state_annihilation", 1e-7, [&] { return annihilation(); });
    add("ladder_recursion", 1e-7, [&] { return ladder(); });
    add("oracle_overlap", 1e-7, [&] { return overlap(); });
    add("gram_identity", 1e-6, [&] { return gram(); });
    add("f_recursion", 1e-10, [&] { return f_recursion(); });
    add("n_recursion", 1e-10, [&] { return n_recursion(); });
    add("polynomial_routes", 1e-9, [&] { return polynomial_routes(); });
    add("ground_state_route", 1e-12, [&] { return ground_state_route(); });
    add("commutator", 1e-10, [&] { return commutator(); });
    add("q_commutator", 1e-14, [&] { return q_commutator(); });
    add("factorization", 1e-10, [&] { return factorization(); });
    add("shape_invariance", 1e-10, [&] { return shape_invariance(); });
    add("exchange_symmetry", 1e-12, [&] { return exchange_symmetry(); });
    add("telescoping", 1e-10, [&] { return telescoping(); });
    add("excitation_consistency", 1e-12, [&] { return excitation_consistency(); });
    add("special_limits", 1e-12, [&] { return special_limits(); });
    add("hermite_limit", 1e-10, [&] { return hermite(); });
    add("appendix_identities", 1e-12, [&] { return appendix(); });
    return std::move(out_);
  }

 private:
  template <typename F>
  void add(const char* name, double tol, F&& check) {
    name_ = name;
    tol_ = tol;
    try {
      out_.push_back(check());
    } catch (const std::exception& e) {
      out_.push_back({name, CheckStatus::fail, inf, tol, e.what()});
    }
  }

  CheckResult result(double residual, std::string note = {}) const {
    return measured(name_, residual, tol_, std::move(note));
  }
  CheckResult skip(std::string note) const { return skipped(name_, tol_, std::move(note)); }

  std::optional<CheckResult> require_fock() const {
    if (dp_.has_fock_representation()) return std::nullopt;
    return skip("no q-boson representation in regime " + std::string(to_string(dp_.regime)));
  }

  double t() const { return dp_.t_value(); }

  // Oracle decomposition, halving dim while [dim]_q overflows.
  const EigenResult& oracle() {
    if (!oracle_) {
      int dim = cfg_.dim;
      while (true) {
        try {
          oracle_ = eig_sym(hamiltonian(dim, dp_));
          oracle_dim_ = dim;
          break;
        } catch (const overflow_error&) {
          if (dim / 2 < 4 * cfg_.n_spectrum) throw;
          dim /= 2;
        }
      }
    }
    return *oracle_;
  }

  CheckResult oracle_spectrum() {
    if (auto s = require_fock()) return *s;
    const EigenResult& r = oracle();
    double worst = 0.0;
    for (int n = 0; n < cfg_.n_spectrum; ++n) worst = std::max(worst, rel(r.values(n), energy(dp_, n)));
    const double scale = r.values.cwiseAbs().maxCoeff();
    return result(worst, "dim " + std::to_string(oracle_dim_) + ", relative residual bound " +
                             fmt("%.3g", r.residual_bound / scale));
  }

  CheckResult annihilation() {
    if (auto s = require_fock()) return *s;
    const FockExpansion psi = states_.state(0, t(), cfg_.sigma_max, Phase::natural);
    // B^- = K (b - t b^+)/sqrt(2)
    const int d = psi.dim() + 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
    for (int m = 0; m < psi.dim(); ++m) {
      const double c = psi.coeffs(m);
      if (c == 0.0) continue;
      if (m >= 1) out(m - 1) += times_sqrt_q_number(c, m, dp_.q);
      out(m + 1) -= t() * times_sqrt_q_number(c, m + 1, dp_.q);
    }
    const double res = dp_.big_k_value() / std::sqrt(2.0) * out.norm() / psi.coeffs.norm();
    return result(res, "sigma_max " + std::to_string(cfg_.sigma_max));
  }

  CheckResult ladder() {
    if (auto s = require_fock()) return *s;
    double worst = 0.0;
    for (int n = 0; n <= 5; ++n) {
      const FockExpansion lower = states_.state(n, t() / dp_.q, cfg_.sigma_max, Phase::natural);
      const FockExpansion upper = states_.state(n + 1, t(), cfg_.sigma_max + 1, Phase::natural);
      worst = std::max(worst, ladder_residual(dp_, lower, upper));
    }
    return result(worst, "n <= 5, sigma_max " + std::to_string(cfg_.sigma_max));
  }

  CheckResult overlap() {
    if (auto s = require_fock()) return *s;
    const EigenResult& r = oracle();
    double worst = 0.0;
    for (int n = 0; n <= cfg_.overlap_levels; ++n) {
      const Eigen::VectorXd c =
          states_.state(n, t(), cfg_.gram_sigma_max, Phase::canonical).dense(oracle_dim_);
      Eigen::VectorXd o = r.vectors.col(n);
      // sign fixed at the first entry above the oracle's noise floor; the
      // lowest Fock coefficient can be far below it when q is large
      const double cutoff = 1e-8 * c.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < c.size(); ++i) {
        if (std::fabs(c(i)) > cutoff) {
          if ((c(i) > 0.0) != (o(i) > 0.0)) o = -o;
          break;
        }
      }
      worst = std::max(worst, std::fabs(1.0 - c.dot(o)));
    }
    return result(worst, "1 - overlap, n <= " + std::to_string(cfg_.overlap_levels));
  }

  CheckResult gram() {
    if (auto s = require_fock()) return *s;
    const int levels = cfg_.overlap_levels + 1;
    Eigen::MatrixXd c(2 * cfg_.gram_sigma_max + 2, levels);
    for (int n = 0; n < levels; ++n)
      c.col(n) = states_.state(n, t(), cfg_.gram_sigma_max, Phase::canonical).coeffs;
    const Eigen::MatrixXd dev = c.transpose() * c - Eigen::MatrixXd::Identity(levels, levels);
    return result(dev.cwiseAbs().maxCoeff(), "sigma_max " + std::to_string(cfg_.gram_sigma_max));
  }

  CheckResult f_recursion() {
    if (auto s = require_fock()) return *s;
    constexpr int n_max = 20;
    const auto rows = coeff_f_recursive(n_max, dp_.q, t());
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      Eigen::VectorXd closed(n + 1);
      for (int m = 0; m <= n; ++m) closed(m) = (m - n) % 2 == 0 ? states_.f(n, m, t()) : 0.0;
      worst = std::max(worst, coeff_rel_diff(rows[n], closed));
    }
    return result(worst, "n <= 20");
  }

  CheckResult n_recursion() {
    if (auto s = require_fock()) return *s;
    double worst = 0.0;
    for (int n = 0; n <= 15; ++n)
      worst = std::max(worst, rel(normalization_recursive(n, dp_.q, t()),
                                  normalization(n, dp_.q, t())));
    return result(worst, "n <= 15");
  }

  CheckResult polynomial_routes() {
    if (auto s = require_fock()) return *s;
    const bool with_jacobi = t() != 0.0 && dp_.q != 1.0;
    double worst = 0.0;
    for (int n = 0; n <= 12; ++n) {
      const Eigen::VectorXd c = states_.closed(n, t()).coefficients();
      const Eigen::VectorXd r =
          polynomial_p(n, dp_.q, t(), PolynomialRoute::recursive).coefficients();
      worst = std::max(worst, coeff_rel_diff(c, r));
      if (with_jacobi) {
        const Eigen::VectorXd j =
            polynomial_p(n, dp_.q, t(), PolynomialRoute::jacobi).coefficients();
        worst = std::max({worst, coeff_rel_diff(c, j), coeff_rel_diff(j, r)});
      }
    }
    return result(worst, with_jacobi ? "closed/recursive/jacobi, n <= 12"
                                     : "closed/recursive, n <= 12 (jacobi route needs t != 0)");
  }

  CheckResult ground_state_route() {
    if (auto s = require_fock()) return *s;
    const int sigma = 40;
    const FockExpansion psi = states_.state(0, t(), sigma, Phase::natural);
    // E_{q^2}(t xi^2/(q+1)) coefficient of xi^{2j}, mapped to Fock state 2j
    const SeriesControl ctl{1e-300, 10000};
    const Eigen::VectorXd e = q_exp_coefficients(t() / (dp_.q + 1.0), dp_.q * dp_.q, ctl);
    const double n0 = normalization(0, dp_.q, t());
    double worst = 0.0;
    for (int j = 0; j <= sigma; ++j) {
      const double ej = j < e.size() ? e(j) : 0.0;
      const double route = n0 * ej * std::exp(0.5 * log_q_factorial(2 * j, dp_.q));
      worst = std::max(worst, std::fabs(route - psi.coeffs(2 * j)));
    }
    return result(worst, "sigma <= 40, absolute");
  }

  // Interior block [0, dim - margin) of a - b, relative to the interior scale of b.
  static double interior_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                  int margin) {
    const double scale = std::max(interior_max_abs(b, margin), 1.0);
    return interior_max_abs(a - b, margin) / scale;
  }

  CheckResult commutator() {
    if (auto s = require_fock()) return *s;
    const int d = cfg_.operator_dim;
    const auto [x, p] = position_momentum(d, dp_.q, *dp_.gamma);
    const Eigen::MatrixXd lhs = x * p - p * x;
    const Eigen::MatrixXd rhs = Eigen::MatrixXd::Identity(d, d) + dp_.params.alpha * x * x -
                                dp_.params.beta * p * p;
    return result(interior_residual(lhs, rhs, 2), "dim " + std::to_string(d) + ", margin 2");
  }

  CheckResult q_commutator() {
    if (auto s = require_fock()) return *s;
    const int d = cfg_.operator_dim;
    const auto [b, bd] = qboson_matrices(d, dp_.q);
    const Eigen::MatrixXd lhs = b * bd - dp_.q * bd * b;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    // rows 0..dim-2 only
    const double scale = (b * bd).topRows(d - 1).cwiseAbs().maxCoeff();
    return result((lhs - id).topRows(d - 1).cwiseAbs().maxCoeff() / scale,
                  "dim " + std::to_string(d) + ", last row excluded");
  }

  CheckResult factorization() {
    if (auto s = require_fock()) return *s;
    const int d = cfg_.operator_dim;
    const auto [bp, bm] = ladder_matrices(d, dp_, 0);
    const Eigen::MatrixXd lhs = bp * bm + dp_.eps0 * Eigen::MatrixXd::Identity(d, d);
    return result(interior_residual(lhs, hamiltonian(d, dp_).dense(), 2),
                  "dim " + std::to_string(d) + ", margin 2");
  }

  CheckResult shape_invariance() {
    if (auto s = require_fock()) return *s;
    const int d = cfg_.operator_dim;
    const auto levels = hierarchy<double>(dp_, cfg_.levels + 1);
    double worst = 0.0;
    for (int i = 0; i < cfg_.levels; ++i) {
      const auto [bp_i, bm_i] = ladder_matrices(d, dp_, i);
      const auto [bp_j, bm_j] = ladder_matrices(d, dp_, i + 1);
      const Eigen::MatrixXd lhs = bm_i * bp_i;
      const Eigen::MatrixXd rhs =
          bp_j * bm_j + levels[i + 1].eps * Eigen::MatrixXd::Identity(d, d);
      worst = std::max(worst, interior_residual(lhs, rhs, 2));
    }
    return result(worst, "levels 0.." + std::to_string(cfg_.levels - 1) + ", dim " +
                             std::to_string(d));
  }

  CheckResult exchange_symmetry() {
    const DerivedParams swapped = derive({dp_.params.beta, dp_.params.alpha});
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n) worst = std::max(worst, rel(energy(swapped, n), energy(dp_, n)));
    return result(worst, "n <= 10");
  }

  CheckResult telescoping() {
    const auto levels = hierarchy<double>(dp_, 11);
    double sum = 0.0;
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n) {
      sum += levels[n].eps;
      worst = std::max(worst, rel(sum, energy(dp_, n)));
    }
    return result(worst, "n <= 10");
  }

  CheckResult excitation_consistency() {
    const double e0 = energy(dp_, 0);
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n) {
      const double e = energy(dp_, n);
      worst = std::max(worst, std::fabs(excitation_energy(dp_, n) - (e - e0)) / e);
    }
    return result(worst, "n <= 10, relative to e_n");
  }

  CheckResult special_limits() {
    if (dp_.regime == Regime::equal) {
      double worst = 0.0;
      for (int n = 0; n <= 10; ++n)
        worst = std::max(worst, rel(energy_general(dp_, n), energy_equal(dp_.q, n)));
      return result(worst, "alpha = beta closed spectrum, n <= 10");
    }
    if (dp_.regime == Regime::undeformed) {
      double worst = 0.0;
      for (int n = 0; n <= 20; ++n) worst = std::max(worst, std::fabs(energy(dp_, n) - (n + 0.5)));
      return result(worst, "e_n = n + 1/2, n <= 20");
    }
    return skip("no special closed form in regime " + std::string(to_string(dp_.regime)));
  }

  CheckResult hermite() {
    double worst = 0.0;
    for (double tt : {0.3, 0.6, 0.9}) {
      for (int n = 0; n <= 8; ++n) {
        const HermitePair h = hermite_limit(n, tt);
        worst = std::max(worst, coeff_rel_diff(h.recursion.coefficients(), h.hermite.coefficients()));
      }
    }
    return result(worst, "q = 1, t in {0.3, 0.6, 0.9}, n <= 8");
  }

  CheckResult appendix() {
    std::mt19937_64 rng(cfg_.seed);
    std::uniform_real_distribution<double> qd(1.01, 3.0), ad(-2.0, 2.0), neg(-2.0, -0.1),
        cd(-1.0, 1.0);
    std::uniform_int_distribution<int> nd(0, 12);
    double worst = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
      const double q = qd(rng);
      const int n = nd(rng);
      const int k = nd(rng);
      const double a = ad(rng);
      // (a; q)_{n+k} = (a; q)_n (a q^n; q)_k
      worst = std::max(worst, rel(q_pochhammer(a, q, n) * q_pochhammer(a * std::pow(q, n), q, k),
                                  q_pochhammer(a, q, n + k)));
      // (q^{1-n}/b; q)_n = (b; q)_n (-1/b)^n q^{-n(n-1)/2}
      const double b = neg(rng);
      worst = std::max(worst, rel(q_pochhammer(std::pow(q, 1 - n) / b, q, n),
                                  q_pochhammer(b, q, n) * std::pow(-1.0 / b, n) *
                                      std::pow(q, -0.5 * n * (n - 1))));
      // [m]_q + q^m [n-m+1]_q = [n+1]_q
      for (int m = 0; m <= n; ++m)
        worst = std::max(worst, rel(q_number(m, q) + std::pow(q, m) * q_number(n - m + 1, q),
                                    q_number(n + 1, q)));
      // D_q (f g) = f(q xi) D_q g + g D_q f
      Eigen::VectorXd f(nd(rng) + 1), g(nd(rng) + 1);
      for (auto& c : f) c = cd(rng);
      for (auto& c : g) c = cd(rng);
      const Eigen::VectorXd lhs = q_derivative(poly_mul(f, g), q);
      const Eigen::VectorXd rhs =
          poly_add(poly_mul(dilate(f, q), q_derivative(g, q)), poly_mul(g, q_derivative(f, q)));
      if (lhs.size() > 0) {
        worst = std::max(worst, (lhs - rhs.head(lhs.size())).cwiseAbs().maxCoeff() /
                                    std::max(1.0, lhs.cwiseAbs().maxCoeff()));
      }
      // D_q E_q(a xi) = a E_q(a xi), term by term up to the truncation
      const Eigen::VectorXd e = q_exp_coefficients(a, q);
      const Eigen::VectorXd de = q_derivative(e, q);
      for (Eigen::Index j = 0; j < de.size(); ++j)
        worst = std::max(worst, std::fabs(de(j) - a * e(j)));
    }
    return result(worst, "40 random draws");
  }

  const DerivedParams& dp_;
  const VerifyConfig& cfg_;
  States states_;
  std::vector<CheckResult> out_;
  const char* name_ = "";
  double tol_ = 0.0;
  std::optional<EigenResult> oracle_;
  int oracle_dim_ = 0;
};

}  // namespace

VerifyReport verify(const DerivedParams& dp, const VerifyConfig& cfg) {
  if (cfg.dim < 4 || cfg.operator_dim < 4)
    throw domain_error("verify: dim and operator dim must be >= 4");
  if (cfg.sigma_max < 1 || cfg.gram_sigma_max < 1)
    throw domain_error("verify: sigma_max must be >= 1");
  if (cfg.levels < 1) throw domain_error("verify: levels must be >= 1");
  if (cfg.n_spectrum < 1 || cfg.n_spectrum > cfg.dim)
    throw domain_error("verify: n_spectrum must lie in [1, dim]");
  if (cfg.overlap_levels < 0) throw domain_error("verify: overlap_levels must be >= 0");
  VerifyReport report;
  report.dp = dp;
  report.config = cfg;
  report.checks = Battery(dp, cfg).run();
  return report;
}

}  // namespace qosc
