#ifndef QOSC_EIGENSTATES_HPP
#define QOSC_EIGENSTATES_HPP

// Eigenvectors in the q-Bargmann picture: psi_n = N_n P_n(xi) E_{q^2}(t xi^2/((q+1) q^n)),
// with P_n a parity-definite polynomial, and their expansions over the
// q-boson Fock states |m>_q = xi^m / sqrt([m]_q!).

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "qosc/deformation.hpp"
#include "qosc/qcalc.hpp"

namespace qosc {

enum class Parity { even, odd };

inline Parity parity_of(int n) { return (n % 2 == 0) ? Parity::even : Parity::odd; }

// Polynomial in xi whose exponents all share the parity of its degree.
class EvenOddPolynomial {
 public:
  explicit EvenOddPolynomial(int degree = 0);

  // Throws domain_error if an exponent of the wrong parity carries a nonzero
  // coefficient or `coeffs` is longer than degree + 1.
  static EvenOddPolynomial from_coefficients(int degree, const Eigen::VectorXd& coeffs);

  int degree() const { return degree_; }
  Parity parity() const { return parity_of(degree_); }

  double coeff(int m) const {
    return (m < 0 || m > degree_) ? 0.0 : coeffs_(m);
  }
  void set_coeff(int m, double value);

  // Dense coefficient vector of length degree + 1.
  const Eigen::VectorXd& coefficients() const { return coeffs_; }

  double operator()(double xi) const { return poly_eval(coeffs_, xi); }

  // Largest coefficient magnitude.
  double max_abs() const { return coeffs_.cwiseAbs().maxCoeff(); }

 private:
  int degree_;
  Eigen::VectorXd coeffs_;
};

// f_{n,m}(q, t), the coefficient of xi^m in P_n, from the product formula.
// m = -1 gives 0 (the [-1]_q! -> infinity convention).
double coeff_f_closed(int n, int m, double q, double t);

// Rows f_{n,.}(q, t), n = 0..n_max, each built from the row below it taken at
// t/q. Row n has n + 1 entries (zeros at the wrong parity).
std::vector<Eigen::VectorXd> coeff_f_recursive(int n_max, double q, double t);

// N_n(q, t) = {[n]_q! (q^{1-2n} t^2; q)_n 1phi0(q; -; q^2, q^{-2n} t^2)}^{-1/2}.
double normalization(int n, double q, double t, const SeriesControl& ctl = {});

// N_n through N_{n+1}(q, t) = {[n+1]_q (1 - t^2/q^{n+1})}^{-1/2} N_n(q, t/q).
double normalization_recursive(int n, double q, double t, const SeriesControl& ctl = {});

enum class PolynomialRoute { closed, recursive, jacobi };

// P_n(q, t; xi) by one of three independent constructions:
//  closed    - product formula for f_{n,m};
//  recursive - P_{n+1}(t) = xi P_n(t/q) - xi t^2/q^{n+1} P_n(t/q; q xi) - t D_q P_n(t/q);
//  jacobi    - little q-Jacobi representation (needs t != 0 and q != 1).
// Failures specific to a route throw route_error.
EvenOddPolynomial polynomial_p(int n, double q, double t, PolynomialRoute route);

enum class Phase {
  natural,    // signs as produced by the formulas
  canonical,  // lowest-index nonzero Fock coefficient made positive
};

struct FockExpansion {
  int n = 0;
  Parity parity = Parity::even;
  int sigma_max = 0;
  // Indexed by Fock state, 0..2*sigma_max+1; only indices of the
  // eigenstate's parity are nonzero.
  Eigen::VectorXd coeffs;
  double tail_bound = 0.0;    // estimated squared norm beyond the truncation
  double norm_squared = 0.0;  // sum |c|^2 with the closed-form N_n applied

  int dim() const { return static_cast<int>(coeffs.size()); }
  // Zero-padded or truncated copy of length `d`.
  Eigen::VectorXd dense(int d) const;
};

// Fock coefficients of N * p(xi) E_{q^2}(t xi^2/((q+1) q^{deg p})), sigma <= sigma_max.
FockExpansion fock_expansion(double q, double t, const EvenOddPolynomial& p, int sigma_max,
                             double normalization_factor);

inline constexpr double kDefaultTailTol = 1e-10;

// sigma_max <= 0 selects the truncation adaptively: double from 16 until the
// last coefficient is below 1e-14 of the largest, capped at 512.
FockExpansion eigenstate_fock(double q, double t, int n, int sigma_max,
                              Phase phase = Phase::canonical, double tail_tol = kDefaultTailTol);
FockExpansion eigenstate_fock(const DerivedParams& dp, int n, int sigma_max,
                              Phase phase = Phase::canonical, double tail_tol = kDefaultTailTol);
FockExpansion ground_state_fock(const DerivedParams& dp, int sigma_max,
                                double tail_tol = kDefaultTailTol);

int adaptive_sigma_max(double q, double t, int n);

// Sign flip so that the lowest-index coefficient above `threshold` * max|v| is positive.
void align_phase(Eigen::VectorXd& v, double threshold = 0.0);

// || psi_{n+1}(q,t) - [e_{n+1} - e_0]^{-1/2} B^+(q,t) psi_n(q, t/q) || in the
// truncated Fock space, B^+ = K (b^+ - t b)/sqrt(2).
double ladder_check(const DerivedParams& dp, int n, int sigma_max);

// The same residual for caller-supplied states: `lower` built at t/q, `upper`
// at t, both in natural phase.
double ladder_residual(const DerivedParams& dp, const FockExpansion& lower,
                       const FockExpansion& upper);

// q = 1 limit: Q_n from the polynomial recursion and c(t)^n H_n(a(t) xi) from
// the classical Hermite recurrence, a = sqrt((1-t^2)/(2t)), c = sqrt(t(1-t^2)/2).
struct HermitePair {
  EvenOddPolynomial recursion;
  EvenOddPolynomial hermite;
};
HermitePair hermite_limit(int n, double t);

// Coefficients of the physicists' Hermite polynomial H_n.
Eigen::VectorXd hermite_coefficients(int n);

}  // namespace qosc

#endif  // QOSC_EIGENSTATES_HPP
