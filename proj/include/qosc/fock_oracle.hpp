#ifndef QOSC_FOCK_ORACLE_HPP
#define QOSC_FOCK_ORACLE_HPP

// Truncated q-boson Fock space: ladder operators, X and P, the oscillator
// Hamiltonian as a banded symmetric matrix, and a cyclic Jacobi eigensolver
// used to cross-check the closed forms.

#include <Eigen/Dense>
#include <utility>

#include "qosc/deformation.hpp"

namespace qosc {

// Dense symmetric storage with a declared bandwidth.
class BandedSymMatrix {
 public:
  BandedSymMatrix(int dim, int bandwidth);

  int dim() const { return static_cast<int>(m_.rows()); }
  int bandwidth() const { return bandwidth_; }

  double operator()(int i, int j) const { return m_(i, j); }
  // Writes (i, j) and (j, i). Throws domain_error outside the band.
  void set(int i, int j, double value);

  const Eigen::MatrixXd& dense() const { return m_; }

 private:
  Eigen::MatrixXd m_;
  int bandwidth_;
};

struct EigenResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns, same order as values
  double residual_bound = 0.0;  // max_j ||A v_j - lambda_j v_j||
  int sweeps = 0;
};

inline constexpr int kDefaultDimCap = 2048;

// (b, b_dag) with b_dag(n+1, n) = sqrt([n+1]_q).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> qboson_matrices(int dim, double q);

// (X, P_tilde) with X = sqrt(gamma (q+1)) (b_dag + b)/2 and
// P = i P_tilde, P_tilde = sqrt((q+1)/gamma) (b_dag - b)/2.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> position_momentum(int dim, double q, double gamma);

// h = (P^2 + X^2)/2 restricted to the first `dim` q-boson states:
//   h(n,n)   = (q+1)(gamma + 1/gamma)([n]_q + [n+1]_q)/8
//   h(n+2,n) = (q+1)(gamma - 1/gamma) sqrt([n+1]_q [n+2]_q)/8
BandedSymMatrix hamiltonian(int dim, const DerivedParams& dp);

// (B_plus, B_minus) of hierarchy level `level`: K_i (b_dag - t_i b)/sqrt(2)
// and its transpose, K_i = q^{i/2} K, t_i = q^{-i} t.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> ladder_matrices(int dim, const DerivedParams& dp,
                                                            int level);

// Full eigendecomposition by cyclic Jacobi rotations in fixed row order.
// A pair (p, r) is rotated while |a_pr| > eps sqrt(|a_pp a_rr|), which keeps
// small eigenvalues of strongly graded positive definite matrices accurate
// to relative precision.
EigenResult eig_sym(const Eigen::MatrixXd& a, int max_sweeps = 60);
EigenResult eig_sym(const BandedSymMatrix& m, int max_sweeps = 60);

struct ConvergedEigen {
  EigenResult result;
  int dim = 0;
};

// Diagonalize the truncated Hamiltonian at dims 4*n_keep, 8*n_keep, ... until
// the lowest n_keep eigenvalues move by less than rel_tol.
ConvergedEigen converged_eigen(const DerivedParams& dp, int n_keep, double rel_tol,
                               int dim_cap = kDefaultDimCap);

// Largest |entry| of `a` over rows and columns 0..dim-1-margin.
double interior_max_abs(const Eigen::MatrixXd& a, int margin);

}  // namespace qosc

#endif  // QOSC_FOCK_ORACLE_HPP
