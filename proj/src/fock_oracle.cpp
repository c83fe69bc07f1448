#include "qosc/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "qosc/errors.hpp"
#include "qosc/qcalc.hpp"

namespace qosc {

BandedSymMatrix::BandedSymMatrix(int dim, int bandwidth)
    : m_(Eigen::MatrixXd::Zero(dim, dim)), bandwidth_(bandwidth) {
  if (dim < 1) throw domain_error("BandedSymMatrix: dim must be >= 1");
  if (bandwidth < 0) throw domain_error("BandedSymMatrix: bandwidth must be >= 0");
}

void BandedSymMatrix::set(int i, int j, double value) {
  if (std::abs(i - j) > bandwidth_) throw domain_error("BandedSymMatrix: entry outside band");
  m_(i, j) = value;
  m_(j, i) = value;
}

namespace {

void require_dim(int dim, int min_dim, const char* what) {
  if (dim < min_dim)
    throw domain_error(std::string(what) + ": dim must be >= " + std::to_string(min_dim));
}

void require_fock(const DerivedParams& dp, const char* what) {
  if (!dp.has_fock_representation())
    throw domain_error(std::string(what) + ": no q-boson representation in regime " +
                       std::string(to_string(dp.regime)));
}

// sqrt([n]_q) for n = 0..dim, raising overflow_error instead of saturating.
std::vector<double> sqrt_q_numbers(int dim, double q) {
  std::vector<double> r(static_cast<std::size_t>(dim) + 1);
  for (int n = 0; n <= dim; ++n) r[n] = std::sqrt(q_number(n, q));
  return r;
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> qboson_matrices(int dim, double q) {
  require_dim(dim, 2, "qboson_matrices");
  const auto sq = sqrt_q_numbers(dim, q);
  Eigen::MatrixXd b_dag = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) b_dag(n + 1, n) = sq[n + 1];
  Eigen::MatrixXd b = b_dag.transpose();
  return {std::move(b), std::move(b_dag)};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> position_momentum(int dim, double q, double gamma) {
  if (!(gamma > 0.0)) throw domain_error("position_momentum: gamma must be positive");
  const auto [b, b_dag] = qboson_matrices(dim, q);
  Eigen::MatrixXd x = 0.5 * std::sqrt(gamma * (q + 1.0)) * (b_dag + b);
  Eigen::MatrixXd p = 0.5 * std::sqrt((q + 1.0) / gamma) * (b_dag - b);
  return {std::move(x), std::move(p)};
}

BandedSymMatrix hamiltonian(int dim, const DerivedParams& dp) {
  require_dim(dim, 4, "hamiltonian");
  require_fock(dp, "hamiltonian");
  const double q = dp.q;
  const double gamma = *dp.gamma;
  const double diag_scale = (q + 1.0) * (gamma + 1.0 / gamma) / 8.0;
  const double off_scale = (q + 1.0) * (gamma - 1.0 / gamma) / 8.0;
  const auto sq = sqrt_q_numbers(dim + 1, q);
  BandedSymMatrix h(dim, 2);
  for (int n = 0; n < dim; ++n) {
    h.set(n, n, diag_scale * (sq[n] * sq[n] + sq[n + 1] * sq[n + 1]));
    if (n + 2 < dim) h.set(n + 2, n, off_scale * sq[n + 1] * sq[n + 2]);
  }
  if (!h.dense().allFinite()) throw overflow_error("hamiltonian: entries overflow at this dim");
  return h;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> ladder_matrices(int dim, const DerivedParams& dp,
                                                            int level) {
  require_fock(dp, "ladder_matrices");
  if (level < 0) throw domain_error("ladder_matrices: level must be >= 0");
  const auto [b, b_dag] = qboson_matrices(dim, dp.q);
  const double k_level = std::exp(0.5 * level * dp.log_q) * *dp.big_k;
  const double t_level = *dp.t * std::exp(-level * dp.log_q);
  Eigen::MatrixXd b_plus = (k_level / std::sqrt(2.0)) * (b_dag - t_level * b);
  Eigen::MatrixXd b_minus = b_plus.transpose();
  return {std::move(b_plus), std::move(b_minus)};
}

EigenResult eig_sym(const Eigen::MatrixXd& input, int max_sweeps) {
  const Eigen::Index n = input.rows();
  if (n != input.cols() || n == 0) throw domain_error("eig_sym: matrix must be square, non-empty");
  if (!input.allFinite()) throw domain_error("eig_sym: matrix has non-finite entries");
  if (!input.isApprox(input.transpose(), 0.0) && input != input.transpose())
    throw domain_error("eig_sym: matrix is not symmetric");

  Eigen::MatrixXd a = input;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  constexpr double tol = 4.0 * std::numeric_limits<double>::epsilon();

  EigenResult out;
  bool converged = n == 1;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) {
        const double apr = a(p, r);
        if (apr == 0.0) continue;
        const double app = a(p, p);
        const double arr = a(r, r);
        if (std::fabs(apr) <= tol * std::sqrt(std::fabs(app)) * std::sqrt(std::fabs(arr)))
          continue;
        rotated = true;
        const double theta = (arr - app) / (2.0 * apr);
        double t;
        if (std::fabs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        a(p, p) = app - t * apr;
        a(r, r) = arr + t * apr;
        a(p, r) = 0.0;
        a(r, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == r) continue;
          const double akp = a(k, p);
          const double akr = a(k, r);
          const double np = c * akp - s * akr;
          const double nr = s * akp + c * akr;
          a(k, p) = np;
          a(p, k) = np;
          a(k, r) = nr;
          a(r, k) = nr;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkr = v(k, r);
          v(k, p) = c * vkp - s * vkr;
          v(k, r) = s * vkp + c * vkr;
        }
      }
    }
    out.sweeps = sweep + 1;
    converged = !rotated;
  }
  if (!converged) throw convergence_error("eig_sym: Jacobi sweeps did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::VectorXd diag = a.diagonal();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return diag(i) < diag(j); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = diag(order[static_cast<std::size_t>(j)]);
    out.vectors.col(j) = v.col(order[static_cast<std::size_t>(j)]);
  }
  const Eigen::MatrixXd residual =
      input * out.vectors - out.vectors * out.values.asDiagonal();
  out.residual_bound = residual.colwise().norm().maxCoeff();
  return out;
}

EigenResult eig_sym(const BandedSymMatrix& m, int max_sweeps) { return eig_sym(m.dense(), max_sweeps); }

ConvergedEigen converged_eigen(const DerivedParams& dp, int n_keep, double rel_tol, int dim_cap) {
  if (n_keep < 1) throw domain_error("converged_eigen: n_keep must be >= 1");
  if (!(rel_tol > 0.0)) throw domain_error("converged_eigen: rel_tol must be positive");
  ConvergedEigen previous;
  for (int dim = std::max(4, 4 * n_keep); dim <= dim_cap; dim *= 2) {
    EigenResult r;
    try {
      r = eig_sym(hamiltonian(dim, dp));
    } catch (const overflow_error& e) {
      throw convergence_error(
          std::string("converged_eigen: exponential spectrum outpaced double precision (") +
          e.what() + ")");
    }
    if (previous.dim > 0) {
      double change = 0.0;
      for (int j = 0; j < n_keep; ++j) {
        const double before = previous.result.values(j);
        change = std::max(change, std::fabs(r.values(j) - before) / std::fabs(before));
      }
      if (change < rel_tol) return previous;
    }
    previous = {std::move(r), dim};
  }
  throw convergence_error("converged_eigen: lowest " + std::to_string(n_keep) +
                          " eigenvalues not converged below dim cap " + std::to_string(dim_cap));
}

double interior_max_abs(const Eigen::MatrixXd& a, int margin) {
  const Eigen::Index keep = a.rows() - margin;
  if (keep <= 0) return 0.0;
  return a.topLeftCorner(keep, keep).cwiseAbs().maxCoeff();
}

}  // namespace qosc
