#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "qosc/eigenstates.hpp"
#include "qosc/errors.hpp"
#include "qosc/fock_oracle.hpp"
#include "qosc/spectrum.hpp"

using namespace qosc;

namespace {

double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale == 0.0 ? 0.0 : (a - b).cwiseAbs().maxCoeff() / scale;
}

struct QT {
  double q, t;
};

QT random_qt(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uq(1.0 + 1e-3, 3.0), ut(-0.9, 0.9);
  return {uq(rng), ut(rng)};
}

}  // namespace

TEST_CASE("f coefficients: small cases") {
  const double q = 1.7, t = 0.35;
  CHECK(coeff_f_closed(0, 0, q, t) == 1.0);
  CHECK(coeff_f_closed(1, 1, q, t) == doctest::Approx(1.0 - t * t / q).epsilon(1e-15));
  CHECK(coeff_f_closed(2, 0, q, t) == doctest::Approx(-t * (1.0 - t * t / (q * q * q))).epsilon(1e-14));
  CHECK(coeff_f_closed(2, 2, q, t) ==
        doctest::Approx((1.0 - t * t / (q * q * q)) * (1.0 - t * t / q)).epsilon(1e-14));
  const double f31 = -(1.0 - t * t / std::pow(q, 5)) * (1.0 - t * t / std::pow(q, 3)) * (t / q) *
                     (1.0 + q + q * q);
  CHECK(coeff_f_closed(3, 1, q, t) == doctest::Approx(f31).epsilon(1e-14));
  CHECK(coeff_f_closed(4, -1, q, t) == 0.0);
  CHECK_THROWS_AS(coeff_f_closed(3, 2, q, t), domain_error);
  CHECK_THROWS_AS(coeff_f_closed(3, 5, q, t), domain_error);

  const auto rows = coeff_f_recursive(3, q, t);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1](1) == doctest::Approx(1.0 - t * t / q).epsilon(1e-15));
  CHECK(rows[2](0) == doctest::Approx(coeff_f_closed(2, 0, q, t)).epsilon(1e-14));
  CHECK(rows[3](1) == doctest::Approx(f31).epsilon(1e-14));
}

TEST_CASE("f recursion agrees with the product formula") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const QT p = random_qt(rng);
    const auto rows = coeff_f_recursive(20, p.q, p.t);
    for (int n = 0; n <= 20; ++n) {
      for (int m = n % 2; m <= n; m += 2) {
        const double c = coeff_f_closed(n, m, p.q, p.t);
        INFO("q = " << p.q << ", t = " << p.t << ", n = " << n << ", m = " << m);
        CHECK(std::fabs(rows[n](m) - c) <= 1e-10 * std::fabs(c));
      }
    }
  }
}

TEST_CASE("normalization") {
  CHECK(normalization(0, 1.5, 0.0) == 1.0);
  // N_0 = (1phi0(q; -; q^2, t^2))^{-1/2}
  const double q = 1.4, t = 0.5;
  double series = 0.0, term = 1.0;
  for (int j = 0; j < 400; ++j) {
    series += term;
    term *= (1.0 - std::pow(q, 2 * j + 1)) / (1.0 - std::pow(q, 2 * j + 2)) * t * t;
  }
  CHECK(normalization(0, q, t) == doctest::Approx(1.0 / std::sqrt(series)).epsilon(1e-13));
  // at t = 0 only the q-factorial survives
  CHECK(normalization(4, q, 0.0) == doctest::Approx(1.0 / std::sqrt(q_factorial(4, q))).epsilon(1e-14));

  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const QT p = random_qt(rng);
    for (int n = 0; n <= 15; ++n) {
      const double a = normalization(n, p.q, p.t);
      CHECK(std::fabs(normalization_recursive(n, p.q, p.t) - a) <= 1e-10 * a);
    }
  }
  CHECK_THROWS_AS(normalization(1, 1.5, 1.0), domain_error);
}

TEST_CASE("polynomials: examples and routes") {
  const double q = 1.5, t = 0.4;
  for (auto route : {PolynomialRoute::closed, PolynomialRoute::recursive, PolynomialRoute::jacobi}) {
    const EvenOddPolynomial p0 = polynomial_p(0, q, t, route);
    CHECK(p0.degree() == 0);
    CHECK(p0.coeff(0) == doctest::Approx(1.0));
    const EvenOddPolynomial p2 = polynomial_p(2, q, t, route);
    const double lead = 1.0 - t * t / (q * q * q);
    CHECK(p2.coeff(2) == doctest::Approx(lead * (1.0 - t * t / q)).epsilon(1e-13));
    CHECK(p2.coeff(1) == 0.0);
    CHECK(p2.coeff(0) == doctest::Approx(-t * lead).epsilon(1e-13));
  }
  const auto c6 = polynomial_p(6, q, t, PolynomialRoute::closed);
  const auto r6 = polynomial_p(6, q, t, PolynomialRoute::recursive);
  const auto j6 = polynomial_p(6, q, t, PolynomialRoute::jacobi);
  CHECK(rel_diff(c6.coefficients(), r6.coefficients()) < 1e-12);
  CHECK(rel_diff(c6.coefficients(), j6.coefficients()) < 1e-12);
  CHECK(rel_diff(r6.coefficients(), j6.coefficients()) < 1e-12);

  CHECK_THROWS_AS(polynomial_p(3, q, 0.0, PolynomialRoute::jacobi), route_error);
  CHECK_THROWS_AS(polynomial_p(3, 1.0, 0.3, PolynomialRoute::jacobi), route_error);
  CHECK_THROWS_AS(polynomial_p(-1, q, t, PolynomialRoute::closed), domain_error);
}

TEST_CASE("polynomials: three routes agree on random inputs") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    QT p = random_qt(rng);
    if (std::fabs(p.t) < 1e-3) p.t = 0.1;
    for (int n = 0; n <= 12; ++n) {
      const auto c = polynomial_p(n, p.q, p.t, PolynomialRoute::closed);
      const auto r = polynomial_p(n, p.q, p.t, PolynomialRoute::recursive);
      const auto j = polynomial_p(n, p.q, p.t, PolynomialRoute::jacobi);
      INFO("q = " << p.q << ", t = " << p.t << ", n = " << n);
      CHECK(c.parity() == parity_of(n));
      for (int m = 1 - n % 2; m <= n; m += 2) CHECK(c.coeff(m) == 0.0);
      CHECK(rel_diff(c.coefficients(), r.coefficients()) < 1e-9);
      CHECK(rel_diff(c.coefficients(), j.coefficients()) < 1e-9);
      // P_n(-xi) = (-1)^n P_n(xi)
      CHECK(c(-0.7) == doctest::Approx((n % 2 ? -1.0 : 1.0) * c(0.7)));
    }
  }
}

TEST_CASE("ground state in the Fock basis") {
  const DerivedParams eq = derive({0.2, 0.2});
  const FockExpansion vac = ground_state_fock(eq, 20);
  CHECK(vac.coeffs(0) == doctest::Approx(1.0));
  CHECK(vac.coeffs.tail(vac.dim() - 1).cwiseAbs().maxCoeff() == 0.0);

  const DerivedParams dp = derive({0.1, 0.2});
  const double q = dp.q, t = *dp.t;
  const FockExpansion g = ground_state_fock(dp, 60);
  CHECK(g.coeffs(2) / g.coeffs(0) == doctest::Approx(t / std::sqrt(q + 1.0)).epsilon(1e-13));
  // c_{2nu} = N_0 sqrt([2nu-1]!!/[2nu]!!) t^nu
  const double n0 = normalization(0, q, t);
  for (int nu = 0; nu <= 10; ++nu) {
    const double ratio = nu == 0 ? 1.0 : q_double_factorial(2 * nu - 1, q) / q_double_factorial(2 * nu, q);
    CHECK(g.coeffs(2 * nu) == doctest::Approx(n0 * std::sqrt(ratio) * std::pow(t, nu)).epsilon(1e-12));
    CHECK(g.coeffs(2 * nu + 1) == 0.0);
  }
  CHECK(g.norm_squared == doctest::Approx(1.0).epsilon(1e-12));

  const auto [bp, bm] = ladder_matrices(g.dim(), dp, 0);
  CHECK((bm * g.coeffs).norm() < 1e-8);

  // n = 0 through the general construction is the same vector
  const FockExpansion e0 = eigenstate_fock(dp, 0, 60);
  CHECK((e0.coeffs - g.coeffs).norm() < 1e-15);
}

TEST_CASE("excited states in the Fock basis") {
  const DerivedParams eq = derive({0.3, 0.3});
  for (int n = 0; n <= 5; ++n) {
    const FockExpansion e = eigenstate_fock(eq, n, 12);
    for (int m = 0; m < e.dim(); ++m) CHECK(e.coeffs(m) == doctest::Approx(m == n ? 1.0 : 0.0));
  }

  const DerivedParams dp = derive({0.1, 0.2});
  REQUIRE(*dp.t < 0.0);
  // small enough that the absolute accuracy of a standard solver suffices
  const int dim = 60;
  const BandedSymMatrix h = hamiltonian(dim, dp);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
  std::vector<FockExpansion> states;
  for (int n = 0; n <= 6; ++n) {
    const FockExpansion e = eigenstate_fock(dp, n, 29);
    for (int m = 1 - n % 2; m < e.dim(); m += 2) CHECK(e.coeffs(m) == 0.0);
    CHECK(e.parity == parity_of(n));
    CHECK(e.tail_bound < 1e-10);
    CHECK(e.norm_squared == doctest::Approx(1.0).epsilon(1e-10));
    const double overlap = std::fabs(es.eigenvectors().col(n).dot(e.dense(dim)));
    CHECK(overlap > 1.0 - 1e-7);
    // h psi_n = e_n psi_n directly
    const Eigen::VectorXd v = e.dense(dim);
    CHECK((h.dense() * v - energy(dp, n) * v).head(dim - 10).norm() < 1e-9 * energy(dp, n));
    states.push_back(e);
  }
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = 0; j < states.size(); ++j)
      CHECK(states[i].dense(dim).dot(states[j].dense(dim)) ==
            doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-10));

  // positive t: alpha > beta
  const DerivedParams pos = derive({0.4, 0.05});
  REQUIRE(*pos.t > 0.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(hamiltonian(dim, pos).dense());
  for (int n = 0; n <= 4; ++n)
    CHECK(std::fabs(es2.eigenvectors().col(n).dot(eigenstate_fock(pos, n, 29).dense(dim))) >
          1.0 - 1e-7);
}

TEST_CASE("truncation and regime errors") {
  const DerivedParams dp = derive({0.05, 0.4});
  CHECK_THROWS_AS(eigenstate_fock(dp, 4, 2, Phase::canonical, 1e-12), convergence_error);
  CHECK_THROWS_AS(eigenstate_fock(derive({0.0, 0.3}), 0, 20), domain_error);
  CHECK_THROWS_AS(eigenstate_fock(dp, -1, 20), domain_error);
  // adaptive truncation
  const FockExpansion a = eigenstate_fock(dp, 3, 0);
  CHECK(a.sigma_max >= 16);
  CHECK(a.tail_bound < kDefaultTailTol);
}

TEST_CASE("ladder recursion") {
  CHECK(ladder_check(derive({0.25, 0.25}), 3, 10) < 1e-14);
  const DerivedParams dp = derive({0.1, 0.2});
  for (int n = 0; n <= 5; ++n) CHECK(ladder_check(dp, n, 80) < 1e-7);

  const DerivedParams slow = derive({0.02, 0.6});
  const double r10 = ladder_check(slow, 1, 10);
  const double r20 = ladder_check(slow, 1, 20);
  CHECK(r20 < r10);
  CHECK_THROWS_AS(ladder_check(derive({0.3, 0.0}), 0, 20), domain_error);
}

TEST_CASE("q = 1 limit and Hermite polynomials") {
  const Eigen::VectorXd h3 = hermite_coefficients(3);
  REQUIRE(h3.size() == 4);
  CHECK(h3(0) == 0.0);
  CHECK(h3(1) == -12.0);
  CHECK(h3(2) == 0.0);
  CHECK(h3(3) == 8.0);
  const Eigen::VectorXd h4 = hermite_coefficients(4);
  CHECK(h4(0) == 12.0);
  CHECK(h4(2) == -48.0);
  CHECK(h4(4) == 16.0);

  for (double t : {0.3, 0.6, 0.9}) {
    for (int n = 0; n <= 8; ++n) {
      const HermitePair hp = hermite_limit(n, t);
      CHECK(rel_diff(hp.recursion.coefficients(), hp.hermite.coefficients()) < 1e-10);
    }
    const HermitePair one = hermite_limit(1, t);
    CHECK(one.recursion.coeff(1) == doctest::Approx(1.0 - t * t));
  }
  CHECK_THROWS_AS(hermite_limit(2, 0.0), domain_error);
  CHECK_THROWS_AS(hermite_limit(2, 1.0), domain_error);
}
