#include <doctest.h>

#include <cmath>
#include <random>

#include "qosc/deformation.hpp"
#include "qosc/spectrum.hpp"

using namespace qosc;

namespace {

// The energy formula evaluated literally, no rearrangement.
double energy_raw(const DerivedParams& dp, int n) {
  const double q = dp.q, t = *dp.t, u = *dp.u, gamma = *dp.gamma;
  const double qn = (std::pow(q, n) - 1.0) / (q - 1.0);
  return u * u / (4.0 * gamma) *
         ((1.0 - t * t / std::pow(q, n - 1)) * qn + 0.5 * (std::pow(q, n) - t * t / std::pow(q, n)));
}

DeformationParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    const double a = std::pow(10.0, -3.0 + 3.3 * u(rng));
    const double b = std::pow(10.0, -3.0 + 3.3 * u(rng));
    if (a * b < 0.95) return {a, b};
  }
}

}  // namespace

TEST_CASE("ground-state energy") {
  for (auto p : {DeformationParams{0.1, 0.2}, {0.05, 0.4}, {0.5, 0.1}, {0.9, 1.0}}) {
    const DerivedParams dp = derive(p);
    const double t = *dp.t;
    CHECK(energy(dp, 0) == doctest::Approx(*dp.u * *dp.u * (1.0 - t * t) / (8.0 * *dp.gamma)).epsilon(1e-13));
    CHECK(energy(dp, 0) == doctest::Approx(dp.eps0).epsilon(1e-13));
    CHECK(energy(dp, 0) == doctest::Approx(dp.g * dp.s / 2.0).epsilon(1e-14));
  }
}

TEST_CASE("stable formula matches the literal one away from cancellation") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const DerivedParams dp = derive(random_params(rng));
    if (dp.q < 1.01) continue;
    for (int n = 0; n <= 12; ++n)
      CHECK(energy(dp, n) == doctest::Approx(energy_raw(dp, n)).epsilon(1e-10));
  }
}

TEST_CASE("undeformed and equal parameters") {
  const DerivedParams zero = derive({0.0, 0.0});
  for (int n = 0; n <= 20; ++n) {
    CHECK(std::fabs(energy(zero, n) - (n + 0.5)) < 1e-14);
    CHECK(std::fabs(excitation_energy(zero, n) - n) < 1e-14);
  }
  CHECK(energy_equal(1.5, 0) == doctest::Approx(0.625));
  CHECK(energy_equal(1.0, 7) == doctest::Approx(7.5));
  CHECK(energy_equal(1.0 + 1e-12, 7) == doctest::Approx(7.5).epsilon(1e-10));
  CHECK_THROWS_AS(energy_equal(0.9, 1), domain_error);

  const DerivedParams eq = derive({0.2, 0.2});
  CHECK(eq.q == doctest::Approx(1.5));
  for (int n = 0; n <= 10; ++n) {
    CHECK(std::fabs(energy(eq, n) - energy_equal(eq.q, n)) < 1e-12 * energy_equal(eq.q, n));
    // t = 0: excitation = K^2 [n]_q / 2 with K^2 = (q+1) g^2
    CHECK(excitation_energy(eq, n) ==
          doctest::Approx(0.5 * (eq.q + 1.0) * eq.g * eq.g * q_number(n, eq.q)).epsilon(1e-13));
  }
}

TEST_CASE("alpha = 0 quadratic spectrum") {
  for (int n = 0; n <= 10; ++n) CHECK(energy_alpha_zero(0.0, n) == doctest::Approx(n + 0.5));
  CHECK(energy_alpha_zero(0.3, 0) == doctest::Approx(0.5 * std::sqrt(1.0 + 0.0225) + 0.075));
  CHECK_THROWS_AS(energy_alpha_zero(-0.1, 0), domain_error);

  const DerivedParams a0 = derive({0.0, 0.3});
  const DerivedParams b0 = derive({0.3, 0.0});
  for (int n = 0; n <= 10; ++n) {
    CHECK(energy(a0, n) == energy_alpha_zero(0.3, n));
    CHECK(energy(b0, n) == energy_alpha_zero(0.3, n));
    CHECK(excitation_energy(a0, n) ==
          doctest::Approx(energy_alpha_zero(0.3, n) - energy_alpha_zero(0.3, 0)).epsilon(1e-14));
  }

  const DerivedParams tiny = derive({1e-10, 0.3});
  REQUIRE(tiny.regime == Regime::general);
  CHECK(std::fabs(energy(tiny, 5) - energy_alpha_zero(0.3, 5)) < 1e-4);

  // the gap closes like sqrt(alpha) or faster
  double prev = std::fabs(energy(derive({1e-4, 0.3}), 5) - energy_alpha_zero(0.3, 5));
  for (double a = 5e-5; a > 1e-7; a /= 2.0) {
    const double gap = std::fabs(energy(derive({a, 0.3}), 5) - energy_alpha_zero(0.3, 5));
    CHECK(prev / gap >= std::sqrt(2.0));
    prev = gap;
  }
}

TEST_CASE("excitation energy is the energy difference") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const DerivedParams dp = derive(random_params(rng));
    const double e0 = energy(dp, 0);
    for (int n = 0; n <= 15; ++n) {
      const double diff = energy(dp, n) - e0;
      CHECK(std::fabs(excitation_energy(dp, n) - diff) <= 1e-10 * energy(dp, n));
      if (dp.regime == Regime::general && dp.q > 1.001 && n > 0) {
        const double t = *dp.t, K = *dp.big_k;
        const double raw = 0.5 * K * K * (1.0 - t * t / std::pow(dp.q, n)) *
                           (std::pow(dp.q, n) - 1.0) / (dp.q - 1.0);
        CHECK(excitation_energy(dp, n) == doctest::Approx(raw).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("monotonicity, exchange symmetry and telescoping") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const DeformationParams p = random_params(rng);
    const DerivedParams a = derive(p);
    const DerivedParams b = derive({p.beta, p.alpha});
    const auto h = hierarchy<double>(a, 11);
    double sum = 0.0;
    for (int n = 0; n <= 10; ++n) {
      const double e = energy(a, n);
      if (n > 0) CHECK(e > energy(a, n - 1));
      CHECK(std::fabs(e - energy(b, n)) <= 1e-12 * e);
      sum += h[n].eps;
      CHECK(std::fabs(e - sum) <= 1e-10 * e);
    }
  }
}

TEST_CASE("exponential growth of the spectrum") {
  for (auto p : {DeformationParams{0.1, 0.1}, {0.1, 0.3}, {0.4, 0.6}}) {
    const DerivedParams dp = derive(p);
    REQUIRE(dp.q >= 1.2);
    const double ratio = energy(dp, 81) / energy(dp, 80);
    CHECK(std::fabs(ratio / dp.q - 1.0) < 0.01);
  }
}

TEST_CASE("spectrum table") {
  SpectrumRequest req{derive({0.0, 0.0}), 0, false};
  auto rows = spectrum_table(req);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].excitation == 0.0);

  req.n_max = 6;
  rows = spectrum_table(req);
  REQUIRE(rows.size() == 7);
  for (const auto& r : rows) {
    CHECK(r.energy == doctest::Approx(r.n + 0.5).epsilon(1e-15));
    CHECK(r.excitation == doctest::Approx(r.n).epsilon(1e-15));
  }

  req.dp = derive({0.1, 0.2});
  req.n_max = 30;
  rows = spectrum_table(req);
  for (const auto& r : rows) {
    CHECK(r.energy == energy(req.dp, r.n));
    CHECK(r.excitation == excitation_energy(req.dp, r.n));
  }
  req.n_max = -1;
  CHECK_THROWS_AS(spectrum_table(req), domain_error);
}

TEST_CASE("log-domain spectrum") {
  const DerivedParams dp = derive({0.5, 0.6});
  for (int n : {0, 1, 5, 40}) {
    CHECK(energy<LogReal>(dp, n).value() == doctest::Approx(energy(dp, n)).epsilon(1e-12));
    CHECK(excitation_energy<LogReal>(dp, n).value() ==
          doctest::Approx(excitation_energy(dp, n)).epsilon(1e-12));
  }
  const int big = 4000;
  CHECK_THROWS_AS(energy(dp, big), overflow_error);
  const LogReal e = energy<LogReal>(dp, big);
  const LogReal e1 = energy<LogReal>(dp, big + 1);
  CHECK((e1.log_abs() - e.log_abs()) == doctest::Approx(dp.log_q).epsilon(1e-10));

  SpectrumRequest req{dp, big, true};
  const auto rows = spectrum_table<LogReal>(req);
  CHECK(rows.size() == static_cast<std::size_t>(big) + 1);
  CHECK(rows.back().energy.log_abs() == doctest::Approx(e.log_abs()).epsilon(1e-14));
}
