#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "qosc/errors.hpp"
#include "qosc/verify.hpp"

using namespace qosc;

namespace {

std::set<std::string> names_with(const VerifyReport& r, CheckStatus s) {
  std::set<std::string> out;
  for (const auto& c : r.checks)
    if (c.status == s) out.insert(c.name);
  return out;
}

}  // namespace

TEST_CASE("battery passes at the reference point and the fault is caught") {
  const DerivedParams dp = derive({0.1, 0.2});
  const VerifyReport clean = verify(dp, {});
  for (const auto& c : clean.checks) {
    INFO(c.name << ": residual " << c.residual << ", tol " << c.tolerance << ", " << c.note);
    CHECK(c.status != CheckStatus::fail);
    if (c.status == CheckStatus::pass) CHECK(c.residual <= c.tolerance);
  }
  CHECK(clean.passed());
  CHECK(names_with(clean, CheckStatus::skipped) == std::set<std::string>{"special_limits"});
  REQUIRE(clean.find("oracle_spectrum") != nullptr);
  CHECK(clean.find("no_such_check") == nullptr);

  VerifyConfig faulty;
  faulty.inject_fault = true;
  const VerifyReport bad = verify(dp, faulty);
  CHECK_FALSE(bad.passed());
  const auto expected = fault_sensitive_checks();
  CHECK(names_with(bad, CheckStatus::fail) ==
        std::set<std::string>(expected.begin(), expected.end()));
  // everything the fault does not touch is unchanged
  for (const auto& c : bad.checks) {
    if (std::find(expected.begin(), expected.end(), c.name) != expected.end()) continue;
    CHECK(c.residual == clean.find(c.name)->residual);
  }
}

TEST_CASE("battery in the special regimes") {
  VerifyConfig cfg;
  cfg.dim = 200;
  const VerifyReport eq = verify(derive({0.3, 0.3}), cfg);
  CHECK(eq.passed());
  CHECK(eq.find("special_limits")->status == CheckStatus::pass);
  CHECK(eq.find("ladder_recursion")->residual < 1e-13);
  CHECK(eq.find("polynomial_routes")->status == CheckStatus::pass);

  const VerifyReport a0 = verify(derive({0.0, 0.3}), cfg);
  CHECK(a0.passed());
  for (const char* name : {"oracle_spectrum", "ground_state_annihilation", "ladder_recursion",
                           "oracle_overlap", "gram_identity", "commutator"})
    CHECK(a0.find(name)->status == CheckStatus::skipped);
  CHECK(a0.find("telescoping")->status == CheckStatus::pass);
  CHECK(a0.find("appendix_identities")->status == CheckStatus::pass);

  const VerifyReport zero = verify(derive({0.0, 0.0}), cfg);
  CHECK(zero.passed());
}

TEST_CASE("config validation and determinism") {
  const DerivedParams dp = derive({0.05, 0.4});
  VerifyConfig cfg;
  cfg.dim = 2;
  CHECK_THROWS_AS(verify(dp, cfg), domain_error);
  cfg = {};
  cfg.n_spectrum = 0;
  CHECK_THROWS_AS(verify(dp, cfg), domain_error);

  cfg = {};
  cfg.dim = 120;
  cfg.n_spectrum = 5;
  const VerifyReport a = verify(dp, cfg);
  const VerifyReport b = verify(dp, cfg);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].residual == b.checks[i].residual);
  }
}
