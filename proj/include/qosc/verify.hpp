#ifndef QOSC_VERIFY_HPP
#define QOSC_VERIFY_HPP

// Cross-check battery: every closed form against the truncated Fock-space
// oracle or an independent construction, at one parameter point.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qosc/deformation.hpp"

namespace qosc {

enum class CheckStatus { pass, fail, skipped };
std::string_view to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::skipped;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct VerifyConfig {
  int dim = 400;          // oracle Hamiltonian size
  int n_spectrum = 10;    // eigenvalues compared
  int sigma_max = 80;     // annihilation and ladder truncation
  int gram_sigma_max = 100;
  int overlap_levels = 8;
  int operator_dim = 60;  // commutator, factorization, shape invariance
  int levels = 4;         // shape-invariance levels checked
  std::uint64_t seed = 20240611;
  // Adds kFaultSize * max|P_2| to f_{2,0} wherever the closed-form P_2 feeds a
  // check. Used to confirm that the battery notices a single bad coefficient.
  bool inject_fault = false;
};

inline constexpr int kFaultLevel = 2;
inline constexpr double kFaultSize = 1e-3;

// Checks whose inputs include the closed-form f_{2,0}.
std::vector<std::string> fault_sensitive_checks();

struct VerifyReport {
  DerivedParams dp;
  VerifyConfig config;
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(std::string_view name) const;
};

VerifyReport verify(const DerivedParams& dp, const VerifyConfig& cfg = {});

}  // namespace qosc

#endif  // QOSC_VERIFY_HPP
