#ifndef QOSC_CLI_HPP
#define QOSC_CLI_HPP

#include <iosfwd>
#include <string>

namespace qosc::cli {

enum class Command { params, spectrum, eigvec, hierarchy, verify };
enum class Format { json, csv };

enum ExitCode : int {
  kOk = 0,
  kDomainError = 2,
  kTruncation = 3,  // truncation, convergence or floating-point range
  kVerificationFailed = 4,
};

struct RunConfig {
  Command command = Command::params;
  double alpha = 0.1;
  double beta = 0.2;
  int n_max = 10;
  int dim = 400;
  int sigma_max = 0;  // 0: adaptive (eigvec) or the battery default (verify)
  int levels = 5;
  double tol = 1e-10;
  Format format = Format::json;
  bool log_domain = false;
  int n = 0;                  // eigvec level
  bool inject_fault = false;  // verify self-test
};

// Each command writes its document to `out` and throws the library's error
// types on failure. cmd_verify returns false when a check fails.
void cmd_params(const RunConfig& cfg, std::ostream& out);
void cmd_spectrum(const RunConfig& cfg, std::ostream& out);
void cmd_eigvec(const RunConfig& cfg, std::ostream& out);
void cmd_hierarchy(const RunConfig& cfg, std::ostream& out);
bool cmd_verify(const RunConfig& cfg, std::ostream& out);

// Maps exceptions to exit codes and prints a one-line diagnostic to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full command line: parse, run, exit code.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qosc::cli

#endif  // QOSC_CLI_HPP
