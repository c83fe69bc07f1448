#ifndef QOSC_ERRORS_HPP
#define QOSC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qosc {

// Parameter outside the physical or mathematical domain (αβ ≥ 1, negative
// parameter, parity mismatch, forbidden series parameter, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A double-precision result would overflow; the caller should switch to the
// log-domain scalar.
class overflow_error : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

// Series or iteration did not converge, or a truncated expansion left a tail
// larger than requested.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computed quantity violated an invariant that must hold by construction
// (for instance a non-monotone spectrum table).
class consistency_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// One of the three P_n construction routes failed for the given arguments.
class route_error : public domain_error {
 public:
  route_error(std::string route, const std::string& what)
      : domain_error(route + " route: " + what), route_(std::move(route)) {}
  const std::string& route() const noexcept { return route_; }

 private:
  std::string route_;
};

}  // namespace qosc

#endif  // QOSC_ERRORS_HPP
