#pragma once

#include <stdexcept>
#include <string>

namespace gstein {

// Invalid arguments are reported with std::invalid_argument. The classes
// below cover the domain-specific failure modes callers need to tell apart.

/// An eigen-solver result failed its residual checks.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A symplectic eigenvalue sits on the pure-state boundary nu = 1/2 where
/// arcoth(2 nu) diverges.
class PureStateDomainError : public std::domain_error {
 public:
  PureStateDomainError(const std::string& what, double nu)
      : std::domain_error(what), nu_(nu) {}
  [[nodiscard]] double symplectic_eigenvalue() const noexcept { return nu_; }

 private:
  double nu_;
};

/// The second state is not faithful (some nu^sigma within pure_tol of 1/2),
/// so D and V may be infinite.
class NotFullSupportError : public std::domain_error {
 public:
  NotFullSupportError(const std::string& what, double nu)
      : std::domain_error(what), nu_(nu) {}
  [[nodiscard]] double symplectic_eigenvalue() const noexcept { return nu_; }

 private:
  double nu_;
};

/// The Fock-space oracle cannot produce a trustworthy answer.
class OracleUnreliableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncation discarded more probability than the budget allows.
class CutoffTooSmallError : public OracleUnreliableError {
 public:
  CutoffTooSmallError(const std::string& what, double deficit)
      : OracleUnreliableError(what), deficit_(deficit) {}
  [[nodiscard]] double trace_deficit() const noexcept { return deficit_; }

 private:
  double deficit_;
};

}  // namespace gstein
