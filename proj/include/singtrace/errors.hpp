#pragma once

#include <stdexcept>
#include <string>

namespace singtrace {

/// Rejected input: violated precondition or type invariant. CLI maps this to
/// exit code 2.
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// x is not in M(psi) up to the probed horizon; carries the witness t where
/// the weighted mean escaped every bound.
class NotInSpace : public std::runtime_error {
  public:
    NotInSpace(const std::string& what, double witness)
        : std::runtime_error(what), witness_t(witness) {}
    double witness_t;
};

/// Numeric non-convergence promoted to an error under --strict. CLI maps this
/// to exit code 3.
class NumericDiagnostic : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace singtrace
