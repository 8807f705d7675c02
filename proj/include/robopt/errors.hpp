#pragma once

#include <stdexcept>
#include <string>

namespace robopt {

// Bad argument or a precondition on the input domain (probability outside (0,1),
// empty sample, infeasible budget, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical routine failed to converge. Carries the last residual.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// A modelling assumption required by a solver (A, V1, V2, V3, E1, E2) fails.
class AssumptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The optimization problem has no minimizer (VaR complete market, ES complete
// market without E1).
class NonexistenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed experiment configuration.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace robopt
