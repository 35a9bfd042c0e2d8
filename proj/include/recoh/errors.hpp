// errors.hpp — error types for numerical failures and contract violations

#pragma once

#include <stdexcept>
#include <string>

namespace recoh {

// Config/shape/precondition violations. Maps to CLI exit code 1.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Adaptive quadrature could not reach the requested tolerance within the
// subdivision budget. Carries the best estimate so callers can still report it.
struct QuadratureFailure : std::runtime_error {
    double best_estimate;
    double error_estimate;

    QuadratureFailure(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate(best), error_estimate(err) {}
};

// Mode-amplitude integration went unstable (growth beyond the adiabatic
// envelope with a smooth schedule).
struct IntegrationFailure : std::runtime_error {
    double time;

    IntegrationFailure(const std::string& what, double t)
        : std::runtime_error(what), time(t) {}
};

// Truncated-Fock evolution left its validity envelope (norm drift or
// truncation leakage).
struct OracleInvalid : std::runtime_error {
    double time;

    OracleInvalid(const std::string& what, double t)
        : std::runtime_error(what), time(t) {}
};

} // namespace recoh
