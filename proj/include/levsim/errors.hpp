#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace levsim {

/// A precondition of an operation was violated by the caller.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A system function returned a non-finite value at a probe point.
class EvaluationFailure : public std::runtime_error {
public:
    EvaluationFailure(const std::string& what, std::optional<std::size_t> component = std::nullopt)
        : std::runtime_error(what), component_(component) {}

    std::optional<std::size_t> component() const noexcept { return component_; }

private:
    std::optional<std::size_t> component_;
};

/// Euler-angle coordinate singularity (|sin q4| below the admissible guard).
class SingularityError : public std::domain_error {
public:
    SingularityError(const std::string& what, double sin_value)
        : std::domain_error(what), sin_value_(sin_value) {}

    double sin_value() const noexcept { return sin_value_; }

private:
    double sin_value_;
};

/// Bracket passed to a root finder does not contain a sign change.
class NoRootError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A stepper could not complete a step. Carries enough context to locate
/// the failure inside a long run.
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(std::string reason, std::size_t substep,
                       std::optional<std::size_t> step = std::nullopt,
                       std::optional<std::size_t> substep_count = std::nullopt,
                       std::vector<double> state_dump = {});

    const std::string& reason() const noexcept { return reason_; }
    std::size_t substep() const noexcept { return substep_; }
    std::optional<std::size_t> step() const noexcept { return step_; }
    /// Substep count k of the kernel run that failed (multiproduct steps only).
    std::optional<std::size_t> substep_count() const noexcept { return substep_count_; }
    /// Flattened (t, q..., p...) of the last good state.
    const std::vector<double>& state_dump() const noexcept { return state_dump_; }

    IntegrationFailure with_step(std::size_t step, std::vector<double> dump) const;
    IntegrationFailure with_substep_count(std::size_t k) const;

private:
    static std::string compose(const std::string& reason, std::size_t substep,
                               std::optional<std::size_t> step,
                               std::optional<std::size_t> k);

    std::string reason_;
    std::size_t substep_;
    std::optional<std::size_t> step_;
    std::optional<std::size_t> substep_count_;
    std::vector<double> state_dump_;
};

}  // namespace levsim
