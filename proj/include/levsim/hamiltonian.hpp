#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "levsim/phase_state.hpp"

namespace levsim {

/// Contract for a Hamiltonian vector field split into its drift (dH/dp) and
/// kick (dH/dq) directions. Implementations are immutable function bundles
/// and may be evaluated from any number of threads.
class HamiltonianSystem {
public:
    virtual ~HamiltonianSystem() = default;

    virtual std::size_t dimension() const = 0;
    virtual double energy(const PhaseState& state) const = 0;
    virtual std::vector<double> dH_dp(const PhaseState& state) const = 0;
    virtual std::vector<double> dH_dq(const PhaseState& state) const = 0;
    virtual bool time_dependent() const { return false; }

    /// Truncated shift exp(tau B): p <- p - tau * dH/dq(q, p).
    PhaseState kick(const PhaseState& state, double tau) const;
    /// Truncated shift exp(tau A): q <- q + tau * dH/dp(q, p).
    PhaseState drift(const PhaseState& state, double tau) const;
};

/// Non-autonomous extension: every field takes an explicit evaluation time.
/// The inherited autonomous entry points evaluate at state.t.
class TimeDependentSystem : public HamiltonianSystem {
public:
    virtual double energy_at(const PhaseState& state, double time) const = 0;
    virtual std::vector<double> dH_dp_at(const PhaseState& state, double time) const = 0;
    virtual std::vector<double> dH_dq_at(const PhaseState& state, double time) const = 0;

    double energy(const PhaseState& state) const final { return energy_at(state, state.t); }
    std::vector<double> dH_dp(const PhaseState& state) const final { return dH_dp_at(state, state.t); }
    std::vector<double> dH_dq(const PhaseState& state) const final { return dH_dq_at(state, state.t); }
    bool time_dependent() const override { return true; }

    PhaseState kick_at(const PhaseState& state, double tau, double time) const;
    PhaseState drift_at(const PhaseState& state, double tau, double time) const;
};

/// Views an autonomous system through the time-dependent contract by
/// ignoring the evaluation time. Holds a reference; the wrapped system must
/// outlive the view.
class AutonomousView final : public TimeDependentSystem {
public:
    explicit AutonomousView(const HamiltonianSystem& inner) : inner_(inner) {}

    std::size_t dimension() const override { return inner_.dimension(); }
    double energy_at(const PhaseState& s, double) const override { return inner_.energy(s); }
    std::vector<double> dH_dp_at(const PhaseState& s, double) const override { return inner_.dH_dp(s); }
    std::vector<double> dH_dq_at(const PhaseState& s, double) const override { return inner_.dH_dq(s); }
    bool time_dependent() const override { return false; }

private:
    const HamiltonianSystem& inner_;
};

enum class Block { q, p };

/// Central-difference gradient of the energy with respect to one block.
/// The step for component i is eps * max(1, |x_i|). Throws EvaluationFailure
/// naming the component if the energy is non-finite at a probe point.
std::vector<double> fd_gradient(const HamiltonianSystem& system, const PhaseState& state,
                                Block which, double eps = 1e-6);

/// Weighted sum of phase points sharing dimension and time. Weights must sum
/// to one; the sum is taken in index order with Neumaier compensation.
PhaseState affine_combine(std::span<const PhaseState> states, std::span<const double> weights);

/// Tolerance applied to |sum(weights) - 1| in affine_combine, relative to
/// max(1, sum |w_i|).
inline constexpr double kAffineWeightTolerance = 1e-12;

}  // namespace levsim
