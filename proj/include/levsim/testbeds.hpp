#pragma once

#include "levsim/hamiltonian.hpp"

namespace levsim {

/// H = (p^2 + q^2) / 2 in one degree of freedom.
class HarmonicOscillator final : public HamiltonianSystem {
public:
    std::size_t dimension() const override { return 1; }
    double energy(const PhaseState& s) const override;
    std::vector<double> dH_dp(const PhaseState& s) const override;
    std::vector<double> dH_dq(const PhaseState& s) const override;

    /// Exact flow from `initial` to time t.
    static PhaseState exact(const PhaseState& initial, double t);
};

/// H = p^2 / 2.
class FreeParticle final : public HamiltonianSystem {
public:
    std::size_t dimension() const override { return 1; }
    double energy(const PhaseState& s) const override;
    std::vector<double> dH_dp(const PhaseState& s) const override;
    std::vector<double> dH_dq(const PhaseState& s) const override;
};

/// H(t) = p^2/2 + q^2/2 - q sin(t): resonantly driven oscillator.
class DrivenOscillator final : public TimeDependentSystem {
public:
    std::size_t dimension() const override { return 1; }
    double energy_at(const PhaseState& s, double time) const override;
    std::vector<double> dH_dp_at(const PhaseState& s, double time) const override;
    std::vector<double> dH_dq_at(const PhaseState& s, double time) const override;
};

}  // namespace levsim
