#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "levsim/hamiltonian.hpp"

namespace levsim {

enum class Scheme { vv, pv, rk4, td_strang, mpe };
/// Second-order kernel used by substep composition and extrapolation.
enum class Kernel { vv, pv };

std::string_view to_string(Scheme scheme);
std::string_view to_string(Kernel kernel);

struct IntegratorSpec {
    Scheme scheme = Scheme::vv;
    int mpe_n = 1;
    Kernel kernel = Kernel::vv;
    double h = 1e-3;
    std::size_t steps = 1000;

    /// Extrapolation depth is capped at 5 (order 10) unless `max_mpe_n`
    /// raises it. Throws ContractViolation.
    void validate(int max_mpe_n = 5) const;
    /// Global order the scheme is designed for.
    int nominal_order() const;
    /// Short label: "vv", "pv", "rk4", "td_strang", "mpe4", ...
    std::string label() const;
};

// Every stepper returns a new state with t advanced by h. A singular or
// non-finite evaluation inside a step raises IntegrationFailure carrying the
// 0-based substep index.

/// kick(h/2), drift(h), kick(h/2).
PhaseState vv_step(const HamiltonianSystem& system, const PhaseState& state, double h);
/// drift(h/2), kick(h), drift(h/2).
PhaseState pv_step(const HamiltonianSystem& system, const PhaseState& state, double h);
/// Classical four-stage Runge-Kutta on (dH/dp, -dH/dq).
PhaseState rk4_step(const HamiltonianSystem& system, const PhaseState& state, double h);

PhaseState kernel_step(Kernel kernel, const HamiltonianSystem& system, const PhaseState& state, double h);

/// k applications of the kernel with step h/k.
PhaseState t2_substeps(const HamiltonianSystem& system, const PhaseState& state, double h,
                       std::size_t k, Kernel kernel = Kernel::vv);

/// Time-shifted Strang step for non-autonomous systems: kick(h/2) evaluated
/// at t + h/4, drift(h) at t + h/2, kick(h/2) at t + 3h/4. The result carries
/// time t + h.
PhaseState td_strang_step(const TimeDependentSystem& system, const PhaseState& state,
                          double t, double h);

}  // namespace levsim
