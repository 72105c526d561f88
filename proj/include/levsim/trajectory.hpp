#pragma once

#include <vector>

#include "levsim/integrators.hpp"
#include "levsim/phase_state.hpp"

namespace levsim {

/// Sampled run of an integrator. Samples are taken every `stride` steps,
/// starting with the initial state.
struct Trajectory {
    std::vector<double> times;
    std::vector<PhaseState> states;
    IntegratorSpec spec;
    std::size_t stride = 1;

    std::size_t size() const noexcept { return states.size(); }
    bool empty() const noexcept { return states.empty(); }
};

}  // namespace levsim
