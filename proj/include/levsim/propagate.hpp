#pragma once

#include <cstddef>
#include <functional>

#include "levsim/hamiltonian.hpp"
#include "levsim/integrators.hpp"
#include "levsim/trajectory.hpp"

namespace levsim {

/// Advances `state` by one step of the configured scheme. TD_STRANG on an
/// autonomous system goes through AutonomousView.
PhaseState advance(const HamiltonianSystem& system, const IntegratorSpec& spec, const PhaseState& state);

/// Called on every sample with the sample and the step index it was taken at.
/// Returning false ends the run early.
using SampleObserver = std::function<bool(const PhaseState&, std::size_t)>;

/// Runs spec.steps steps from `initial`, sampling every `stride` steps. Time
/// is recomputed as t0 + i h after step i. IntegrationFailure from a step is
/// rethrown with the step index and the last good state attached.
Trajectory integrate(const HamiltonianSystem& system, const IntegratorSpec& spec,
                     const PhaseState& initial, std::size_t stride = 1,
                     const SampleObserver& observer = {});

}  // namespace levsim
