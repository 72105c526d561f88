#include "levsim/propagate.hpp"

#include "levsim/errors.hpp"
#include "levsim/mpe.hpp"

namespace levsim {

PhaseState advance(const HamiltonianSystem& system, const IntegratorSpec& spec, const PhaseState& state) {
    switch (spec.scheme) {
        case Scheme::vv: return vv_step(system, state, spec.h);
        case Scheme::pv: return pv_step(system, state, spec.h);
        case Scheme::rk4: return rk4_step(system, state, spec.h);
        case Scheme::mpe: return mpe_step(system, state, spec.h, spec.mpe_n, spec.kernel);
        case Scheme::td_strang:
            if (const auto* td = dynamic_cast<const TimeDependentSystem*>(&system))
                return td_strang_step(*td, state, state.t, spec.h);
            return td_strang_step(AutonomousView(system), state, state.t, spec.h);
    }
    throw ContractViolation("advance: unknown scheme");
}

Trajectory integrate(const HamiltonianSystem& system, const IntegratorSpec& spec,
                     const PhaseState& initial, std::size_t stride, const SampleObserver& observer) {
    spec.validate(kMaxMpeTerms);
    require_well_formed(initial);
    if (initial.dimension() != system.dimension()) {
        throw ContractViolation("integrate: initial state dimension does not match the system");
    }
    if (stride < 1) throw ContractViolation("integrate: stride must be at least 1");

    Trajectory traj;
    traj.spec = spec;
    traj.stride = stride;
    traj.times.reserve(spec.steps / stride + 1);
    traj.states.reserve(spec.steps / stride + 1);

    traj.times.push_back(initial.t);
    traj.states.push_back(initial);
    if (observer && !observer(initial, 0)) return traj;

    const double t0 = initial.t;
    PhaseState state = initial;
    for (std::size_t i = 1; i <= spec.steps; ++i) {
        try {
            state = advance(system, spec, state);
        } catch (const IntegrationFailure& f) {
            throw f.with_step(i, state.flatten());
        }
        state.t = t0 + static_cast<double>(i) * spec.h;
        if (i % stride == 0) {
            traj.times.push_back(state.t);
            traj.states.push_back(state);
            if (observer && !observer(state, i)) break;
        }
    }
    return traj;
}

}  // namespace levsim
