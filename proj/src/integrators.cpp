#include "levsim/integrators.hpp"

#include <cmath>
#include <exception>

#include "levsim/errors.hpp"

namespace levsim {

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::vv: return "vv";
        case Scheme::pv: return "pv";
        case Scheme::rk4: return "rk4";
        case Scheme::td_strang: return "td_strang";
        case Scheme::mpe: return "mpe";
    }
    return "?";
}

std::string_view to_string(Kernel kernel) { return kernel == Kernel::vv ? "vv" : "pv"; }

void IntegratorSpec::validate(int max_mpe_n) const {
    if (!std::isfinite(h) || !(h > 0.0)) throw ContractViolation("integrator: h must be positive");
    if (steps < 1) throw ContractViolation("integrator: steps must be at least 1");
    if (scheme == Scheme::mpe && (mpe_n < 1 || mpe_n > max_mpe_n)) {
        throw ContractViolation("integrator: mpe_n must lie in [1, " + std::to_string(max_mpe_n) + "]");
    }
}

int IntegratorSpec::nominal_order() const {
    switch (scheme) {
        case Scheme::rk4: return 4;
        case Scheme::mpe: return 2 * mpe_n;
        default: return 2;
    }
}

std::string IntegratorSpec::label() const {
    if (scheme == Scheme::mpe) return "mpe" + std::to_string(2 * mpe_n);
    return std::string(to_string(scheme));
}

namespace {

// Wraps one sub-evaluation: model errors and non-finite results become an
// IntegrationFailure tagged with the substep index.
template <typename F>
PhaseState substep(std::size_t index, F&& f) {
    PhaseState out;
    try {
        out = f();
    } catch (const IntegrationFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw IntegrationFailure(e.what(), index);
    }
    if (!out.is_finite()) throw IntegrationFailure("non-finite state", index);
    return out;
}

}  // namespace

PhaseState vv_step(const HamiltonianSystem& system, const PhaseState& state, double h) {
    const double half = 0.5 * h;
    PhaseState s = substep(0, [&] { return system.kick(state, half); });
    s = substep(1, [&] { return system.drift(s, h); });
    s = substep(2, [&] { return system.kick(s, half); });
    s.t = state.t + h;
    return s;
}

PhaseState pv_step(const HamiltonianSystem& system, const PhaseState& state, double h) {
    const double half = 0.5 * h;
    PhaseState s = substep(0, [&] { return system.drift(state, half); });
    s = substep(1, [&] { return system.kick(s, h); });
    s = substep(2, [&] { return system.drift(s, half); });
    s.t = state.t + h;
    return s;
}

PhaseState rk4_step(const HamiltonianSystem& system, const PhaseState& state, double h) {
    const std::size_t d = state.dimension();
    struct Rate {
        std::vector<double> dq, dp;
    };
    auto rate = [&](std::size_t index, const PhaseState& s) {
        Rate r;
        try {
            r.dq = system.dH_dp(s);
            r.dp = system.dH_dq(s);
        } catch (const std::exception& e) {
            throw IntegrationFailure(e.what(), index);
        }
        for (std::size_t i = 0; i < d; ++i) {
            r.dp[i] = -r.dp[i];
            if (!std::isfinite(r.dq[i]) || !std::isfinite(r.dp[i]))
                throw IntegrationFailure("non-finite derivative", index);
        }
        return r;
    };
    auto offset = [&](const Rate& r, double tau, double t) {
        PhaseState s = state;
        for (std::size_t i = 0; i < d; ++i) {
            s.q[i] += tau * r.dq[i];
            s.p[i] += tau * r.dp[i];
        }
        s.t = t;
        return s;
    };

    const double half = 0.5 * h;
    const Rate k1 = rate(0, state);
    const Rate k2 = rate(1, offset(k1, half, state.t + half));
    const Rate k3 = rate(2, offset(k2, half, state.t + half));
    const Rate k4 = rate(3, offset(k3, h, state.t + h));

    PhaseState out = state;
    const double sixth = h / 6.0;
    for (std::size_t i = 0; i < d; ++i) {
        out.q[i] += sixth * (k1.dq[i] + 2.0 * k2.dq[i] + 2.0 * k3.dq[i] + k4.dq[i]);
        out.p[i] += sixth * (k1.dp[i] + 2.0 * k2.dp[i] + 2.0 * k3.dp[i] + k4.dp[i]);
    }
    out.t = state.t + h;
    if (!out.is_finite()) throw IntegrationFailure("non-finite state", 3);
    return out;
}

PhaseState kernel_step(Kernel kernel, const HamiltonianSystem& system, const PhaseState& state, double h) {
    return kernel == Kernel::vv ? vv_step(system, state, h) : pv_step(system, state, h);
}

PhaseState t2_substeps(const HamiltonianSystem& system, const PhaseState& state, double h,
                       std::size_t k, Kernel kernel) {
    if (k < 1) throw ContractViolation("t2_substeps: k must be at least 1");
    const double sub = h / static_cast<double>(k);
    PhaseState s = state;
    for (std::size_t j = 0; j < k; ++j) {
        try {
            s = kernel_step(kernel, system, s, sub);
        } catch (const IntegrationFailure& f) {
            throw IntegrationFailure(f.reason(), 3 * j + f.substep());
        }
    }
    s.t = state.t + h;
    return s;
}

PhaseState td_strang_step(const TimeDependentSystem& system, const PhaseState& state, double t, double h) {
    const double half = 0.5 * h;
    PhaseState s = substep(0, [&] { return system.kick_at(state, half, t + 0.25 * h); });
    s = substep(1, [&] { return system.drift_at(s, h, t + half); });
    s = substep(2, [&] { return system.kick_at(s, half, t + 0.75 * h); });
    s.t = t + h;
    return s;
}

}  // namespace levsim
