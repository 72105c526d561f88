#include "levsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "levsim/errors.hpp"

namespace levsim {

std::vector<double> energy_drift(const Trajectory& traj, const HamiltonianSystem& system) {
    std::vector<double> drift;
    if (traj.empty()) return drift;
    drift.reserve(traj.size());
    const double e0 = system.energy(traj.states.front());
    for (const auto& s : traj.states) drift.push_back(std::abs(system.energy(s) - e0));
    return drift;
}

ErrorStats trajectory_error(const Trajectory& traj, const Trajectory& ref, ErrorNorm norm) {
    if (traj.size() != ref.size() || traj.empty()) {
        throw ContractViolation("trajectory_error: trajectories must have the same nonzero number of samples");
    }
    ErrorStats stats;
    double sum = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double ta = traj.times[i], tb = ref.times[i];
        if (std::abs(ta - tb) > 1e-9 * std::max(1.0, std::abs(tb))) {
            throw ContractViolation("trajectory_error: sample times differ at sample " + std::to_string(i));
        }
        const PhaseState& a = traj.states[i];
        const PhaseState& b = ref.states[i];
        if (a.dimension() != b.dimension()) {
            throw ContractViolation("trajectory_error: dimension mismatch at sample " + std::to_string(i));
        }
        double acc = 0.0;
        const std::size_t nq = norm == ErrorNorm::full ? a.dimension() : std::min<std::size_t>(3, a.dimension());
        for (std::size_t j = 0; j < nq; ++j) acc += (a.q[j] - b.q[j]) * (a.q[j] - b.q[j]);
        if (norm == ErrorNorm::full) {
            for (std::size_t j = 0; j < a.dimension(); ++j) acc += (a.p[j] - b.p[j]) * (a.p[j] - b.p[j]);
        }
        const double e = std::sqrt(acc);
        sum += e;
        stats.max = std::max(stats.max, e);
    }
    stats.mean = std::min(sum / static_cast<double>(traj.size()), stats.max);
    return stats;
}

double momentum_drift(const Trajectory& traj, std::size_t component) {
    if (traj.empty()) return 0.0;
    const auto& first = traj.states.front();
    if (component >= first.dimension()) {
        throw ContractViolation("momentum_drift: component out of range");
    }
    const double p0 = first.p[component];
    double worst = 0.0;
    for (const auto& s : traj.states) worst = std::max(worst, std::abs(s.p[component] - p0));
    return worst;
}

double p6_drift(const Trajectory& traj) { return momentum_drift(traj, 5); }

double convergence_order(std::span<const StepError> errors) {
    if (errors.size() < 2) throw ContractViolation("convergence_order: need at least two (h, error) pairs");
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i].error > 0.0) || !std::isfinite(errors[i].error))
            throw ContractViolation("convergence_order: errors must be positive and finite");
        if (!(errors[i].h > 0.0)) throw ContractViolation("convergence_order: step sizes must be positive");
        if (i > 0 && !(errors[i].h < errors[i - 1].h))
            throw ContractViolation("convergence_order: step sizes must be strictly decreasing");
    }
    const double n = static_cast<double>(errors.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& e : errors) {
        sx += std::log(e.h);
        sy += std::log(e.error);
    }
    const double mx = sx / n, my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& e : errors) {
        const double dx = std::log(e.h) - mx;
        sxy += dx * (std::log(e.error) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

ErrorReport make_report(const Trajectory& traj, const HamiltonianSystem& system,
                        const Trajectory* reference, ErrorNorm norm) {
    ErrorReport r;
    const auto drift = energy_drift(traj, system);
    if (!drift.empty()) r.energy_drift_max = *std::max_element(drift.begin(), drift.end());
    if (!traj.empty() && traj.states.front().dimension() >= 6) r.p6_drift_max = p6_drift(traj);
    if (reference) {
        const ErrorStats e = trajectory_error(traj, *reference, norm);
        r.mean_error = e.mean;
        r.max_error = e.max;
        r.has_reference = true;
    }
    return r;
}

}  // namespace levsim
