#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "levsim/hamiltonian.hpp"
#include "levsim/trajectory.hpp"

namespace levsim {

enum class ErrorNorm {
    full,      ///< Euclidean norm of the whole (q, p) difference
    position,  ///< Euclidean norm of the first min(3, d) coordinates
};

struct ErrorStats {
    double mean = 0.0;
    double max = 0.0;
};

struct ErrorReport {
    double mean_error = 0.0;
    double max_error = 0.0;
    bool has_reference = false;
    double energy_drift_max = 0.0;
    double p6_drift_max = 0.0;
    std::optional<double> estimated_order;
};

/// |H(t_i) - H(t_0)| for every sample.
std::vector<double> energy_drift(const Trajectory& traj, const HamiltonianSystem& system);

/// Mean and maximum over samples of the state-difference norm. Sample times
/// must agree to 1e-9 relative.
ErrorStats trajectory_error(const Trajectory& traj, const Trajectory& ref,
                            ErrorNorm norm = ErrorNorm::full);

/// max |p_i(t_k) - p_i(t_0)| for a momentum component.
double momentum_drift(const Trajectory& traj, std::size_t component);
/// Drift of the spin momentum p6, a first integral of the Levitron.
double p6_drift(const Trajectory& traj);

struct StepError {
    double h;
    double error;
};

/// Least-squares slope of log(error) against log(h). Requires at least two
/// entries with strictly decreasing h and positive errors.
double convergence_order(std::span<const StepError> errors);

/// Energy and momentum diagnostics of a single run; the error fields are
/// filled when a reference is given.
ErrorReport make_report(const Trajectory& traj, const HamiltonianSystem& system,
                        const Trajectory* reference = nullptr, ErrorNorm norm = ErrorNorm::full);

}  // namespace levsim
