#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "levsim/diagnostics.hpp"
#include "levsim/hamiltonian.hpp"
#include "levsim/integrators.hpp"
#include "levsim/levitron.hpp"

// Run configuration: INI-style sections of `key = value` lines. Lists are
// whitespace- or comma-separated; `#` and `;` start comments. Every key is
// optional. Recognized keys:
//
//   [system]      kind (levitron | harmonic | driven), a, c, M, sin_guard
//   [initial]     q, p                      (6 values for levitron, 1 otherwise)
//   [integrator]  scheme (vv | pv | rk4 | td_strang | mpe | mpe4 ...), mpe_n,
//                 kernel (vv | pv), h, steps, extended (allow mpe_n up to 12)
//   [output]      stride, trajectory, report, reference (rk4 | none),
//                 error_norm (full | position)
//   [sweep]       spins, spin_min, spin_max, points, horizon, radius,
//                 threads, p5_mode (steady | fixed)
//   [convergence] horizon, samples

namespace levsim {

/// Parse or validation failure; `issues` lists every problem found, each
/// prefixed with its `section.key`.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

enum class SystemKind { levitron, harmonic, driven };
enum class P5Mode { steady, fixed };

struct OutputConfig {
    std::size_t stride = 100;
    std::string trajectory_path;
    std::string report_path;
    bool reference = true;
    ErrorNorm norm = ErrorNorm::full;
};

struct SweepConfig {
    std::vector<double> spins;
    double horizon = 50.0;
    double radius = 0.5;
    std::size_t threads = 1;
    P5Mode p5_mode = P5Mode::steady;
};

struct ConvergenceConfig {
    double horizon = 0.0;  ///< 0 means integrator.h * integrator.steps
    std::size_t samples = 10;
};

struct RunConfig {
    SystemKind kind = SystemKind::levitron;
    LevitronParams params = LevitronParams::defaults();
    PhaseState initial;
    IntegratorSpec integrator;
    OutputConfig output;
    SweepConfig sweep;
    ConvergenceConfig convergence;

    std::unique_ptr<HamiltonianSystem> make_system() const;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Parses "vv", "pv", "rk4", "td_strang" (or "td"), and "mpeK" for even K;
/// bare "mpe" keeps `mpe_n`. Throws ContractViolation.
IntegratorSpec parse_scheme_label(std::string_view label, IntegratorSpec base = {});

}  // namespace levsim
