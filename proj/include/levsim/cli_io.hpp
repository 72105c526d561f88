#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "levsim/config.hpp"
#include "levsim/diagnostics.hpp"
#include "levsim/trajectory.hpp"

namespace levsim {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIntegration = 3;

struct SimulationResult {
    Trajectory trajectory;
    ErrorReport report;
    double reference_h = 0.0;  ///< 0 when no reference was run
};

/// Integrates the configured system. With output.reference set, an RK4 run
/// at h/100 sampled at the same times fills the error fields.
SimulationResult run_simulate(const RunConfig& config);

struct ConvergenceRow {
    std::string scheme;
    double h;
    double mean_error;
    double max_error;
};

struct ConvergenceTable {
    double horizon = 0.0;
    double reference_h = 0.0;
    std::vector<ConvergenceRow> rows;
    /// (scheme, fitted order over mean errors) in input scheme order.
    std::vector<std::pair<std::string, std::optional<double>>> orders;
};

/// Runs every scheme at every step size against one RK4 reference at
/// min(h) / 100, comparing at `convergence.samples` evenly spaced times.
ConvergenceTable run_convergence(const RunConfig& config, const std::vector<std::string>& schemes,
                                 const std::vector<double>& h_list);

struct SpinRecord {
    double spin;
    bool escaped;
    bool singular;
    double escape_time;  ///< horizon when not escaped
};

struct SweepReport {
    double horizon = 0.0;
    double radius = 0.0;
    std::vector<SpinRecord> records;  ///< ascending spin
    std::optional<std::pair<double, double>> stable_interval;
};

SweepReport run_sweep(const RunConfig& config);

/// One row "k c" per tableau entry, exact fraction or 17-digit decimal.
void print_coeffs(int n, bool rational, std::ostream& out);

/// Header t,q1..qd,p1..pd,energy; values with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const HamiltonianSystem& system);
void write_report_json(std::ostream& out, const SimulationResult& result);
void write_convergence_text(std::ostream& out, const ConvergenceTable& table);
void write_convergence_json(std::ostream& out, const ConvergenceTable& table);
void write_sweep_json(std::ostream& out, const SweepReport& report);

/// The command-line program; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace levsim
