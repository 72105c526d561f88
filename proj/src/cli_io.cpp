#include "levsim/cli_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "levsim/errors.hpp"
#include "levsim/mpe.hpp"
#include "levsim/propagate.hpp"

namespace levsim {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// n such that n * unit == span within 1e-9 relative, or nullopt.
std::optional<std::size_t> exact_multiple(double span, double unit) {
    const double ratio = span / unit;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(n * unit - span) > 1e-9 * std::max(1.0, std::abs(span))) return std::nullopt;
    return static_cast<std::size_t>(n);
}

Trajectory reference_run(const HamiltonianSystem& system, const PhaseState& initial, double h_ref,
                         std::size_t steps, std::size_t stride) {
    IntegratorSpec ref;
    ref.scheme = Scheme::rk4;
    ref.h = h_ref;
    ref.steps = steps;
    return integrate(system, ref, initial, stride);
}

}  // namespace

SimulationResult run_simulate(const RunConfig& config) {
    const auto system = config.make_system();
    SimulationResult result;
    result.trajectory = integrate(*system, config.integrator, config.initial, config.output.stride);
    if (config.output.reference) {
        result.reference_h = config.integrator.h / 100.0;
        const Trajectory ref = reference_run(*system, config.initial, result.reference_h,
                                             config.integrator.steps * 100, config.output.stride * 100);
        result.report = make_report(result.trajectory, *system, &ref, config.output.norm);
    } else {
        result.report = make_report(result.trajectory, *system, nullptr, config.output.norm);
    }
    return result;
}

ConvergenceTable run_convergence(const RunConfig& config, const std::vector<std::string>& schemes,
                                 const std::vector<double>& h_list) {
    std::vector<std::string> issues;
    if (schemes.empty()) issues.push_back("--schemes: at least one scheme is required");
    if (h_list.empty()) issues.push_back("--h: at least one step size is required");
    std::vector<IntegratorSpec> specs;
    for (const auto& label : schemes) {
        try {
            IntegratorSpec s = parse_scheme_label(label, config.integrator);
            if (s.scheme == Scheme::mpe) s.validate(kMaxMpeTerms);
            specs.push_back(s);
        } catch (const ContractViolation& e) {
            issues.push_back(std::string("--schemes: ") + e.what());
        }
    }
    for (double h : h_list) {
        if (!(h > 0.0) || !std::isfinite(h)) issues.push_back("--h: step sizes must be positive");
    }
    const double horizon = config.convergence.horizon > 0.0
                               ? config.convergence.horizon
                               : config.integrator.h * static_cast<double>(config.integrator.steps);
    const double interval = horizon / static_cast<double>(config.convergence.samples);
    if (issues.empty()) {
        for (double h : h_list) {
            if (!exact_multiple(interval, h)) {
                issues.push_back("--h: " + g17(h) + " does not divide the sample interval " + g17(interval));
            }
        }
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));

    ConvergenceTable table;
    table.horizon = horizon;
    table.reference_h = *std::min_element(h_list.begin(), h_list.end()) / 100.0;

    const auto system = config.make_system();
    const std::size_t ref_stride = *exact_multiple(interval, table.reference_h);
    const Trajectory ref = reference_run(*system, config.initial, table.reference_h,
                                         ref_stride * config.convergence.samples, ref_stride);

    std::vector<double> sorted_h = h_list;
    std::sort(sorted_h.begin(), sorted_h.end(), std::greater<>());
    for (const auto& base : specs) {
        std::vector<StepError> errors;
        for (double h : sorted_h) {
            IntegratorSpec spec = base;
            spec.h = h;
            const std::size_t stride = *exact_multiple(interval, h);
            spec.steps = stride * config.convergence.samples;
            const Trajectory traj = integrate(*system, spec, config.initial, stride);
            const ErrorStats e = trajectory_error(traj, ref, config.output.norm);
            table.rows.push_back({spec.label(), h, e.mean, e.max});
            errors.push_back({h, e.mean});
        }
        std::optional<double> order;
        const bool usable = errors.size() >= 2 &&
                            std::all_of(errors.begin(), errors.end(), [](const StepError& e) { return e.error > 0.0; }) &&
                            std::adjacent_find(errors.begin(), errors.end(), [](const StepError& a, const StepError& b) {
                                return !(b.h < a.h);
                            }) == errors.end();
        if (usable) order = convergence_order(errors);
        table.orders.emplace_back(base.label(), order);
    }
    return table;
}

SweepReport run_sweep(const RunConfig& config) {
    if (config.kind != SystemKind::levitron) {
        throw ConfigError({"system.kind: sweep requires the levitron system"});
    }
    SweepReport report;
    report.horizon = config.sweep.horizon;
    report.radius = config.sweep.radius;

    std::vector<double> spins = config.sweep.spins;
    std::sort(spins.begin(), spins.end());
    report.records.resize(spins.size());
    if (spins.empty()) return report;

    const LevitronSystem system(config.params);
    IntegratorSpec spec = config.integrator;
    spec.steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(config.sweep.horizon / spec.h - 1e-9)));
    const double r = config.sweep.radius;

    auto run_one = [&](std::size_t idx) {
        PhaseState init = config.initial;
        init.p[5] = spins[idx];
        if (config.sweep.p5_mode == P5Mode::steady)
            init.p[4] = steady_precession_momentum(config.params, init.q[2], init.q[3], spins[idx]);
        const double z0 = init.q[2];

        SpinRecord rec{spins[idx], false, false, config.sweep.horizon};
        auto observer = [&](const PhaseState& s, std::size_t) {
            if (std::abs(s.q[0]) > r || std::abs(s.q[1]) > r || std::abs(s.q[2] - z0) > r) {
                rec.escaped = true;
                rec.escape_time = s.t;
                return false;
            }
            return true;
        };
        try {
            integrate(system, spec, init, config.output.stride, observer);
        } catch (const IntegrationFailure& f) {
            rec.escaped = true;
            rec.singular = true;
            rec.escape_time = f.state_dump().empty() ? init.t : f.state_dump().front();
        }
        report.records[idx] = rec;
    };

    const std::size_t workers = std::min(config.sweep.threads, spins.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < spins.size(); i = next++) run_one(i);
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    // Report the stable window only when the non-escaping spins are contiguous.
    std::optional<std::size_t> first, last;
    std::size_t stable = 0;
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        if (report.records[i].escaped) continue;
        if (!first) first = i;
        last = i;
        ++stable;
    }
    if (first && *last - *first + 1 == stable) {
        report.stable_interval = {{report.records[*first].spin, report.records[*last].spin}};
    }
    return report;
}

void print_coeffs(int n, bool rational, std::ostream& out) {
    const MpeTableau tab = mpe_coefficients(n);
    for (const auto& e : tab.entries) {
        out << e.k << ' ' << (rational ? to_fraction_string(e.weight) : g17(e.weight.convert_to<double>())) << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const HamiltonianSystem& system) {
    const std::size_t d = system.dimension();
    out << 't';
    for (std::size_t i = 1; i <= d; ++i) out << ",q" << i;
    for (std::size_t i = 1; i <= d; ++i) out << ",p" << i;
    out << ",energy\n";
    for (const auto& s : traj.states) {
        out << g17(s.t);
        for (double v : s.q) out << ',' << g17(v);
        for (double v : s.p) out << ',' << g17(v);
        out << ',' << g17(system.energy(s)) << '\n';
    }
}

void write_report_json(std::ostream& out, const SimulationResult& result) {
    nlohmann::ordered_json j;
    const auto& spec = result.trajectory.spec;
    const auto& r = result.report;
    j["scheme"] = spec.label();
    j["kernel"] = std::string(to_string(spec.kernel));
    j["h"] = spec.h;
    j["steps"] = spec.steps;
    j["stride"] = result.trajectory.stride;
    j["samples"] = result.trajectory.size();
    j["energy_drift_max"] = r.energy_drift_max;
    j["p6_drift_max"] = r.p6_drift_max;
    if (r.has_reference) {
        j["reference"] = "rk4";
        j["reference_h"] = result.reference_h;
        j["mean_error"] = r.mean_error;
        j["max_error"] = r.max_error;
    } else {
        j["reference"] = "none";
    }
    if (r.estimated_order) j["estimated_order"] = *r.estimated_order;
    out << j.dump(2) << '\n';
}

void write_convergence_text(std::ostream& out, const ConvergenceTable& table) {
    out << "# horizon " << g17(table.horizon) << ", rk4 reference h " << g17(table.reference_h) << '\n';
    out << std::left << std::setw(10) << "scheme" << std::setw(24) << "h" << std::setw(26) << "mean_error"
        << "max_error\n";
    for (const auto& row : table.rows) {
        out << std::left << std::setw(10) << row.scheme << std::setw(24) << g17(row.h) << std::setw(26)
            << g17(row.mean_error) << g17(row.max_error) << '\n';
    }
    for (const auto& [scheme, order] : table.orders) {
        out << "order " << scheme << ' ' << (order ? g17(*order) : std::string("n/a")) << '\n';
    }
}

void write_convergence_json(std::ostream& out, const ConvergenceTable& table) {
    nlohmann::ordered_json j;
    j["horizon"] = table.horizon;
    j["reference_h"] = table.reference_h;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        j["rows"].push_back({{"scheme", row.scheme}, {"h", row.h}, {"mean_error", row.mean_error},
                             {"max_error", row.max_error}});
    }
    j["orders"] = nlohmann::ordered_json::object();
    for (const auto& [scheme, order] : table.orders) {
        j["orders"][scheme] = order ? nlohmann::ordered_json(*order) : nlohmann::ordered_json(nullptr);
    }
    out << j.dump(2) << '\n';
}

void write_sweep_json(std::ostream& out, const SweepReport& report) {
    nlohmann::ordered_json j;
    j["horizon"] = report.horizon;
    j["radius"] = report.radius;
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : report.records) {
        j["records"].push_back({{"p6", r.spin}, {"escaped", r.escaped}, {"singular", r.singular},
                                {"escape_time", r.escape_time}});
    }
    if (report.stable_interval) {
        j["stable_interval"] = {report.stable_interval->first, report.stable_interval->second};
    } else {
        j["stable_interval"] = nullptr;
    }
    out << j.dump(2) << '\n';
}

namespace {

std::vector<double> parse_h_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw ConfigError({"--h: cannot parse '" + item + "'"});
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// Writes to `path`, or to `fallback` when the path is empty.
template <typename F>
void emit(const std::string& path, std::ostream& fallback, F&& write) {
    if (path.empty()) {
        write(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError({"cannot open '" + path + "' for writing"});
    write(file);
}

void dump_failure(std::ostream& err, const IntegrationFailure& f) {
    err << "error: " << f.what() << '\n';
    if (!f.state_dump().empty()) {
        err << "last state (t, q, p):";
        for (double v : f.state_dump()) err << ' ' << g17(v);
        err << '\n';
    }
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Levitron simulation with splitting and multiproduct integrators", "levsim"};
    app.require_subcommand(1);

    std::string config_path, out_path, report_path, schemes_text, h_text;
    double spin_min = 0.0, spin_max = 0.0;
    std::size_t points = 0, threads = 0;
    int coeff_n = 0;
    bool rational = false;

    auto* sim = app.add_subcommand("sim", "integrate one trajectory and write CSV plus a report");
    sim->add_option("--config", config_path, "configuration file")->required();
    sim->add_option("--out", out_path, "trajectory CSV (default: output.trajectory, else stdout)");
    sim->add_option("--report", report_path, "JSON report (default: output.report)");

    auto* conv = app.add_subcommand("convergence", "error table and fitted orders against an RK4 reference");
    conv->set_help_flag("--help", "print this help message and exit");
    conv->add_option("--config", config_path, "configuration file")->required();
    conv->add_option("--schemes", schemes_text, "comma-separated, e.g. vv,rk4,mpe4,mpe6")->required();
    conv->add_option("--h", h_text, "comma-separated step sizes")->required();
    conv->add_option("--report", report_path, "also write the table as JSON");

    auto* sweep = app.add_subcommand("sweep", "scan initial spin momentum for non-escaping trajectories");
    sweep->add_option("--config", config_path, "configuration file")->required();
    auto* o_min = sweep->add_option("--spin-min", spin_min, "smallest p6");
    auto* o_max = sweep->add_option("--spin-max", spin_max, "largest p6");
    auto* o_pts = sweep->add_option("--points", points, "number of spin values");
    o_min->needs(o_max, o_pts);
    o_max->needs(o_min, o_pts);
    o_pts->needs(o_min, o_max);
    sweep->add_option("--threads", threads, "worker threads (overrides sweep.threads)");
    sweep->add_option("--report", report_path, "JSON report (default: output.report, else stdout)");

    auto* coeffs = app.add_subcommand("coeffs", "print multiproduct weights");
    coeffs->add_option("--n", coeff_n, "number of terms (order 2n)")->required();
    coeffs->add_flag("--rational", rational, "exact fractions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 returns 0 for --help; everything else is a usage error.
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*coeffs) {
            if (coeff_n < 1 || coeff_n > kMaxMpeTerms) {
                err << "error: --n must lie in [1, " << kMaxMpeTerms << "]\n";
                return kExitConfig;
            }
            print_coeffs(coeff_n, rational, out);
            return kExitOk;
        }

        RunConfig config = load_config(config_path);

        if (*sim) {
            const SimulationResult result = run_simulate(config);
            const auto system = config.make_system();
            emit(out_path.empty() ? config.output.trajectory_path : out_path, out,
                 [&](std::ostream& o) { write_trajectory_csv(o, result.trajectory, *system); });
            const std::string rp = report_path.empty() ? config.output.report_path : report_path;
            if (!rp.empty()) {
                emit(rp, out, [&](std::ostream& o) { write_report_json(o, result); });
            } else {
                err << "energy_drift_max " << g17(result.report.energy_drift_max) << ", p6_drift_max "
                    << g17(result.report.p6_drift_max);
                if (result.report.has_reference) err << ", mean_error " << g17(result.report.mean_error);
                err << '\n';
            }
            return kExitOk;
        }
        if (*conv) {
            const ConvergenceTable table = run_convergence(config, split_commas(schemes_text), parse_h_list(h_text));
            write_convergence_text(out, table);
            if (!report_path.empty()) emit(report_path, out, [&](std::ostream& o) { write_convergence_json(o, table); });
            return kExitOk;
        }
        if (*sweep) {
            if (o_min->count() > 0) {
                if (spin_max < spin_min) throw ConfigError({"--spin-max: must not be below --spin-min"});
                config.sweep.spins.clear();
                for (std::size_t i = 0; i < points; ++i) {
                    const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
                    config.sweep.spins.push_back(spin_min + f * (spin_max - spin_min));
                }
            }
            if (threads > 0) config.sweep.threads = threads;
            const SweepReport report = run_sweep(config);
            emit(report_path.empty() ? config.output.report_path : report_path, out,
                 [&](std::ostream& o) { write_sweep_json(o, report); });
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IntegrationFailure& f) {
        dump_failure(err, f);
        return kExitIntegration;
    } catch (const ContractViolation& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace levsim
