#include "levsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "levsim/errors.hpp"
#include "levsim/mpe.hpp"
#include "levsim/testbeds.hpp"

namespace levsim {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::string s = "invalid configuration:";
    for (const auto& i : issues) s += "\n  " + i;
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// The INI reader only knows whole-line comments.
std::string strip_comments(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool comment = false;
    for (char ch : text) {
        if (ch == '\n') comment = false;
        else if (ch == '#' || ch == ';') comment = true;
        if (!comment) out.push_back(ch);
    }
    return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"system", {"kind", "a", "c", "M", "sin_guard"}},
        {"initial", {"q", "p"}},
        {"integrator", {"scheme", "mpe_n", "kernel", "h", "steps", "extended"}},
        {"output", {"stride", "trajectory", "report", "reference", "error_norm"}},
        {"sweep", {"spins", "spin_min", "spin_max", "points", "horizon", "radius", "threads", "p5_mode"}},
        {"convergence", {"horizon", "samples"}},
    };
    return keys;
}

// Typed access to one section; parse problems are appended to `issues`.
class Section {
public:
    Section(std::string name, const boost::property_tree::ptree* tree, std::vector<std::string>& issues)
        : name_(std::move(name)), tree_(tree), issues_(issues) {}

    std::optional<std::string> text(const std::string& key) const {
        if (!tree_) return std::nullopt;
        if (auto v = tree_->get_optional<std::string>(key)) return trim(*v);
        return std::nullopt;
    }

    void number(const std::string& key, double& out) const {
        if (auto v = text(key)) {
            if (auto d = to_double(*v))
                out = *d;
            else
                fail(key, "expected a number, got '" + *v + "'");
        }
    }

    template <typename Int>
    void integer(const std::string& key, Int& out) const {
        if (auto v = text(key)) {
            long long n = 0;
            const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), n);
            if (ec != std::errc() || ptr != v->data() + v->size()) {
                fail(key, "expected an integer, got '" + *v + "'");
            } else if (n < 0) {
                fail(key, "must be >= 0, got " + *v);
                out = 0;
            } else {
                out = static_cast<Int>(n);
            }
        }
    }

    void boolean(const std::string& key, bool& out) const {
        if (auto v = text(key)) {
            if (*v == "true" || *v == "1" || *v == "yes")
                out = true;
            else if (*v == "false" || *v == "0" || *v == "no")
                out = false;
            else
                fail(key, "expected true or false, got '" + *v + "'");
        }
    }

    std::optional<std::vector<double>> numbers(const std::string& key) const {
        auto v = text(key);
        if (!v) return std::nullopt;
        std::vector<double> out;
        for (const auto& item : split_list(*v)) {
            if (auto d = to_double(item)) {
                out.push_back(*d);
            } else {
                fail(key, "expected a list of numbers, got '" + item + "'");
                return std::nullopt;
            }
        }
        return out;
    }

    void fail(const std::string& key, const std::string& message) const {
        issues_.push_back(name_ + "." + key + ": " + message);
    }

private:
    std::string name_;
    const boost::property_tree::ptree* tree_;
    std::vector<std::string>& issues_;
};

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::unique_ptr<HamiltonianSystem> RunConfig::make_system() const {
    switch (kind) {
        case SystemKind::levitron: return std::make_unique<LevitronSystem>(params);
        case SystemKind::harmonic: return std::make_unique<HarmonicOscillator>();
        case SystemKind::driven: return std::make_unique<DrivenOscillator>();
    }
    throw ContractViolation("unknown system kind");
}

IntegratorSpec parse_scheme_label(std::string_view label, IntegratorSpec base) {
    const std::string s = trim(label);
    if (s == "vv") {
        base.scheme = Scheme::vv;
    } else if (s == "pv") {
        base.scheme = Scheme::pv;
    } else if (s == "rk4") {
        base.scheme = Scheme::rk4;
    } else if (s == "td_strang" || s == "td") {
        base.scheme = Scheme::td_strang;
    } else if (s == "mpe") {
        base.scheme = Scheme::mpe;
    } else if (s.starts_with("mpe")) {
        int order = 0;
        const char* first = s.data() + 3;
        const char* last = s.data() + s.size();
        const auto [ptr, ec] = std::from_chars(first, last, order);
        if (ec != std::errc() || ptr != last || order < 2 || order % 2 != 0) {
            throw ContractViolation("unknown scheme '" + s + "' (mpe orders are even: mpe4, mpe6, ...)");
        }
        base.scheme = Scheme::mpe;
        base.mpe_n = order / 2;
    } else {
        throw ContractViolation("unknown scheme '" + s + "'");
    }
    return base;
}

RunConfig parse_config(std::string_view text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in{strip_comments(text)};
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError({"parse error at line " + std::to_string(e.line()) + ": " + e.message()});
    }

    std::vector<std::string> issues;
    for (const auto& [name, section] : tree) {
        const auto it = known_keys().find(name);
        if (it == known_keys().end()) {
            issues.push_back(name + ": unknown " + std::string(section.empty() ? "top-level key" : "section"));
            continue;
        }
        for (const auto& [key, value] : section) {
            if (!it->second.contains(key)) issues.push_back(name + "." + key + ": unknown key");
        }
    }
    auto section = [&](const std::string& name) {
        return Section(name, tree.get_child_optional(name).get_ptr(), issues);
    };

    RunConfig cfg;

    // [system]
    const Section sys = section("system");
    if (auto kind = sys.text("kind")) {
        if (*kind == "levitron")
            cfg.kind = SystemKind::levitron;
        else if (*kind == "harmonic")
            cfg.kind = SystemKind::harmonic;
        else if (*kind == "driven")
            cfg.kind = SystemKind::driven;
        else
            sys.fail("kind", "expected levitron, harmonic or driven, got '" + *kind + "'");
    }
    sys.number("a", cfg.params.a);
    sys.number("c", cfg.params.c);
    sys.number("M", cfg.params.M);
    sys.number("sin_guard", cfg.params.sin_guard);
    if (!(cfg.params.a > 0.0) || !std::isfinite(cfg.params.a)) sys.fail("a", "must be positive");
    if (!(cfg.params.c > 0.0) || !std::isfinite(cfg.params.c)) sys.fail("c", "must be positive");
    if (!std::isfinite(cfg.params.M)) sys.fail("M", "must be finite");
    if (!(cfg.params.sin_guard > 0.0) || !std::isfinite(cfg.params.sin_guard))
        sys.fail("sin_guard", "must be positive");

    // [integrator]
    const Section integ = section("integrator");
    bool extended = false;
    integ.boolean("extended", extended);
    integ.integer("mpe_n", cfg.integrator.mpe_n);
    if (auto scheme = integ.text("scheme")) {
        try {
            cfg.integrator = parse_scheme_label(*scheme, cfg.integrator);
        } catch (const ContractViolation& e) {
            integ.fail("scheme", e.what());
        }
    }
    if (auto kernel = integ.text("kernel")) {
        if (*kernel == "vv")
            cfg.integrator.kernel = Kernel::vv;
        else if (*kernel == "pv")
            cfg.integrator.kernel = Kernel::pv;
        else
            integ.fail("kernel", "expected vv or pv, got '" + *kernel + "'");
    }
    integ.number("h", cfg.integrator.h);
    integ.integer("steps", cfg.integrator.steps);
    if (!(cfg.integrator.h > 0.0) || !std::isfinite(cfg.integrator.h)) integ.fail("h", "must be positive");
    if (cfg.integrator.steps < 1) integ.fail("steps", "must be at least 1");
    const int max_n = extended ? kMaxMpeTerms : 5;
    if (cfg.integrator.scheme == Scheme::mpe && (cfg.integrator.mpe_n < 1 || cfg.integrator.mpe_n > max_n)) {
        integ.fail("mpe_n", "must lie in [1, " + std::to_string(max_n) + "]" +
                                (extended ? "" : " (set extended = true for up to 12)"));
    }

    // [initial]
    const std::size_t dim = cfg.kind == SystemKind::levitron ? 6 : 1;
    PhaseState fallback = PhaseState({1.0}, {0.0}, 0.0);
    if (cfg.kind == SystemKind::levitron) {
        try {
            fallback = default_initial_state(cfg.params);
        } catch (const std::exception& e) {
            // Without a stable height the user has to give q and p explicitly.
            fallback = PhaseState(std::vector<double>(6, 0.0), std::vector<double>(6, 0.0), 0.0);
            fallback.q[3] = kDefaultTilt;
            if (!section("initial").text("q")) {
                issues.push_back(std::string("initial.q: no default available: ") + e.what());
            }
        }
    }
    const Section init = section("initial");
    cfg.initial = fallback;
    for (const char* key : {"q", "p"}) {
        if (auto v = init.numbers(key)) {
            if (v->size() != dim) {
                init.fail(key, "expected " + std::to_string(dim) + " values, got " + std::to_string(v->size()));
            } else if (!all_finite(*v)) {
                init.fail(key, "values must be finite");
            } else {
                (key[0] == 'q' ? cfg.initial.q : cfg.initial.p) = *v;
            }
        }
    }
    if (cfg.kind == SystemKind::levitron && cfg.initial.q.size() == 6) {
        const double s = std::abs(std::sin(cfg.initial.q[3]));
        if (!(s >= cfg.params.sin_guard)) {
            std::ostringstream os;
            os << "q4 violates the singularity guard (|sin q4| = " << s << " < system.sin_guard = "
               << cfg.params.sin_guard << ")";
            init.fail("q", os.str());
        }
    }

    // [output]
    const Section out = section("output");
    out.integer("stride", cfg.output.stride);
    if (cfg.output.stride < 1) out.fail("stride", "must be at least 1");
    if (auto v = out.text("trajectory")) cfg.output.trajectory_path = *v;
    if (auto v = out.text("report")) cfg.output.report_path = *v;
    if (auto v = out.text("reference")) {
        if (*v == "rk4")
            cfg.output.reference = true;
        else if (*v == "none")
            cfg.output.reference = false;
        else
            out.fail("reference", "expected rk4 or none, got '" + *v + "'");
    }
    if (auto v = out.text("error_norm")) {
        if (*v == "full")
            cfg.output.norm = ErrorNorm::full;
        else if (*v == "position")
            cfg.output.norm = ErrorNorm::position;
        else
            out.fail("error_norm", "expected full or position, got '" + *v + "'");
    }

    // [sweep]
    const Section sw = section("sweep");
    if (auto v = sw.numbers("spins")) cfg.sweep.spins = *v;
    const bool has_range = sw.text("spin_min") || sw.text("spin_max") || sw.text("points");
    if (has_range) {
        double lo = 0.0, hi = 0.0;
        std::size_t points = 0;
        sw.number("spin_min", lo);
        sw.number("spin_max", hi);
        sw.integer("points", points);
        if (!sw.text("spin_min") || !sw.text("spin_max") || !sw.text("points")) {
            sw.fail("points", "spin_min, spin_max and points must be given together");
        } else if (hi < lo) {
            sw.fail("spin_max", "must not be below spin_min");
        } else {
            for (std::size_t i = 0; i < points; ++i) {
                const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
                cfg.sweep.spins.push_back(lo + f * (hi - lo));
            }
        }
    }
    sw.number("horizon", cfg.sweep.horizon);
    sw.number("radius", cfg.sweep.radius);
    sw.integer("threads", cfg.sweep.threads);
    if (auto v = sw.text("p5_mode")) {
        if (*v == "steady")
            cfg.sweep.p5_mode = P5Mode::steady;
        else if (*v == "fixed")
            cfg.sweep.p5_mode = P5Mode::fixed;
        else
            sw.fail("p5_mode", "expected steady or fixed, got '" + *v + "'");
    }
    if (!(cfg.sweep.horizon > 0.0) || !std::isfinite(cfg.sweep.horizon)) sw.fail("horizon", "must be positive");
    if (!(cfg.sweep.radius > 0.0) || !std::isfinite(cfg.sweep.radius)) sw.fail("radius", "must be positive");
    if (cfg.sweep.threads < 1) sw.fail("threads", "must be at least 1");
    if (!all_finite(cfg.sweep.spins)) sw.fail("spins", "values must be finite");

    // [convergence]
    const Section conv = section("convergence");
    conv.number("horizon", cfg.convergence.horizon);
    conv.integer("samples", cfg.convergence.samples);
    if (conv.text("horizon") && (!(cfg.convergence.horizon > 0.0) || !std::isfinite(cfg.convergence.horizon)))
        conv.fail("horizon", "must be positive");
    if (cfg.convergence.samples < 1) conv.fail("samples", "must be at least 1");

    if (!issues.empty()) throw ConfigError(std::move(issues));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read configuration file '" + path + "'"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace levsim
