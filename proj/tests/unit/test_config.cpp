#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "levsim/config.hpp"
#include "levsim/errors.hpp"
#include "levsim/levitron.hpp"

using namespace levsim;

namespace {

std::vector<std::string> issues_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.issues();
    }
    return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
    return std::any_of(issues.begin(), issues.end(),
                       [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("empty configuration gives the defaults") {
    const RunConfig cfg = parse_config("");
    CHECK(cfg.kind == SystemKind::levitron);
    CHECK(cfg.params.a == 1.0);
    CHECK(cfg.params.c == 2.0);
    CHECK(cfg.params.M == doctest::Approx(1.0 / axis_profile(1.5, 2)).epsilon(1e-14));
    CHECK(cfg.integrator.scheme == Scheme::vv);
    CHECK(cfg.integrator.h == 1e-3);
    CHECK(cfg.integrator.steps == 1000);
    CHECK(cfg.output.stride == 100);
    CHECK(cfg.output.reference);
    CHECK(cfg.initial == default_initial_state(cfg.params));
    CHECK(cfg.make_system()->dimension() == 6);
}

TEST_CASE("full configuration round trip") {
    const RunConfig cfg = parse_config(R"(
# comment
[system]
kind = levitron
a = 0.5
c = 3
M = 8.3
sin_guard = 1e-6

[initial]
q = 0, 0, 1.8, 0.1, 0, 0
p = 0 0 0 0 1.5 20   ; trailing comment

[integrator]
scheme = mpe6
kernel = pv
h = 0.002
steps = 50

[output]
stride = 5
reference = none
error_norm = position

[sweep]
spin_min = 10
spin_max = 20
points = 3
threads = 2
p5_mode = fixed
)");
    CHECK(cfg.params.a == 0.5);
    CHECK(cfg.params.c == 3.0);
    CHECK(cfg.params.M == 8.3);
    CHECK(cfg.params.sin_guard == 1e-6);
    CHECK(cfg.initial.q == std::vector<double>{0, 0, 1.8, 0.1, 0, 0});
    CHECK(cfg.initial.p == std::vector<double>{0, 0, 0, 0, 1.5, 20});
    CHECK(cfg.integrator.scheme == Scheme::mpe);
    CHECK(cfg.integrator.mpe_n == 3);
    CHECK(cfg.integrator.kernel == Kernel::pv);
    CHECK(cfg.integrator.h == 0.002);
    CHECK(cfg.integrator.steps == 50);
    CHECK(cfg.output.stride == 5);
    CHECK_FALSE(cfg.output.reference);
    CHECK(cfg.output.norm == ErrorNorm::position);
    CHECK(cfg.sweep.spins == std::vector<double>{10, 15, 20});
    CHECK(cfg.sweep.threads == 2);
    CHECK(cfg.sweep.p5_mode == P5Mode::fixed);
}

TEST_CASE("testbed systems") {
    const RunConfig ho = parse_config("[system]\nkind = harmonic\n");
    CHECK(ho.initial.q == std::vector<double>{1.0});
    CHECK(ho.initial.p == std::vector<double>{0.0});
    CHECK(ho.make_system()->dimension() == 1);
    CHECK(parse_config("[system]\nkind = driven\n").make_system()->time_dependent());
    CHECK(mentions(issues_of("[system]\nkind = harmonic\n[initial]\nq = 1 2\n"), "initial.q: expected 1 values"));
}

TEST_CASE("zero step size is rejected by name") {
    const auto issues = issues_of("[integrator]\nh = 0\n");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].starts_with("integrator.h"));
    try {
        parse_config("[integrator]\nh = 0\n");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("integrator.h") != std::string::npos);
    }
}

TEST_CASE("initial tilt on the singular axis is rejected") {
    const auto issues = issues_of("[initial]\nq = 0 0 2 0 0 0\n");
    REQUIRE(issues.size() == 1);
    CHECK(mentions(issues, "initial.q"));
    CHECK(mentions(issues, "singularity guard"));
    CHECK(mentions(issues, "sin_guard"));
    // Exactly pi is singular too.
    CHECK(mentions(issues_of("[initial]\nq = 0 0 2 3.141592653589793 0 0\n"), "singularity guard"));
}

TEST_CASE("every problem is reported at once") {
    const auto issues = issues_of(R"(
[system]
a = -1
c = zero
[integrator]
h = -0.1
steps = 0
scheme = mpe
mpe_n = 7
[output]
stride = 0
reference = euler
[colours]
red = 1
[sweep]
wobble = 3
)");
    CHECK(mentions(issues, "system.a: must be positive"));
    CHECK(mentions(issues, "system.c: expected a number"));
    CHECK(mentions(issues, "integrator.h: must be positive"));
    CHECK(mentions(issues, "integrator.steps"));
    CHECK(mentions(issues, "integrator.mpe_n"));
    CHECK(mentions(issues, "output.stride"));
    CHECK(mentions(issues, "output.reference"));
    CHECK(mentions(issues, "colours: unknown section"));
    CHECK(mentions(issues, "sweep.wobble: unknown key"));
    CHECK(issues.size() == 9);
}

TEST_CASE("mpe_n range depends on the extended flag") {
    CHECK(mentions(issues_of("[integrator]\nscheme = mpe12\n"), "integrator.mpe_n"));
    CHECK(parse_config("[integrator]\nscheme = mpe12\nextended = true\n").integrator.mpe_n == 6);
    CHECK(parse_config("[integrator]\nscheme = mpe\nmpe_n = 12\nextended = yes\n").integrator.mpe_n == 12);
    CHECK(mentions(issues_of("[integrator]\nscheme = mpe\nmpe_n = 13\nextended = true\n"), "[1, 12]"));
}

TEST_CASE("sweep range keys go together") {
    CHECK(mentions(issues_of("[sweep]\nspin_min = 1\n"), "must be given together"));
    CHECK(mentions(issues_of("[sweep]\nspin_min = 5\nspin_max = 1\npoints = 2\n"), "sweep.spin_max"));
    CHECK(parse_config("[sweep]\nspins = 3 1 2\n").sweep.spins == std::vector<double>{3, 1, 2});
}

TEST_CASE("malformed text reports a line") {
    const auto issues = issues_of("[system]\na = 1\n[broken\n");
    REQUIRE(issues.size() == 1);
    CHECK(mentions(issues, "parse error at line 3"));
}

TEST_CASE("no default initial state without a stable height") {
    const auto issues = issues_of("[system]\nM = 1\n");
    CHECK(mentions(issues, "initial.q: no default available"));
    // Explicit initial data makes the same system usable.
    const RunConfig cfg = parse_config("[system]\nM = 1\n[initial]\nq = 0 0 1 0.3 0 0\n");
    CHECK(cfg.initial.q[3] == 0.3);
}

TEST_CASE("scheme labels") {
    CHECK(parse_scheme_label("vv").scheme == Scheme::vv);
    CHECK(parse_scheme_label("pv").scheme == Scheme::pv);
    CHECK(parse_scheme_label("rk4").scheme == Scheme::rk4);
    CHECK(parse_scheme_label("td").scheme == Scheme::td_strang);
    CHECK(parse_scheme_label("td_strang").scheme == Scheme::td_strang);
    const IntegratorSpec m8 = parse_scheme_label("mpe8");
    CHECK(m8.scheme == Scheme::mpe);
    CHECK(m8.mpe_n == 4);
    IntegratorSpec base;
    base.mpe_n = 3;
    base.h = 0.5;
    const IntegratorSpec bare = parse_scheme_label("mpe", base);
    CHECK(bare.mpe_n == 3);
    CHECK(bare.h == 0.5);
    CHECK_THROWS_AS(parse_scheme_label("mpe5"), ContractViolation);
    CHECK_THROWS_AS(parse_scheme_label("mpe0"), ContractViolation);
    CHECK_THROWS_AS(parse_scheme_label("leapfrog"), ContractViolation);
}

TEST_CASE("load_config on a missing file") {
    CHECK_THROWS_AS(load_config("/nonexistent/levsim.ini"), ConfigError);
}
