#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "levsim/diagnostics.hpp"
#include "levsim/errors.hpp"
#include "levsim/levitron.hpp"
#include "levsim/propagate.hpp"
#include "levsim/testbeds.hpp"

using namespace levsim;

namespace {

Trajectory exact_oscillator(std::size_t samples, double dt) {
    Trajectory traj;
    const PhaseState start({1.0}, {0.0});
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) * dt;
        traj.times.push_back(t);
        traj.states.push_back(HarmonicOscillator::exact(start, t));
    }
    return traj;
}

IntegratorSpec spec_of(Scheme scheme, double h, std::size_t steps, int n = 1) {
    IntegratorSpec s;
    s.scheme = scheme;
    s.h = h;
    s.steps = steps;
    s.mpe_n = n;
    return s;
}

}  // namespace

TEST_CASE("energy_drift of the exact flow vanishes") {
    HarmonicOscillator ho;
    const auto drift = energy_drift(exact_oscillator(500, 0.37), ho);
    CHECK(*std::max_element(drift.begin(), drift.end()) <= 1e-14);
}

TEST_CASE("energy_drift: bounded for VV, growing for RK4") {
    HarmonicOscillator ho;
    const PhaseState start({1.0}, {0.0});
    const Trajectory vv = integrate(ho, spec_of(Scheme::vv, 0.1, 100000), start, 100);
    const auto vd = energy_drift(vv, ho);
    CHECK(*std::max_element(vd.begin(), vd.end()) <= 0.01);

    const Trajectory rk = integrate(ho, spec_of(Scheme::rk4, 0.1, 100000), start, 100);
    const auto rd = energy_drift(rk, ho);
    CHECK(rd.back() > rd[rd.size() / 10]);
    // RK4 dissipates monotonically on the oscillator.
    CHECK(std::is_sorted(rd.begin(), rd.end()));
}

TEST_CASE("trajectory_error arithmetic") {
    const Trajectory a = exact_oscillator(10, 0.1);
    const ErrorStats zero = trajectory_error(a, a);
    CHECK(zero.mean == 0.0);
    CHECK(zero.max == 0.0);

    Trajectory x, y;
    x.times = y.times = {0.0};
    x.states = {PhaseState({3.0, 0.0, 0.0, 0.0, 0.0, 0.0}, std::vector<double>(6, 0.0))};
    y.states = {PhaseState({0.0, 4.0, 0.0, 0.0, 0.0, 0.0}, std::vector<double>(6, 0.0))};
    const ErrorStats five = trajectory_error(x, y);
    CHECK(five.mean == doctest::Approx(5.0));
    CHECK(five.max == doctest::Approx(5.0));

    // Momentum differences only count in the full norm.
    y.states[0] = x.states[0];
    y.states[0].p[3] = 2.0;
    CHECK(trajectory_error(x, y, ErrorNorm::full).max == doctest::Approx(2.0));
    CHECK(trajectory_error(x, y, ErrorNorm::position).max == 0.0);

    Trajectory shifted = a;
    shifted.times[3] += 1e-3;
    CHECK_THROWS_AS(trajectory_error(a, shifted), ContractViolation);
    Trajectory shorter = a;
    shorter.times.pop_back();
    shorter.states.pop_back();
    CHECK_THROWS_AS(trajectory_error(a, shorter), ContractViolation);
}

TEST_CASE("p6 drift") {
    const LevitronSystem lev(LevitronParams::defaults());
    const PhaseState start = default_initial_state(lev.params());

    SUBCASE("splitting trajectories never touch p6") {
        for (auto spec : {spec_of(Scheme::vv, 1e-3, 2000), spec_of(Scheme::pv, 1e-3, 2000),
                          spec_of(Scheme::mpe, 2e-3, 1000, 3), spec_of(Scheme::td_strang, 1e-3, 2000)}) {
            CHECK(p6_drift(integrate(lev, spec, start, 10)) == 0.0);
        }
    }
    SUBCASE("RK4 keeps p6 to roundoff") {
        CHECK(p6_drift(integrate(lev, spec_of(Scheme::rk4, 1e-3, 10000), start, 10)) <= 1e-12);
    }
    SUBCASE("injected perturbation is reported") {
        Trajectory t = integrate(lev, spec_of(Scheme::vv, 1e-3, 100), start, 10);
        t.states[4].p[5] += 0.125;
        CHECK(p6_drift(t) == 0.125);
    }
}

TEST_CASE("convergence_order") {
    const std::vector<StepError> quad{{0.1, 1e-4}, {0.05, 2.5e-5}};
    CHECK(convergence_order(quad) == doctest::Approx(2.0).epsilon(1e-12));
    const std::vector<StepError> flat{{0.1, 3e-3}, {0.05, 3e-3}};
    CHECK(convergence_order(flat) == doctest::Approx(0.0));

    // Uniform scaling of the errors leaves the slope unchanged.
    const std::vector<StepError> noisy{{0.2, 3.1e-3}, {0.1, 8.2e-4}, {0.05, 1.9e-4}, {0.025, 5.3e-5}};
    std::vector<StepError> scaled = noisy;
    for (auto& e : scaled) e.error *= 1234.5;
    CHECK(convergence_order(scaled) == doctest::Approx(convergence_order(noisy)).epsilon(1e-12));

    CHECK_THROWS_AS(convergence_order(std::vector<StepError>{{0.1, 1.0}}), ContractViolation);
    CHECK_THROWS_AS(convergence_order(std::vector<StepError>{{0.1, 1.0}, {0.05, 0.0}}), ContractViolation);
    CHECK_THROWS_AS(convergence_order(std::vector<StepError>{{0.05, 1.0}, {0.1, 0.5}}), ContractViolation);
}

TEST_CASE("measured VV order on the oscillator") {
    HarmonicOscillator ho;
    const PhaseState start({1.0}, {0.0});
    std::vector<StepError> errors;
    for (double h : {0.1, 0.05, 0.025}) {
        const auto steps = static_cast<std::size_t>(std::llround(10.0 / h));
        const Trajectory t = integrate(ho, spec_of(Scheme::vv, h, steps), start, steps);
        const PhaseState exact = HarmonicOscillator::exact(start, 10.0);
        errors.push_back({h, std::hypot(t.states.back().q[0] - exact.q[0], t.states.back().p[0] - exact.p[0])});
    }
    CHECK(convergence_order(errors) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("make_report") {
    const LevitronSystem lev(LevitronParams::defaults());
    const PhaseState start = default_initial_state(lev.params());
    const Trajectory vv = integrate(lev, spec_of(Scheme::vv, 1e-3, 1000), start, 100);
    const Trajectory ref = integrate(lev, spec_of(Scheme::rk4, 1e-5, 100000), start, 10000);
    const ErrorReport r = make_report(vv, lev, &ref);
    CHECK(r.has_reference);
    CHECK(r.mean_error <= r.max_error);
    CHECK(r.mean_error > 0.0);
    CHECK(r.p6_drift_max == 0.0);
    CHECK(r.energy_drift_max >= 0.0);
    CHECK_FALSE(make_report(vv, lev).has_reference);
}

TEST_CASE("integrate samples, timing and failure context") {
    HarmonicOscillator ho;
    const PhaseState start({1.0}, {0.0}, 2.0);
    const Trajectory t = integrate(ho, spec_of(Scheme::vv, 0.1, 25), start, 10);
    CHECK(t.size() == 3);
    CHECK(t.times[2] == 2.0 + 20 * 0.1);

    std::size_t seen = 0;
    integrate(ho, spec_of(Scheme::vv, 0.1, 25), start, 5, [&](const PhaseState&, std::size_t step) {
        ++seen;
        return step < 10;
    });
    CHECK(seen == 3);

    LevitronParams params = LevitronParams::defaults();
    params.sin_guard = 0.01;
    const LevitronSystem strict(params);
    const PhaseState tipping({0, 0, 2.0, 0.05, 0, 0}, {0, 0, 0, -1.0, 0, 0});
    try {
        integrate(strict, spec_of(Scheme::vv, 1e-3, 1000), tipping);
        FAIL("expected IntegrationFailure");
    } catch (const IntegrationFailure& f) {
        REQUIRE(f.step().has_value());
        CHECK(*f.step() > 30);
        CHECK(*f.step() < 60);
        CHECK(f.state_dump().size() == 13);
    }
}
