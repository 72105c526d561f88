#include <doctest.h>

#include <cmath>
#include <limits>

#include "levsim/errors.hpp"
#include "levsim/mpe.hpp"
#include "levsim/testbeds.hpp"
#include "test_support.hpp"

using namespace levsim;

namespace {

// Independent oracle: solve sum_i c_i = 1, sum_i c_i i^(-2m) = 0 (m = 1..n-1)
// by exact Gauss-Jordan elimination.
std::vector<Rational> vandermonde_weights(int n) {
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
    for (int m = 0; m < n; ++m) {
        for (int i = 1; i <= n; ++i) {
            Rational v = 1;
            for (int r = 0; r < 2 * m; ++r) v /= i;
            a[m][i - 1] = v;
        }
        a[m][n] = m == 0 ? 1 : 0;
    }
    for (int c = 0; c < n; ++c) {
        int pivot = c;
        while (a[pivot][c] == 0) ++pivot;
        std::swap(a[c], a[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[c][c];
            for (int k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<Rational> w(n);
    for (int i = 0; i < n; ++i) w[i] = a[i][n] / a[i][i];
    return w;
}

std::vector<std::string> fractions(const MpeTableau& t) {
    std::vector<std::string> out;
    for (const auto& e : t.entries) out.push_back(to_fraction_string(e.weight));
    return out;
}

}  // namespace

TEST_CASE("tableaux reproduce the published weights") {
    CHECK(fractions(mpe_coefficients(1)) == std::vector<std::string>{"1"});
    CHECK(fractions(mpe_coefficients(2)) == std::vector<std::string>{"-1/3", "4/3"});
    CHECK(fractions(mpe_coefficients(3)) == std::vector<std::string>{"1/24", "-16/15", "81/40"});
    CHECK(fractions(mpe_coefficients(4)) == std::vector<std::string>{"-1/360", "16/45", "-729/280", "1024/315"});
    CHECK(fractions(mpe_coefficients(5)) ==
          std::vector<std::string>{"1/8640", "-64/945", "6561/4480", "-16384/2835", "390625/72576"});
}

TEST_CASE("closed form agrees with the Vandermonde solve and the order conditions") {
    for (int n = 1; n <= kMaxMpeTerms; ++n) {
        const MpeTableau t = mpe_coefficients(n);
        REQUIRE(t.entries.size() == static_cast<std::size_t>(n));
        const auto oracle = vandermonde_weights(n);
        for (int i = 0; i < n; ++i) {
            CHECK(t.entries[i].k == static_cast<std::size_t>(i + 1));
            CHECK(t.entries[i].weight == oracle[i]);
        }
        CHECK(t.moment(0) == 1);
        for (int m = 1; m < n; ++m) CHECK(t.moment(m) == 0);
        if (n > 1) CHECK(t.moment(n) != 0);
    }
}

TEST_CASE("floating weights are the correctly rounded fractions") {
    const MpeTableau t = mpe_coefficients(5);
    const std::vector<double> w = t.weights();
    const double expected[] = {1.0 / 8640, -64.0 / 945, 6561.0 / 4480, -16384.0 / 2835, 390625.0 / 72576};
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(w[i] - expected[i]) <= std::numeric_limits<double>::epsilon() * std::abs(expected[i]));
    }
}

TEST_CASE("mpe_coefficients range") {
    CHECK_THROWS_AS(mpe_coefficients(0), ContractViolation);
    CHECK_THROWS_AS(mpe_coefficients(13), ContractViolation);
}

TEST_CASE("mpe_step on the harmonic oscillator") {
    HarmonicOscillator ho;
    const PhaseState s({1.0}, {0.0});
    CHECK(mpe_step(ho, s, 0.1, 1) == vv_step(ho, s, 0.1));

    const PhaseState four = mpe_step(ho, s, 0.1, 2);
    const double q_oracle = -1.0 / 3.0 * 0.995 + 4.0 / 3.0 * 0.995003125;
    const double p_oracle = -1.0 / 3.0 * -0.09975 + 4.0 / 3.0 * -0.099812578125;
    CHECK(four.q[0] == doctest::Approx(q_oracle).epsilon(1e-14));
    CHECK(four.p[0] == doctest::Approx(p_oracle).epsilon(1e-14));
    CHECK(std::abs(four.q[0] - std::cos(0.1)) <= 1e-7);
    CHECK(std::abs(four.p[0] + std::sin(0.1)) <= 1e-7);
    CHECK(four.t == doctest::Approx(0.1));

    const PhaseState origin({0.0}, {0.0});
    for (int n = 1; n <= 5; ++n) {
        const PhaseState out = mpe_step(ho, origin, 0.3, n);
        CHECK(out.q == origin.q);
        CHECK(out.p == origin.p);
    }

    CHECK(mpe_step(ho, s, 0.1, mpe_coefficients(3)) == mpe_step(ho, s, 0.1, 3));
}

TEST_CASE("mpe_step performs n(n+1)/2 kernel steps") {
    HarmonicOscillator ho;
    for (int n = 1; n <= 6; ++n) {
        levsim::testing::CountingSystem counter(ho);
        mpe_step(counter, PhaseState({1.0}, {0.0}), 0.1, n);
        CHECK(counter.drift_calls == static_cast<std::size_t>(n * (n + 1) / 2));
        CHECK(counter.kick_calls == static_cast<std::size_t>(n * (n + 1)));
    }
}

TEST_CASE("mpe_step names the failing substep run") {
    LevitronParams params = LevitronParams::defaults();
    params.sin_guard = 0.01;
    const LevitronSystem strict(params);
    // The single h-step (k = 1) already crosses the guard.
    const PhaseState s({0, 0, 2.0, 0.02, 0, 0}, {0, 0, 0, -1.0, 0, 0});
    try {
        mpe_step(strict, s, 0.03, 2);
        FAIL("expected IntegrationFailure");
    } catch (const IntegrationFailure& f) {
        REQUIRE(f.substep_count().has_value());
        CHECK(*f.substep_count() == 1);
    }
}
