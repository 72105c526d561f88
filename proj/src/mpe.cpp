#include "levsim/mpe.hpp"

#include <array>
#include <sstream>

#include "levsim/errors.hpp"

namespace levsim {

std::vector<double> MpeTableau::weights() const {
    std::vector<double> w;
    w.reserve(entries.size());
    for (const auto& e : entries) w.push_back(e.weight.convert_to<double>());
    return w;
}

Rational MpeTableau::moment(int m) const {
    Rational sum = 0;
    for (const auto& e : entries) {
        Rational kpow = 1;
        const Rational k2 = Rational(e.k) * Rational(e.k);
        for (int i = 0; i < m; ++i) kpow *= k2;
        sum += e.weight / kpow;
    }
    return sum;
}

MpeTableau mpe_coefficients(int n) {
    if (n < 1 || n > kMaxMpeTerms) {
        throw ContractViolation("mpe_coefficients: n must lie in [1, " + std::to_string(kMaxMpeTerms) + "]");
    }
    MpeTableau tab;
    tab.n = static_cast<std::size_t>(n);
    for (int i = 1; i <= n; ++i) {
        const Rational ki2 = Rational(i) * Rational(i);
        Rational c = 1;
        for (int j = 1; j <= n; ++j) {
            if (j == i) continue;
            c *= ki2 / (ki2 - Rational(j) * Rational(j));
        }
        tab.entries.push_back({static_cast<std::size_t>(i), c});
    }
    return tab;
}

std::string to_fraction_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << '/' << denominator(r);
    return os.str();
}

namespace {

const std::vector<double>& cached_weights(int n) {
    static const auto table = [] {
        std::array<std::vector<double>, kMaxMpeTerms + 1> t;
        for (int m = 1; m <= kMaxMpeTerms; ++m) t[m] = mpe_coefficients(m).weights();
        return t;
    }();
    if (n < 1 || n > kMaxMpeTerms) {
        throw ContractViolation("mpe_step: n must lie in [1, " + std::to_string(kMaxMpeTerms) + "]");
    }
    return table[n];
}

PhaseState combine_runs(const HamiltonianSystem& system, const PhaseState& state, double h,
                        const std::vector<double>& weights, Kernel kernel) {
    std::vector<PhaseState> runs;
    runs.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const std::size_t k = i + 1;
        try {
            runs.push_back(t2_substeps(system, state, h, k, kernel));
        } catch (const IntegrationFailure& f) {
            throw f.with_substep_count(k);
        }
    }
    PhaseState out = affine_combine(runs, weights);
    if (!out.is_finite()) throw IntegrationFailure("non-finite extrapolated state", 0);
    return out;
}

}  // namespace

PhaseState mpe_step(const HamiltonianSystem& system, const PhaseState& state, double h, int n, Kernel kernel) {
    return combine_runs(system, state, h, cached_weights(n), kernel);
}

PhaseState mpe_step(const HamiltonianSystem& system, const PhaseState& state, double h,
                    const MpeTableau& tableau, Kernel kernel) {
    return combine_runs(system, state, h, tableau.weights(), kernel);
}

}  // namespace levsim
