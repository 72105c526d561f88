#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "levsim/hamiltonian.hpp"
#include "levsim/integrators.hpp"

namespace levsim {

using Rational = boost::multiprecision::cpp_rational;

/// Multiproduct weights: the order-2n step is sum_i c_i T2^{k_i}(h / k_i)
/// with k_i = i.
struct MpeTableau {
    struct Entry {
        std::size_t k;
        Rational weight;
    };

    std::size_t n = 0;
    std::vector<Entry> entries;

    std::vector<double> weights() const;
    /// sum_i c_i k_i^(-2m), exact.
    Rational moment(int m) const;
};

inline constexpr int kMaxMpeTerms = 12;

/// c_i = prod_{j != i} k_i^2 / (k_i^2 - k_j^2), exact. 1 <= n <= 12.
MpeTableau mpe_coefficients(int n);

/// Reduced fraction, e.g. "-729/280" or "1".
std::string to_fraction_string(const Rational& r);

/// Multiproduct step of order 2n over the given kernel. A failing substep
/// run aborts the whole step; the IntegrationFailure names the failing k.
PhaseState mpe_step(const HamiltonianSystem& system, const PhaseState& state, double h, int n,
                    Kernel kernel = Kernel::vv);

/// Same, reusing a precomputed tableau.
PhaseState mpe_step(const HamiltonianSystem& system, const PhaseState& state, double h,
                    const MpeTableau& tableau, Kernel kernel = Kernel::vv);

}  // namespace levsim
