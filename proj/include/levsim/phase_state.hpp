#pragma once

#include <cstddef>
#include <vector>

namespace levsim {

/// A point (q, p) of a 2d-dimensional phase space together with the time it
/// refers to.
struct PhaseState {
    std::vector<double> q;
    std::vector<double> p;
    double t = 0.0;

    PhaseState() = default;
    PhaseState(std::vector<double> q_, std::vector<double> p_, double t_ = 0.0);

    std::size_t dimension() const noexcept { return q.size(); }
    bool is_finite() const noexcept;

    /// (t, q1..qd, p1..pd), the layout used for failure dumps.
    std::vector<double> flatten() const;

    friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

/// Throws ContractViolation unless q and p have equal, nonzero length.
void require_well_formed(const PhaseState& state);

}  // namespace levsim
