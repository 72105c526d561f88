#include "levsim/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "levsim/errors.hpp"

namespace levsim {

// --- errors ---------------------------------------------------------------

IntegrationFailure::IntegrationFailure(std::string reason, std::size_t substep,
                                       std::optional<std::size_t> step,
                                       std::optional<std::size_t> substep_count,
                                       std::vector<double> state_dump)
    : std::runtime_error(compose(reason, substep, step, substep_count)),
      reason_(std::move(reason)),
      substep_(substep),
      step_(step),
      substep_count_(substep_count),
      state_dump_(std::move(state_dump)) {}

std::string IntegrationFailure::compose(const std::string& reason, std::size_t substep,
                                        std::optional<std::size_t> step,
                                        std::optional<std::size_t> k) {
    std::ostringstream os;
    os << "integration failure";
    if (step) os << " at step " << *step;
    if (k) os << " in substep run k=" << *k;
    os << " (substep " << substep << "): " << reason;
    return os.str();
}

IntegrationFailure IntegrationFailure::with_step(std::size_t step, std::vector<double> dump) const {
    return IntegrationFailure(reason_, substep_, step, substep_count_, std::move(dump));
}

IntegrationFailure IntegrationFailure::with_substep_count(std::size_t k) const {
    return IntegrationFailure(reason_, substep_, step_, k, state_dump_);
}

// --- PhaseState -----------------------------------------------------------

PhaseState::PhaseState(std::vector<double> q_, std::vector<double> p_, double t_)
    : q(std::move(q_)), p(std::move(p_)), t(t_) {
    require_well_formed(*this);
}

bool PhaseState::is_finite() const noexcept {
    auto finite = [](double v) { return std::isfinite(v); };
    return std::isfinite(t) && std::all_of(q.begin(), q.end(), finite) &&
           std::all_of(p.begin(), p.end(), finite);
}

std::vector<double> PhaseState::flatten() const {
    std::vector<double> out;
    out.reserve(1 + q.size() + p.size());
    out.push_back(t);
    out.insert(out.end(), q.begin(), q.end());
    out.insert(out.end(), p.begin(), p.end());
    return out;
}

void require_well_formed(const PhaseState& state) {
    if (state.q.empty() || state.q.size() != state.p.size()) {
        throw ContractViolation("phase state needs q and p of equal nonzero length (got " +
                                std::to_string(state.q.size()) + " and " +
                                std::to_string(state.p.size()) + ")");
    }
}

// --- split maps -----------------------------------------------------------

namespace {

void shift(std::vector<double>& x, const std::vector<double>& field, double tau) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += tau * field[i];
}

}  // namespace

PhaseState HamiltonianSystem::kick(const PhaseState& state, double tau) const {
    PhaseState out = state;
    shift(out.p, dH_dq(state), -tau);
    return out;
}

PhaseState HamiltonianSystem::drift(const PhaseState& state, double tau) const {
    PhaseState out = state;
    shift(out.q, dH_dp(state), tau);
    return out;
}

PhaseState TimeDependentSystem::kick_at(const PhaseState& state, double tau, double time) const {
    PhaseState out = state;
    shift(out.p, dH_dq_at(state, time), -tau);
    return out;
}

PhaseState TimeDependentSystem::drift_at(const PhaseState& state, double tau, double time) const {
    PhaseState out = state;
    shift(out.q, dH_dp_at(state, time), tau);
    return out;
}

// --- oracle and combination -----------------------------------------------

std::vector<double> fd_gradient(const HamiltonianSystem& system, const PhaseState& state,
                                Block which, double eps) {
    if (!(eps > 0.0)) throw ContractViolation("fd_gradient: eps must be positive");
    require_well_formed(state);

    const std::size_t d = state.dimension();
    std::vector<double> grad(d);
    PhaseState probe = state;
    auto& coords = which == Block::q ? probe.q : probe.p;
    const char* block = which == Block::q ? "q" : "p";

    for (std::size_t i = 0; i < d; ++i) {
        const double x0 = coords[i];
        const double step = eps * std::max(1.0, std::abs(x0));

        coords[i] = x0 + step;
        const double up = system.energy(probe);
        coords[i] = x0 - step;
        const double down = system.energy(probe);
        coords[i] = x0;

        if (!std::isfinite(up) || !std::isfinite(down)) {
            throw EvaluationFailure(std::string("fd_gradient: non-finite energy probing ") + block +
                                        std::to_string(i + 1),
                                    i);
        }
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace

PhaseState affine_combine(std::span<const PhaseState> states, std::span<const double> weights) {
    if (states.empty() || states.size() != weights.size()) {
        throw ContractViolation("affine_combine: need equally many (and at least one) states and weights");
    }
    const PhaseState& first = states.front();
    require_well_formed(first);
    for (const auto& s : states) {
        if (s.dimension() != first.dimension() || s.p.size() != first.p.size()) {
            throw ContractViolation("affine_combine: states differ in dimension");
        }
        if (s.t != first.t) throw ContractViolation("affine_combine: states differ in time");
    }

    CompensatedSum total;
    double magnitude = 0.0;
    for (double w : weights) {
        total.add(w);
        magnitude += std::abs(w);
    }
    if (std::abs(total.value() - 1.0) > kAffineWeightTolerance * std::max(1.0, magnitude)) {
        throw ContractViolation("affine_combine: weights must sum to 1");
    }

    const std::size_t d = first.dimension();
    PhaseState out;
    out.q.resize(d);
    out.p.resize(d);
    out.t = first.t;
    // A component shared by every input is returned as is, so conserved
    // quantities such as a cyclic momentum stay bit-exact.
    auto combine = [&](auto member, std::size_t i) {
        const double v0 = (first.*member)[i];
        bool shared = true;
        CompensatedSum sum;
        for (std::size_t k = 0; k < states.size(); ++k) {
            const double v = (states[k].*member)[i];
            shared = shared && v == v0;
            sum.add(weights[k] * v);
        }
        return shared ? v0 : sum.value();
    };
    for (std::size_t i = 0; i < d; ++i) {
        out.q[i] = combine(&PhaseState::q, i);
        out.p[i] = combine(&PhaseState::p, i);
    }
    return out;
}

}  // namespace levsim
