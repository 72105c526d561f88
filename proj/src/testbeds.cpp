#include "levsim/testbeds.hpp"

#include <cmath>

namespace levsim {

double HarmonicOscillator::energy(const PhaseState& s) const {
    return 0.5 * (s.p[0] * s.p[0] + s.q[0] * s.q[0]);
}

std::vector<double> HarmonicOscillator::dH_dp(const PhaseState& s) const { return {s.p[0]}; }
std::vector<double> HarmonicOscillator::dH_dq(const PhaseState& s) const { return {s.q[0]}; }

PhaseState HarmonicOscillator::exact(const PhaseState& initial, double t) {
    const double dt = t - initial.t;
    const double c = std::cos(dt), s = std::sin(dt);
    return PhaseState({c * initial.q[0] + s * initial.p[0]}, {-s * initial.q[0] + c * initial.p[0]}, t);
}

double FreeParticle::energy(const PhaseState& s) const { return 0.5 * s.p[0] * s.p[0]; }
std::vector<double> FreeParticle::dH_dp(const PhaseState& s) const { return {s.p[0]}; }
std::vector<double> FreeParticle::dH_dq(const PhaseState&) const { return {0.0}; }

double DrivenOscillator::energy_at(const PhaseState& s, double time) const {
    return 0.5 * (s.p[0] * s.p[0] + s.q[0] * s.q[0]) - s.q[0] * std::sin(time);
}

std::vector<double> DrivenOscillator::dH_dp_at(const PhaseState& s, double) const { return {s.p[0]}; }

std::vector<double> DrivenOscillator::dH_dq_at(const PhaseState& s, double time) const {
    return {s.q[0] - std::sin(time)};
}

}  // namespace levsim
