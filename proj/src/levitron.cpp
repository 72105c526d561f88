#include "levsim/levitron.hpp"

#include <cmath>
#include <sstream>

#include "levsim/errors.hpp"

namespace levsim {

namespace {

// Z of the maximum of f'' (root of 24 Z^4 - 72 Z^2 + 9 = 0 above sqrt(3/2)).
const double kMaxGradientHeight = std::sqrt((72.0 + std::sqrt(72.0 * 72.0 - 4.0 * 24.0 * 9.0)) / 48.0);

struct Angles {
    double s, c;
};

Angles tilt(const LevitronParams& params, const PhaseState& state) {
    if (state.dimension() != 6) {
        throw ContractViolation("levitron state must have 6 degrees of freedom, got " +
                                std::to_string(state.dimension()));
    }
    const double s = std::sin(state.q[3]);
    if (!(std::abs(s) >= params.sin_guard)) {
        std::ostringstream os;
        os << "gimbal lock: |sin q4| = " << std::abs(s) << " below guard " << params.sin_guard;
        throw SingularityError(os.str(), s);
    }
    return {s, std::cos(state.q[3])};
}

}  // namespace

LevitronParams LevitronParams::defaults() {
    LevitronParams p;
    p.M = 1.0 / axis_profile(1.5, 2);
    return p;
}

void LevitronParams::validate() const {
    if (!std::isfinite(a) || !(a > 0.0)) throw ContractViolation("levitron: a must be positive");
    if (!std::isfinite(c) || !(c > 0.0)) throw ContractViolation("levitron: c must be positive");
    if (!std::isfinite(M)) throw ContractViolation("levitron: M must be finite");
    if (!std::isfinite(sin_guard) || !(sin_guard > 0.0))
        throw ContractViolation("levitron: sin_guard must be positive");
}

double axis_profile(double Z, int derivative) {
    const double w = 1.0 + Z * Z;
    const double Z2 = Z * Z;
    switch (derivative) {
        case 0: return Z * std::pow(w, -1.5);
        case 1: return (1.0 - 2.0 * Z2) * std::pow(w, -2.5);
        case 2: return 3.0 * Z * (2.0 * Z2 - 3.0) * std::pow(w, -3.5);
        case 3: return (-24.0 * Z2 * Z2 + 72.0 * Z2 - 9.0) * std::pow(w, -4.5);
        case 4: return 15.0 * Z * (8.0 * Z2 * Z2 - 40.0 * Z2 + 15.0) * std::pow(w, -5.5);
        default: throw ContractViolation("axis_profile: derivative order must be 0..4");
    }
}

// Psi = f(Z) - rho^2 f''(Z) / 4 with rho^2 = X^2 + Y^2.
double psi(double X, double Y, double Z) {
    const double w = 1.0 + Z * Z;
    const double rho2 = X * X + Y * Y;
    return Z / std::pow(w, 1.5) - rho2 * 0.75 * (2.0 * Z * Z - 3.0) * Z / std::pow(w, 3.5);
}

PsiJet psi_jet(double X, double Y, double Z) {
    const double rho2 = X * X + Y * Y;
    const double f0 = axis_profile(Z, 0);
    const double f1 = axis_profile(Z, 1);
    const double f2 = axis_profile(Z, 2);
    const double f3 = axis_profile(Z, 3);
    const double f4 = axis_profile(Z, 4);

    PsiJet j;
    j.value = f0 - 0.25 * rho2 * f2;
    j.x = -0.5 * X * f2;
    j.y = -0.5 * Y * f2;
    j.z = f1 - 0.25 * rho2 * f3;
    j.xx = -0.5 * f2;
    j.yy = -0.5 * f2;
    j.zz = f2 - 0.25 * rho2 * f4;
    j.xz = -0.5 * X * f3;
    j.yz = -0.5 * Y * f3;
    return j;
}

double levitron_energy(const LevitronParams& params, const PhaseState& state) {
    const auto [s, c] = tilt(params, state);
    const auto& q = state.q;
    const auto& p = state.p;
    const PsiJet psi = psi_jet(q[0], q[1], q[2]);

    const double u = p[4] - p[5] * c;
    const double kinetic = 0.5 * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3] / params.a +
                                  u * u / (params.a * s * s) + p[5] * p[5] / params.c);
    const double magnetic =
        -params.M * (s * (std::cos(q[4]) * psi.x + std::sin(q[4]) * psi.y) + c * psi.z);
    return kinetic + magnetic + q[2];
}

Vec6 dq_dt(const LevitronParams& params, const PhaseState& state) {
    const auto [s, c] = tilt(params, state);
    const auto& p = state.p;
    const double u = p[4] - p[5] * c;
    const double as2 = params.a * s * s;
    return {p[0], p[1], p[2], p[3] / params.a, u / as2, p[5] / params.c - c * u / as2};
}

Vec6 dp_dt(const LevitronParams& params, const PhaseState& state) {
    const auto [s, c] = tilt(params, state);
    const auto& q = state.q;
    const auto& p = state.p;
    const PsiJet psi = psi_jet(q[0], q[1], q[2]);
    const double M = params.M;
    const double cp = std::cos(q[4]), sp = std::sin(q[4]);
    const double u = p[4] - p[5] * c;

    // Psi_xy == 0, so the transverse rows carry a single in-plane term each.
    const double f1 = M * (s * cp * psi.xx + c * psi.xz);
    const double f2 = M * (s * sp * psi.yy + c * psi.yz);
    const double f3 = M * (s * (cp * psi.xz + sp * psi.yz) + c * psi.zz) - 1.0;
    const double f4 = M * (c * (cp * psi.x + sp * psi.y) - s * psi.z) - p[5] * u / (params.a * s) +
                      c * u * u / (params.a * s * s * s);
    const double f5 = M * s * (cp * psi.y - sp * psi.x);
    return {f1, f2, f3, f4, f5, 0.0};
}

double find_axis_equilibrium(const LevitronParams& params, std::pair<double, double> bracket) {
    auto [lo, hi] = bracket;
    if (!(lo < hi)) throw ContractViolation("find_axis_equilibrium: bracket must satisfy z_lo < z_hi");
    auto g = [&](double z) { return params.M * axis_profile(z, 2) - 1.0; };

    double glo = g(lo);
    const double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo > 0.0) == (ghi > 0.0)) {
        std::ostringstream os;
        os << "no sign change of M f''(z) - 1 on [" << lo << ", " << hi << "]";
        throw NoRootError(os.str());
    }

    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0 || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) break;
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    if (!(std::abs(g(mid)) <= 1e-10)) {
        throw NoRootError("find_axis_equilibrium: bisection did not reach residual 1e-10");
    }
    return mid;
}

double stable_axis_height(const LevitronParams& params) {
    // f'' decays to zero above its maximum, so widen until the sign flips.
    double hi = 2.0 * kMaxGradientHeight;
    while (params.M * axis_profile(hi, 2) - 1.0 > 0.0 && hi < 1e6) hi *= 2.0;
    return find_axis_equilibrium(params, {kMaxGradientHeight, hi});
}

double steady_precession_momentum(const LevitronParams& params, double z, double theta, double p_psi) {
    // dH/dtheta = 0 with p_theta = 0 on axis reduces to
    //   a cos(theta) W^2 - p_psi W - M f'(z) = 0
    // for the precession rate W = dphi/dt; take the slow root.
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double A = params.a * c;
    const double C = -params.M * axis_profile(z, 1);
    const double disc = p_psi * p_psi - 4.0 * A * C;
    if (disc < 0.0 || A == 0.0) return p_psi * c;
    const double root = std::sqrt(disc);
    // Numerically stable slow root: 2C / (p + sign(p) sqrt(disc)).
    const double denom = p_psi >= 0.0 ? p_psi + root : p_psi - root;
    const double rate = denom == 0.0 ? 0.0 : 2.0 * C / denom;
    return p_psi * c + params.a * s * s * rate;
}

PhaseState default_initial_state(const LevitronParams& params, double p_psi) {
    const double z = stable_axis_height(params);
    const double p5 = steady_precession_momentum(params, z, kDefaultTilt, p_psi);
    // dp1/dt = M (sin(theta) Psi_xx + cos(theta) Psi_xz) = 0 to first order in x, theta.
    const double x = -kDefaultTilt * axis_profile(z, 2) / axis_profile(z, 3);
    return PhaseState({x, 0.0, z, kDefaultTilt, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0, p5, p_psi}, 0.0);
}

LevitronSystem::LevitronSystem(LevitronParams params) : params_(params) { params_.validate(); }

double LevitronSystem::energy(const PhaseState& s) const { return levitron_energy(params_, s); }

std::vector<double> LevitronSystem::dH_dp(const PhaseState& s) const {
    const Vec6 v = dq_dt(params_, s);
    return {v.begin(), v.end()};
}

std::vector<double> LevitronSystem::dH_dq(const PhaseState& s) const {
    const Vec6 v = dp_dt(params_, s);
    std::vector<double> out(6);
    for (std::size_t i = 0; i < 6; ++i) out[i] = -v[i];
    // -0.0 would still read as zero; keep the cyclic entry a literal 0.
    out[5] = 0.0;
    return out;
}

}  // namespace levsim
