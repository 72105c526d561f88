#pragma once

#include <array>
#include <utility>

#include "levsim/hamiltonian.hpp"

// Dimensionless Levitron: lengths in units of the base-ring radius, energies
// in units of m g R, time in units of sqrt(R / g). Coordinates are
// q = (x, y, z, theta, phi, psi) with theta the tilt of the top's axis, phi
// its azimuth and psi the spin angle; p are the conjugate momenta.

namespace levsim {

struct LevitronParams {
    double a = 1.0;           ///< transverse moment of inertia
    double c = 2.0;           ///< axial moment of inertia
    double M = 0.0;           ///< magnetic coupling
    double sin_guard = 1e-8;  ///< smallest admissible |sin theta|

    /// a = 1, c = 2 and M placing an on-axis equilibrium at z = 1.5.
    static LevitronParams defaults();

    /// Throws ContractViolation unless a > 0, c > 0, sin_guard > 0 and all finite.
    void validate() const;
};

/// Ring-dipole potential and its derivatives up to second order. The mixed
/// transverse derivative d2/dXdY vanishes identically and is not stored.
struct PsiJet {
    double value = 0.0;
    double x = 0.0, y = 0.0, z = 0.0;
    double xx = 0.0, yy = 0.0, zz = 0.0, xz = 0.0, yz = 0.0;
};

/// On-axis profile f(Z) = Z (1 + Z^2)^(-3/2) and its derivatives.
double axis_profile(double Z, int derivative = 0);

double psi(double X, double Y, double Z);
PsiJet psi_jet(double X, double Y, double Z);

using Vec6 = std::array<double, 6>;

double levitron_energy(const LevitronParams& params, const PhaseState& state);
/// dH/dp of levitron_energy.
Vec6 dq_dt(const LevitronParams& params, const PhaseState& state);
/// -dH/dq of levitron_energy; the sixth component is the literal 0.
Vec6 dp_dt(const LevitronParams& params, const PhaseState& state);

/// Bisection root of M f''(z) - 1 on the bracket, the stationary point of the
/// on-axis potential -M f'(z) + z. Throws NoRootError without a sign change.
double find_axis_equilibrium(const LevitronParams& params, std::pair<double, double> bracket);

/// Vertically stable on-axis equilibrium (the root above the maximum of f'').
double stable_axis_height(const LevitronParams& params);

/// p_phi giving slow steady precession of an on-axis top with tilt theta and
/// spin momentum p_psi. Falls back to p_psi cos(theta) (no precession) when
/// the spin is below the sleeping-top threshold.
double steady_precession_momentum(const LevitronParams& params, double z, double theta, double p_psi);

inline constexpr double kDefaultTilt = 0.02;
inline constexpr double kDefaultSpin = 30.0;

/// Default near-equilibrium initial condition at the stable height: tilt
/// kDefaultTilt, steady precession, and the lateral offset x at which the
/// in-plane magnetic force on the tilted top vanishes. The on-axis point is
/// laterally unstable for the default M, so this start delays the drift.
PhaseState default_initial_state(const LevitronParams& params, double p_psi = kDefaultSpin);

class LevitronSystem final : public HamiltonianSystem {
public:
    explicit LevitronSystem(LevitronParams params);

    const LevitronParams& params() const noexcept { return params_; }

    std::size_t dimension() const override { return 6; }
    double energy(const PhaseState& s) const override;
    std::vector<double> dH_dp(const PhaseState& s) const override;
    std::vector<double> dH_dq(const PhaseState& s) const override;

private:
    LevitronParams params_;
};

}  // namespace levsim
