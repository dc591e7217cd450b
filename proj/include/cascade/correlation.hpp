#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cascade/polarization.hpp"
#include "cascade/rates.hpp"

namespace cascade {

/// Conditioned exciton propagators at delay tau after the first photon.
///
/// f1/f2: population of |a> at tau starting from |a>/|b>; w1/w2: population
/// of |b> starting from |a>/|b>; u: propagator of the excitonic coherence.
struct CorrelationKernel {
    double f1 = 0.0;
    double f2 = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
    std::complex<double> u{0.0, 0.0};
    double tau = 0.0;
};

CorrelationKernel kernels(const RateParams& params, double tau);

/// Kernels integrated over tau in [0, inf), in closed form. `tau` is set to
/// +inf. Requires gamma2 > 0 and gamma4 > 0.
CorrelationKernel integrated_kernels(const RateParams& params);

/// Braces content of the general correlation for one kernel set.
double combine_kernels(const CorrelationKernel& k, const PolarizerSetting& p1,
                       const PolarizerSetting& p2);

/// Geometry and dipole factor dropped by the reduced correlation:
/// (omega0 / c)^8 d1^2 d2^2 rho_ii_t / (4 r^4), with c = 1.
struct EmissionPrefactor {
    double omega0 = 1.0;
    double r = 1.0;
    double d1 = 1.0;
    double d2 = 1.0;
    double rho_ii_t = 1.0;

    double value() const;
};

/// Reduced two-time intensity correlation for arm settings p1 (first photon)
/// and p2 (second photon). Equals 4 at (H, H, tau = 0).
double g2_general(const RateParams& params, const PolarizerSetting& p1,
                  const PolarizerSetting& p2, double tau);

/// Same with the emission prefactor restored.
double g2_general(const RateParams& params, const PolarizerSetting& p1,
                  const PolarizerSetting& p2, double tau, const EmissionPrefactor& prefactor);

/// Linear-polarizer form for gamma2 == gamma4, gamma_ab == gamma_ba and
/// phi1 == phi2 == 0:
///   e^{-2 g2 tau} + cos2t1 cos2t2 e^{-2(g2 + 2 gab) tau}
///     + sin2t1 sin2t2 e^{-2(g2 + gab) tau} cos(delta tau)
/// which is exactly half of g2_general. Throws ValidationError for
/// asymmetric rates.
double g2_symmetric(const RateParams& params, double theta1, double theta2, double tau);

struct G2Sample {
    double tau = 0.0;
    double value = 0.0;
};

struct G2Curve {
    std::vector<G2Sample> samples;
    PolarizerSetting settings_1;
    PolarizerSetting settings_2;
    bool reduced = true;
};

G2Curve g2_curve(const RateParams& params, const PolarizerSetting& p1,
                 const PolarizerSetting& p2, std::span<const double> taus);

/// A degree of correlation. `degenerate` is set when both co- and
/// cross-polarized rates vanish; value is then 0.
struct Degree {
    double value = 0.0;
    bool degenerate = false;
};

/// (g_co - g_cross) / (g_co + g_cross) from two coincidence rates.
Degree contrast(double co, double cross);

/// c(tau) in a basis: co-polarized uses the primary setting in both arms,
/// cross-polarized puts the orthogonal setting in arm 2.
Degree degree_of_correlation(const RateParams& params, const BasisPair& basis, double tau);

/// Ratio of tau-integrated co/cross coincidence rates over [0, inf).
/// Throws ValidationError if gamma2 == 0 or gamma4 == 0.
double degree_time_averaged(const RateParams& params, const BasisPair& basis);

} // namespace cascade
