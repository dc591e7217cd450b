#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cascade/dynamics.hpp"
#include "cascade/polarization.hpp"
#include "cascade/rates.hpp"

// Brute-force reference: integrates the full master equation for the 4x4
// density matrix and evaluates two-time correlations by conditioned-state
// evolution. Nothing in here calls the closed-form solutions.
namespace cascade::oracle {

using DensityMatrix = Eigen::Matrix4cd;
using Superoperator = Eigen::Matrix<std::complex<double>, 16, 16>;

/// Basis ordering of the 4x4 matrices.
enum Level : int { kBiexciton = 0, kExcitonA = 1, kExcitonB = 2, kGround = 3 };

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Generator of d rho / dt = -i [H, rho] + L rho (+ R |i><i|).
///
/// H = diag(0, delta, 0, 0): only omega_a - omega_b enters the observables.
class Liouvillian {
public:
    /// `with_pump` adds the constant feed R |i><i| (affine term).
    explicit Liouvillian(const RateParams& params, bool with_pump = true);

    DensityMatrix apply(const DensityMatrix& rho) const;

    /// Linear part acting on column-major vec(rho).
    Superoperator matrix() const;

    /// Largest diagonal decay or oscillation rate; sets the default step.
    double rate_scale() const noexcept { return rate_scale_; }

private:
    DensityMatrix apply_linear(const DensityMatrix& rho) const;

    RateParams params_;
    double gamma_ = 0.0;
    double pump_ = 0.0;
    double rate_scale_ = 0.0;
};

/// 1e-3 / rate_scale.
double default_step(const RateParams& params);

/// Classic RK4 with a fixed step no larger than `step` (<= 0 picks
/// default_step), landing exactly on each requested time. `times` must be
/// non-decreasing and start at or after 0. Throws IntegrationError on
/// non-finite values.
std::vector<DensityMatrix> propagate(const DensityMatrix& rho0, const Liouvillian& generator,
                                     std::span<const double> times, double step = 0.0);

DensityMatrix to_density(const CascadeState& state);
CascadeState from_density(const DensityMatrix& rho, double time);

/// Integrates the full master equation (pump included) from `initial` by t.
CascadeState integrate(const CascadeState& initial, const RateParams& params, double t,
                       double step = 0.0);

/// Smallest eigenvalue of the Hermitian part of rho.
double min_eigenvalue(const DensityMatrix& rho);

/// Detection operators for unit dipoles:
///   first  = cos t1 |a><i| + e^{-i phi1} sin t1 |b><i|
///   second = cos t2 |j><a| + e^{-i phi2} sin t2 |j><b|
struct CollapseOperator {
    DensityMatrix first_photon;
    DensityMatrix second_photon;

    CollapseOperator(const PolarizerSetting& p1, const PolarizerSetting& p2);
};

/// Normalization mapping Tr[P2^+ P2 sigma] onto the reduced correlation,
/// fixed once from the (H, H, tau = 0) case, which reduces to 4.
double calibration_factor();

/// Conditioned state right after the first photon: P1 |i><i| P1^+.
DensityMatrix conditioned_state(const CollapseOperator& ops);

/// Reduced g2 by conditioned evolution (pump disabled) on a delay grid.
std::vector<double> g2_conditioned_curve(const RateParams& params, const PolarizerSetting& p1,
                                         const PolarizerSetting& p2,
                                         std::span<const double> taus, double step = 0.0);

double g2_conditioned(const RateParams& params, const PolarizerSetting& p1,
                      const PolarizerSetting& p2, double tau, double step = 0.0);

} // namespace cascade::oracle
