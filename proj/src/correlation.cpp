#include "cascade/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cascade/numerics.hpp"

namespace cascade {

namespace {

void require_delay(double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw ValidationError("tau", "delay must be finite and non-negative");
    }
}

} // namespace

CorrelationKernel kernels(const RateParams& params, double tau) {
    require_delay(tau);
    const auto d = derive(params);
    const double ch = numerics::exp_cosh(d.a0, d.a_mix, tau);
    const double sh = numerics::exp_sinhc(d.a0, d.a_mix, tau);
    CorrelationKernel k;
    k.tau = tau;
    k.f1 = ch + d.gamma_a * sh;
    k.f2 = 2.0 * params.gamma_ab * sh;
    k.w1 = 2.0 * params.gamma_ba * sh;
    k.w2 = ch - d.gamma_a * sh;
    k.u = std::exp(std::complex<double>(-d.a0, params.delta) * tau);
    return k;
}

CorrelationKernel integrated_kernels(const RateParams& params) {
    const auto d = derive(params);
    if (params.gamma2 <= 0.0) {
        throw ValidationError("gamma2", "must be positive for a finite time average");
    }
    if (params.gamma4 <= 0.0) {
        throw ValidationError("gamma4", "must be positive for a finite time average");
    }
    // int e^{-a0 t} cosh(At) = a0 / (a0^2 - A^2), int e^{-a0 t} sinh(At)/A = 1 / (a0^2 - A^2)
    const double inv_gap = 1.0 / d.gap_product;
    CorrelationKernel k;
    k.tau = std::numeric_limits<double>::infinity();
    k.f1 = (d.a0 + d.gamma_a) * inv_gap;
    k.f2 = 2.0 * params.gamma_ab * inv_gap;
    k.w1 = 2.0 * params.gamma_ba * inv_gap;
    k.w2 = (d.a0 - d.gamma_a) * inv_gap;
    k.u = 1.0 / std::complex<double>(d.a0, -params.delta);
    return k;
}

double combine_kernels(const CorrelationKernel& k, const PolarizerSetting& p1,
                       const PolarizerSetting& p2) {
    const double c1 = std::cos(2.0 * p1.theta());
    const double c2 = std::cos(2.0 * p2.theta());
    const double s1 = std::sin(2.0 * p1.theta());
    const double s2 = std::sin(2.0 * p2.theta());
    const auto phase = std::polar(1.0, -(p1.phi() + p2.phi()));
    return k.f1 + k.w1 + k.f2 + k.w2 + (c1 + c2) * (k.f1 - k.w2) + (c1 - c2) * (k.w1 - k.f2) +
           c1 * c2 * (k.f1 + k.w2 - k.f2 - k.w1) + s1 * s2 * 2.0 * std::real(phase * k.u);
}

double EmissionPrefactor::value() const {
    for (double x : {omega0, r, d1, d2, rho_ii_t}) {
        if (!(x > 0.0)) {
            throw ValidationError("prefactor", "all emission prefactor fields must be positive");
        }
    }
    const double k2 = omega0 * omega0;
    const double k8 = k2 * k2 * k2 * k2;
    const double r2 = r * r;
    return k8 * d1 * d1 * d2 * d2 * rho_ii_t / (4.0 * r2 * r2);
}

double g2_general(const RateParams& params, const PolarizerSetting& p1,
                  const PolarizerSetting& p2, double tau) {
    return combine_kernels(kernels(params, tau), p1, p2);
}

double g2_general(const RateParams& params, const PolarizerSetting& p1,
                  const PolarizerSetting& p2, double tau, const EmissionPrefactor& prefactor) {
    return prefactor.value() * g2_general(params, p1, p2, tau);
}

double g2_symmetric(const RateParams& params, double theta1, double theta2, double tau) {
    params.validate();
    require_delay(tau);
    if (!params.is_symmetric()) {
        throw ValidationError("params",
                              "g2_symmetric needs gamma2 == gamma4 and gamma_ab == gamma_ba; "
                              "use g2_general for asymmetric rates");
    }
    const double g2 = params.gamma2;
    const double gab = params.gamma_ab;
    return std::exp(-2.0 * g2 * tau) +
           std::cos(2.0 * theta1) * std::cos(2.0 * theta2) * std::exp(-2.0 * (g2 + 2.0 * gab) * tau) +
           std::sin(2.0 * theta1) * std::sin(2.0 * theta2) * std::exp(-2.0 * (g2 + gab) * tau) *
               std::cos(params.delta * tau);
}

G2Curve g2_curve(const RateParams& params, const PolarizerSetting& p1,
                 const PolarizerSetting& p2, std::span<const double> taus) {
    G2Curve curve;
    curve.settings_1 = p1;
    curve.settings_2 = p2;
    curve.reduced = true;
    curve.samples.reserve(taus.size());
    for (double tau : taus) {
        curve.samples.push_back({tau, g2_general(params, p1, p2, tau)});
    }
    return curve;
}

Degree contrast(double co, double cross) {
    // Coincidence rates are non-negative; clip rounding noise.
    co = std::max(co, 0.0);
    cross = std::max(cross, 0.0);
    const double total = co + cross;
    if (total == 0.0) {
        return {0.0, true};
    }
    return {std::clamp((co - cross) / total, -1.0, 1.0), false};
}

Degree degree_of_correlation(const RateParams& params, const BasisPair& basis, double tau) {
    const auto k = kernels(params, tau);
    return contrast(combine_kernels(k, basis.primary(), basis.primary()),
                    combine_kernels(k, basis.primary(), basis.orthogonal()));
}

double degree_time_averaged(const RateParams& params, const BasisPair& basis) {
    const auto k = integrated_kernels(params);
    return contrast(combine_kernels(k, basis.primary(), basis.primary()),
                    combine_kernels(k, basis.primary(), basis.orthogonal()))
        .value;
}

} // namespace cascade
