#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "cascade/dynamics.hpp"
#include "cascade/polarization.hpp"
#include "cascade/rates.hpp"

namespace cascade::testing {

inline constexpr double kPi = std::numbers::pi;

/// Random valid parameter set in units of gamma = gamma1 + gamma3 = 1.
/// Exciton rates uniform in (0, max_rate], delta uniform in [0, max_delta].
inline RateParams random_params(std::mt19937_64& rng, double max_rate = 10.0,
                                double max_delta = 20.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto rate = [&] { return max_rate * (1.0 - unit(rng)); };
    RateParams p;
    p.gamma1 = 1.0 - unit(rng);
    p.gamma3 = 1.0 - p.gamma1;
    if (p.gamma3 <= 0.0) {
        p.gamma3 = 0.5;
    }
    const double g = p.gamma1 + p.gamma3;
    p.gamma1 /= g;
    p.gamma3 /= g;
    p.gamma2 = rate();
    p.gamma4 = rate();
    p.gamma_ab = rate();
    p.gamma_ba = rate();
    p.delta = max_delta * unit(rng);
    return p;
}

inline RateParams symmetric_params(double gamma2, double dephasing, double delta) {
    RateParams p;
    p.gamma1 = 0.5;
    p.gamma3 = 0.5;
    p.gamma2 = gamma2;
    p.gamma4 = gamma2;
    p.gamma_ab = dephasing;
    p.gamma_ba = dephasing;
    p.delta = delta;
    return p;
}

inline PolarizerSetting random_setting(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> theta(0.0, kPi);
    std::uniform_real_distribution<double> phi(-kPi, kPi);
    return {theta(rng), phi(rng)};
}

/// Random physical state: populations on the simplex, |rho_ab|^2 <= rho_aa rho_bb.
inline CascadeState random_state(std::mt19937_64& rng) {
    std::gamma_distribution<double> g(1.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double w[4] = {g(rng), g(rng), g(rng), g(rng)};
    const double total = w[0] + w[1] + w[2] + w[3];
    CascadeState s;
    s.rho_ii = w[0] / total;
    s.rho_aa = w[1] / total;
    s.rho_bb = w[2] / total;
    s.rho_jj = w[3] / total;
    s.rho_ab = std::polar(u(rng) * std::sqrt(s.rho_aa * s.rho_bb), 2.0 * kPi * u(rng));
    return s;
}

} // namespace cascade::testing
