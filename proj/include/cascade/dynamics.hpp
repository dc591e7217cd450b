#pragma once

#include <complex>

#include "cascade/rates.hpp"

namespace cascade {

/// Single-time state of the cascade.
///
/// `rho_ab` is the expectation of |a><b|, i.e. the density-matrix element
/// <b|rho|a>; with that convention it evolves as e^{-(a0 - i delta) t}.
struct CascadeState {
    double rho_ii = 0.0;
    double rho_aa = 0.0;
    double rho_bb = 0.0;
    double rho_jj = 0.0;
    std::complex<double> rho_ab{0.0, 0.0};
    double time = 0.0;

    double trace() const noexcept { return rho_ii + rho_aa + rho_bb + rho_jj; }

    /// rho_ii - R / (2 gamma).
    double excess_biexciton(const RateParams& params) const;

    /// Biexciton fully populated at t = 0.
    static CascadeState biexciton() {
        CascadeState s;
        s.rho_ii = 1.0;
        return s;
    }
};

/// Throws ValidationError if populations are negative beyond 1e-12 or the
/// excitonic block is not positive semidefinite within 1e-9.
void validate_state(const CascadeState& state);

/// Closed-form evolution of `initial` by a further time t >= 0.
CascadeState evolve_analytic(const CascadeState& initial, const RateParams& params, double t);

// Feeding coefficients of the exciton populations. C and F multiply R/(2 gamma);
// D and K multiply p_i(0) e^{-2 gamma t}.
double coefficient_c(const RateParams& params, double t);
double coefficient_d(const RateParams& params, double t);
double coefficient_f(const RateParams& params, double t);
double coefficient_k(const RateParams& params, double t);

} // namespace cascade
