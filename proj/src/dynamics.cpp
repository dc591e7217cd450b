#include "cascade/dynamics.hpp"

#include <cmath>

#include "cascade/numerics.hpp"

namespace cascade {

namespace {

// Each coefficient is weight_mean * mean + weight_slope * slope over the
// exciton rate pair a0 -+ A (see numerics::split_feed). Writing the
// (A -> -A) partner this way keeps the A -> 0 limit finite.
struct FeedWeights {
    double mean;
    double slope;
};

FeedWeights alpha_weights(const RateParams& p, const DerivedRates& d) {
    return {2.0 * p.gamma1, 2.0 * p.gamma1 * d.gamma_a + 4.0 * p.gamma3 * p.gamma_ab};
}

FeedWeights beta_weights(const RateParams& p, const DerivedRates& d) {
    return {2.0 * p.gamma3, -2.0 * p.gamma3 * d.gamma_a + 4.0 * p.gamma1 * p.gamma_ba};
}

double combine(FeedWeights w, numerics::SplitFeed f) {
    return w.mean * f.mean + w.slope * f.slope;
}

void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("t", "time must be finite and non-negative");
    }
}

} // namespace

double CascadeState::excess_biexciton(const RateParams& params) const {
    return rho_ii - params.pump_rate / (2.0 * derive(params).gamma);
}

void validate_state(const CascadeState& s) {
    const double floor = -1e-12;
    if (s.rho_ii < floor) throw ValidationError("rho_ii", "negative population");
    if (s.rho_aa < floor) throw ValidationError("rho_aa", "negative population");
    if (s.rho_bb < floor) throw ValidationError("rho_bb", "negative population");
    if (s.rho_jj < floor) throw ValidationError("rho_jj", "negative population");
    if (std::norm(s.rho_ab) > s.rho_aa * s.rho_bb + 1e-9) {
        throw ValidationError("rho_ab", "coherence exceeds sqrt(rho_aa rho_bb)");
    }
    if (!(s.time >= 0.0)) throw ValidationError("time", "must be non-negative");
}

double coefficient_c(const RateParams& params, double t) {
    require_time(t);
    const auto d = derive(params);
    return combine(alpha_weights(params, d), numerics::split_feed(0.0, d.a0, d.a_mix, t));
}

double coefficient_d(const RateParams& params, double t) {
    require_time(t);
    const auto d = derive(params);
    return combine(alpha_weights(params, d),
                   numerics::split_feed(0.0, d.a0 - 2.0 * d.gamma, d.a_mix, t));
}

double coefficient_f(const RateParams& params, double t) {
    require_time(t);
    const auto d = derive(params);
    return combine(beta_weights(params, d), numerics::split_feed(0.0, d.a0, d.a_mix, t));
}

double coefficient_k(const RateParams& params, double t) {
    require_time(t);
    const auto d = derive(params);
    return combine(beta_weights(params, d),
                   numerics::split_feed(0.0, d.a0 - 2.0 * d.gamma, d.a_mix, t));
}

CascadeState evolve_analytic(const CascadeState& initial, const RateParams& params, double t) {
    require_time(t);
    const auto d = derive(params);
    if (t == 0.0) {
        return initial;
    }
    const double decay2 = 2.0 * d.gamma;
    const double steady_ii = params.pump_rate / decay2;
    const double excess = initial.rho_ii - steady_ii;

    const double ch = numerics::exp_cosh(d.a0, d.a_mix, t);
    const double sh = numerics::exp_sinhc(d.a0, d.a_mix, t);
    const double f1 = ch + d.gamma_a * sh;
    const double f2 = 2.0 * params.gamma_ab * sh;
    const double w1 = 2.0 * params.gamma_ba * sh;
    const double w2 = ch - d.gamma_a * sh;

    // Pumped feed (constant R) and the decaying biexciton excess, the latter
    // with e^{-2 gamma t} folded into the integral.
    const auto pumped = numerics::split_feed(0.0, d.a0, d.a_mix, t);
    const auto decaying = numerics::split_feed(decay2, d.a0, d.a_mix, t);
    const auto wa = alpha_weights(params, d);
    const auto wb = beta_weights(params, d);

    CascadeState out;
    out.time = initial.time + t;
    out.rho_ii = steady_ii + excess * std::exp(-decay2 * t);
    out.rho_aa = f1 * initial.rho_aa + f2 * initial.rho_bb + steady_ii * combine(wa, pumped) +
                 excess * combine(wa, decaying);
    out.rho_bb = w2 * initial.rho_bb + w1 * initial.rho_aa + steady_ii * combine(wb, pumped) +
                 excess * combine(wb, decaying);
    out.rho_ab = std::exp(std::complex<double>(-d.a0, params.delta) * t) * initial.rho_ab;
    out.rho_jj = initial.trace() + params.pump_rate * t - out.rho_ii - out.rho_aa - out.rho_bb;
    return out;
}

} // namespace cascade
