#pragma once

// Overflow- and cancellation-free building blocks for the closed-form
// solutions. Every removable singularity of the printed formulas (A -> 0,
// resonant denominators a0 +- A - 2 gamma -> 0) is absorbed here.

namespace cascade::numerics {

/// (1 - e^{-z}) / z, with the z -> 0 limit 1. Any real z.
double relax(double z);

/// I_k(z) = int_0^1 u^k e^{-z u} du, z >= 0, 0 <= k <= 7.
double moment_rising(int k, double z);

/// K_k(z) = int_0^1 (1 - v)^k e^{-z v} dv, z >= 0, 0 <= k <= 7.
double moment_falling(int k, double z);

/// int_0^t s^k exp(-rate_in (t - s) - rate_out s) ds.
///
/// With k = 0 this is the Bateman feeding term (e^{-rate_in t} - e^{-rate_out t})
/// / (rate_out - rate_in), including the equal-rate limit t e^{-rate t}.
double feed_moment(int k, double rate_in, double rate_out, double t);

/// e^{-a0 t} cosh(A t).
double exp_cosh(double a0, double split, double t);

/// e^{-a0 t} sinh(A t) / A, with the A -> 0 limit t e^{-a0 t}.
double exp_sinhc(double a0, double split, double t);

/// Mean and divided difference of feeding through the split pair of rates
/// rate -+ A:
///   mean  = [M(rate - A) + M(rate + A)] / 2
///   slope = [M(rate - A) - M(rate + A)] / (2 A)
/// where M(r) = feed_moment(0, rate_in, r, t). slope has the A -> 0 limit
/// feed_moment(1, rate_in, rate, t).
struct SplitFeed {
    double mean = 0.0;
    double slope = 0.0;
};

SplitFeed split_feed(double rate_in, double rate, double split, double t);

/// A t below which split_feed uses the Taylor branch for the slope.
inline constexpr double kSplitSeriesThreshold = 1e-2;

/// Both slope branches, exposed so their agreement can be checked directly.
double split_slope_difference(double rate_in, double rate, double split, double t);
double split_slope_series(double rate_in, double rate, double split, double t);

} // namespace cascade::numerics
