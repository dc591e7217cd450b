#include "cascade/numerics.hpp"

#include <cassert>
#include <cmath>

namespace cascade::numerics {

namespace {

constexpr int kMaxOrder = 7;
constexpr double kSeriesCut = 2.0;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

} // namespace

double relax(double z) {
    if (std::abs(z) < 1e-6) {
        return 1.0 - z / 2.0 + z * z / 6.0;
    }
    return -std::expm1(-z) / z;
}

double moment_rising(int k, double z) {
    assert(k >= 0 && k <= kMaxOrder && z >= 0.0);
    if (z < kSeriesCut) {
        // sum_n (-z)^n / (n! (n + k + 1))
        double term = 1.0;
        double sum = 1.0 / (k + 1);
        for (int n = 1; n < 60; ++n) {
            term *= -z / n;
            const double add = term / (n + k + 1);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) {
                break;
            }
        }
        return sum;
    }
    const double tail = std::exp(-z);
    double value = relax(z);
    for (int j = 1; j <= k; ++j) {
        value = (j * value - tail) / z;
    }
    return value;
}

double moment_falling(int k, double z) {
    assert(k >= 0 && k <= kMaxOrder && z >= 0.0);
    if (z < kSeriesCut) {
        // sum_n (-z)^n k! / (n + k + 1)!
        double coeff = 1.0 / (k + 1); // k! / (k+1)!
        double power = 1.0;
        double sum = coeff;
        for (int n = 1; n < 60; ++n) {
            coeff /= (n + k + 1);
            power *= -z;
            const double add = power * coeff;
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) {
                break;
            }
        }
        return sum;
    }
    double value = relax(z);
    for (int j = 1; j <= k; ++j) {
        value = (1.0 - j * value) / z;
    }
    return value;
}

double feed_moment(int k, double rate_in, double rate_out, double t) {
    if (t <= 0.0) {
        return 0.0;
    }
    const double scale = std::pow(t, k + 1);
    const double z = (rate_out - rate_in) * t;
    if (z >= 0.0) {
        return scale * std::exp(-rate_in * t) * moment_rising(k, z);
    }
    return scale * std::exp(-rate_out * t) * moment_falling(k, -z);
}

double exp_cosh(double a0, double split, double t) {
    return 0.5 * (std::exp(-(a0 - split) * t) + std::exp(-(a0 + split) * t));
}

double exp_sinhc(double a0, double split, double t) {
    // e^{-(a0-A)t} (1 - e^{-2At}) / (2A)
    return std::exp(-(a0 - split) * t) * t * relax(2.0 * split * t);
}

double split_slope_difference(double rate_in, double rate, double split, double t) {
    return (feed_moment(0, rate_in, rate - split, t) - feed_moment(0, rate_in, rate + split, t)) /
           (2.0 * split);
}

double split_slope_series(double rate_in, double rate, double split, double t) {
    const double a2 = split * split;
    return feed_moment(1, rate_in, rate, t) + a2 / 6.0 * feed_moment(3, rate_in, rate, t) +
           a2 * a2 / factorial(5) * feed_moment(5, rate_in, rate, t);
}

SplitFeed split_feed(double rate_in, double rate, double split, double t) {
    SplitFeed out;
    out.mean = 0.5 * (feed_moment(0, rate_in, rate - split, t) +
                      feed_moment(0, rate_in, rate + split, t));
    out.slope = split * t < kSplitSeriesThreshold
                    ? split_slope_series(rate_in, rate, split, t)
                    : split_slope_difference(rate_in, rate, split, t);
    return out;
}

} // namespace cascade::numerics
