#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

namespace cascade {

/// Raised when a parameter set or input violates its invariants.
/// `field()` names the offending input.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Physical rates of the four-level cascade |i> -> {|a>,|b>} -> |j>.
///
/// All rates are in inverse units of a caller-chosen time scale. The factor-2
/// convention follows the master equation: the biexciton decays at 2(gamma1 +
/// gamma3), exciton |a> at 2 gamma2, exciton |b> at 2 gamma4, and the
/// incoherent transfer |b> -> |a> at 2 gamma_ab (|a> -> |b> at 2 gamma_ba).
struct RateParams {
    double gamma1 = 0.0;    // |i> -> |a>, H branch
    double gamma3 = 0.0;    // |i> -> |b>, V branch
    double gamma2 = 0.0;    // |a> -> |j>
    double gamma4 = 0.0;    // |b> -> |j>
    double gamma_ab = 0.0;  // feeds |a> from |b>
    double gamma_ba = 0.0;  // feeds |b> from |a>
    double delta = 0.0;     // omega_a - omega_b
    double pump_rate = 0.0; // constant feed R into |i>

    /// Throws ValidationError naming the first offending field.
    void validate() const;

    /// gamma2 == gamma4 and gamma_ab == gamma_ba.
    bool is_symmetric() const noexcept {
        return gamma2 == gamma4 && gamma_ab == gamma_ba;
    }

    friend bool operator==(const RateParams&, const RateParams&) = default;
};

/// Composite rates consumed by every closed-form expression.
struct DerivedRates {
    double gamma = 0.0;   // gamma1 + gamma3
    double a0 = 0.0;      // gamma2 + gamma4 + gamma_ab + gamma_ba
    double gamma_a = 0.0; // gamma4 - gamma2 + gamma_ab - gamma_ba
    double a_mix = 0.0;   // sqrt(gamma_a^2 + 4 gamma_ab gamma_ba)

    /// a0^2 - A^2, evaluated without cancellation as
    /// 4 (gamma2 gamma4 + gamma2 gamma_ab + gamma4 gamma_ba).
    double gap_product = 0.0;
};

DerivedRates derive(const RateParams& params);

/// Divides every rate (and delta) by gamma so that gamma1 + gamma3 == 1.
RateParams normalize_to_gamma(const RateParams& params);

/// Reads the JSON parameter document. Keys: gamma1, gamma3 (required),
/// gamma2, gamma4, gamma_ab, gamma_ba, delta, pump_rate (default 0).
/// Unknown keys are rejected.
RateParams params_from_json(const nlohmann::json& doc);
nlohmann::json params_to_json(const RateParams& params);

} // namespace cascade
