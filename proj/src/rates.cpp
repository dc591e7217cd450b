#include "cascade/rates.hpp"

#include <array>
#include <cmath>
#include <string_view>
#include <utility>

#include <json.hpp>

namespace cascade {

namespace {

void require_rate(std::string_view name, double value) {
    if (!std::isfinite(value)) {
        throw ValidationError(std::string(name), "must be finite");
    }
    if (value < 0.0) {
        throw ValidationError(std::string(name), "rate must be non-negative");
    }
}

} // namespace

void RateParams::validate() const {
    require_rate("gamma1", gamma1);
    require_rate("gamma3", gamma3);
    require_rate("gamma2", gamma2);
    require_rate("gamma4", gamma4);
    require_rate("gamma_ab", gamma_ab);
    require_rate("gamma_ba", gamma_ba);
    require_rate("pump_rate", pump_rate);
    if (!std::isfinite(delta)) {
        throw ValidationError("delta", "must be finite");
    }
    if (gamma1 + gamma3 <= 0.0) {
        throw ValidationError("gamma1+gamma3", "the biexciton must decay (gamma1 + gamma3 > 0)");
    }
}

DerivedRates derive(const RateParams& params) {
    params.validate();
    DerivedRates d;
    d.gamma = params.gamma1 + params.gamma3;
    d.a0 = params.gamma2 + params.gamma4 + params.gamma_ab + params.gamma_ba;
    d.gamma_a = params.gamma4 - params.gamma2 + params.gamma_ab - params.gamma_ba;
    d.a_mix = std::sqrt(d.gamma_a * d.gamma_a + 4.0 * params.gamma_ab * params.gamma_ba);
    d.gap_product = 4.0 * (params.gamma2 * params.gamma4 + params.gamma2 * params.gamma_ab +
                           params.gamma4 * params.gamma_ba);
    return d;
}

RateParams normalize_to_gamma(const RateParams& params) {
    const double g = derive(params).gamma;
    if (g == 1.0) {
        return params;
    }
    RateParams out = params;
    out.gamma1 /= g;
    out.gamma3 /= g;
    out.gamma2 /= g;
    out.gamma4 /= g;
    out.gamma_ab /= g;
    out.gamma_ba /= g;
    out.delta /= g;
    out.pump_rate /= g;
    return out;
}

RateParams params_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("params", "expected a JSON object");
    }
    RateParams p;
    const std::array<std::pair<const char*, double RateParams::*>, 8> keys{{
        {"gamma1", &RateParams::gamma1},
        {"gamma3", &RateParams::gamma3},
        {"gamma2", &RateParams::gamma2},
        {"gamma4", &RateParams::gamma4},
        {"gamma_ab", &RateParams::gamma_ab},
        {"gamma_ba", &RateParams::gamma_ba},
        {"delta", &RateParams::delta},
        {"pump_rate", &RateParams::pump_rate},
    }};
    for (const auto& [key, value] : doc.items()) {
        bool known = false;
        for (const auto& [name, member] : keys) {
            if (key == name) {
                if (!value.is_number()) {
                    throw ValidationError(key, "expected a number");
                }
                p.*member = value.get<double>();
                known = true;
                break;
            }
        }
        if (!known) {
            throw ValidationError(key, "unknown parameter key");
        }
    }
    for (const char* required : {"gamma1", "gamma3"}) {
        if (!doc.contains(required)) {
            throw ValidationError(required, "required key missing");
        }
    }
    p.validate();
    return p;
}

nlohmann::json params_to_json(const RateParams& params) {
    return {
        {"gamma1", params.gamma1},     {"gamma3", params.gamma3},
        {"gamma2", params.gamma2},     {"gamma4", params.gamma4},
        {"gamma_ab", params.gamma_ab}, {"gamma_ba", params.gamma_ba},
        {"delta", params.delta},       {"pump_rate", params.pump_rate},
    };
}

} // namespace cascade
