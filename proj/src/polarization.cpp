#include "cascade/polarization.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "cascade/rates.hpp"

namespace cascade {

namespace {

constexpr double kPi = std::numbers::pi;

double canonical_theta(double theta) {
    double t = std::fmod(theta, kPi);
    if (t < 0.0) {
        t += kPi;
    }
    if (t >= kPi) {
        t = 0.0;
    }
    return t;
}

double canonical_phi(double phi) {
    double p = std::remainder(phi, 2.0 * kPi);
    if (p <= -kPi) {
        p += 2.0 * kPi;
    }
    return p;
}

double parse_number(std::string_view text, std::string_view what) {
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ValidationError(std::string(what), "cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

} // namespace

std::complex<double> inner(const JonesVector& a, const JonesVector& b) {
    return std::conj(a.h) * b.h + std::conj(a.v) * b.v;
}

PolarizerSetting::PolarizerSetting(double theta, double phi)
    : theta_(canonical_theta(theta)), phi_(canonical_phi(phi)) {
    if (theta_ == 0.0) {
        phi_ = 0.0;
    }
}

bool PolarizerSetting::same_polarization(const PolarizerSetting& other, double tol) const {
    return std::abs(1.0 - std::norm(inner(jones_vector(*this), jones_vector(other)))) <= tol;
}

JonesVector jones_vector(const PolarizerSetting& setting) {
    return {std::complex<double>(std::cos(setting.theta()), 0.0),
            std::polar(std::sin(setting.theta()), -setting.phi())};
}

PolarizerSetting orthogonal(const PolarizerSetting& setting) {
    // (cos(t + pi/2), e^{-i phi} sin(t + pi/2)) = e^{-i phi} (-e^{i phi} sin t, cos t)
    return {setting.theta() + kPi / 2.0, setting.phi()};
}

PolarizerSetting preset(std::string_view name) {
    if (name == "H") return {0.0, 0.0};
    if (name == "V") return {kPi / 2.0, 0.0};
    if (name == "D") return {kPi / 4.0, 0.0};
    if (name == "Dprime") return {3.0 * kPi / 4.0, 0.0};
    if (name == "R") return {kPi / 4.0, -kPi / 2.0};
    if (name == "L") return {kPi / 4.0, kPi / 2.0};
    throw ValidationError("polarization", "unknown preset '" + std::string(name) +
                                              "' (valid: H, V, D, Dprime, R, L)");
}

PolarizerSetting parse_setting(std::string_view text) {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
        return preset(text);
    }
    double scale = 1.0;
    std::string_view body = text;
    if (body.starts_with("deg:")) {
        body.remove_prefix(4);
        scale = kPi / 180.0;
    }
    const auto split = body.find(',');
    const double theta = parse_number(body.substr(0, split), "theta");
    const double phi = parse_number(body.substr(split + 1), "phi");
    return {theta * scale, phi * scale};
}

BasisPair::BasisPair(const PolarizerSetting& primary, const PolarizerSetting& orthogonal_setting)
    : primary_(primary), orthogonal_(orthogonal_setting) {
    if (std::abs(inner(jones_vector(primary_), jones_vector(orthogonal_))) >= 1e-12) {
        throw ValidationError("basis", "settings are not mutually orthogonal");
    }
}

BasisPair BasisPair::from(const PolarizerSetting& primary) {
    return {primary, cascade::orthogonal(primary)};
}

BasisPair rectilinear_basis() { return {preset("H"), preset("V")}; }
BasisPair diagonal_basis() { return {preset("D"), preset("Dprime")}; }
BasisPair circular_basis() { return {preset("R"), preset("L")}; }

} // namespace cascade
