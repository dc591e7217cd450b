#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace cascade {

/// Jones amplitudes of a detection polarization in the (H, V) basis.
struct JonesVector {
    std::complex<double> h;
    std::complex<double> v;

    double norm() const { return std::sqrt(std::norm(h) + std::norm(v)); }
};

/// <a|b> with the first argument conjugated.
std::complex<double> inner(const JonesVector& a, const JonesVector& b);

/// Analyzer setting (theta, phi). Stored canonically with theta in [0, pi)
/// and phi in (-pi, pi]; phi is zeroed when theta == 0 since it has no
/// effect there.
class PolarizerSetting {
public:
    PolarizerSetting() = default;
    PolarizerSetting(double theta, double phi);

    double theta() const noexcept { return theta_; }
    double phi() const noexcept { return phi_; }

    /// Equal rank-1 projectors, i.e. equal up to a global phase.
    bool same_polarization(const PolarizerSetting& other, double tol = 1e-12) const;

private:
    double theta_ = 0.0;
    double phi_ = 0.0;
};

/// (cos theta, e^{-i phi} sin theta): first row of the basis transform.
JonesVector jones_vector(const PolarizerSetting& setting);

/// The setting whose Jones vector is the second transform row
/// (-e^{i phi} sin theta, cos theta), up to global phase.
PolarizerSetting orthogonal(const PolarizerSetting& setting);

/// Named presets: H, V, D, Dprime, R, L.
PolarizerSetting preset(std::string_view name);

/// Accepts a preset name, "theta,phi" in radians, or "deg:theta,phi".
PolarizerSetting parse_setting(std::string_view text);

/// A measurement basis: a setting and its orthogonal partner.
class BasisPair {
public:
    /// Throws ValidationError unless the two settings are orthogonal.
    BasisPair(const PolarizerSetting& primary, const PolarizerSetting& orthogonal_setting);

    static BasisPair from(const PolarizerSetting& primary);

    const PolarizerSetting& primary() const noexcept { return primary_; }
    const PolarizerSetting& orthogonal() const noexcept { return orthogonal_; }

private:
    PolarizerSetting primary_;
    PolarizerSetting orthogonal_;
};

BasisPair rectilinear_basis();
BasisPair diagonal_basis();
BasisPair circular_basis();

} // namespace cascade
