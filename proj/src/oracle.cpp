#include "cascade/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cascade::oracle {

namespace {

using cd = std::complex<double>;

DensityMatrix projector(int k) {
    DensityMatrix p = DensityMatrix::Zero();
    p(k, k) = 1.0;
    return p;
}

DensityMatrix transition(int to, int from, cd amplitude) {
    DensityMatrix s = DensityMatrix::Zero();
    s(to, from) = amplitude;
    return s;
}

} // namespace

Liouvillian::Liouvillian(const RateParams& params, bool with_pump) : params_(params) {
    params_.validate();
    gamma_ = params_.gamma1 + params_.gamma3;
    pump_ = with_pump ? params_.pump_rate : 0.0;
    rate_scale_ = std::max({2.0 * gamma_, 2.0 * (params_.gamma2 + params_.gamma_ba),
                            2.0 * (params_.gamma4 + params_.gamma_ab), std::abs(params_.delta)});
}

DensityMatrix Liouvillian::apply_linear(const DensityMatrix& rho) const {
    const auto& p = params_;
    // omega_i = omega_b = omega_j = 0, omega_a = delta
    const double omega[4] = {0.0, p.delta, 0.0, 0.0};
    // -g {S_kk, rho}: each coefficient damps row k and column k
    const double loss[4] = {gamma_, p.gamma2 + p.gamma_ba, p.gamma4 + p.gamma_ab, 0.0};

    DensityMatrix out;
    for (int n = 0; n < 4; ++n) {
        for (int m = 0; m < 4; ++m) {
            out(m, n) = cd(-(loss[m] + loss[n]), -(omega[m] - omega[n])) * rho(m, n);
        }
    }
    const cd r_ii = rho(kBiexciton, kBiexciton);
    const cd r_aa = rho(kExcitonA, kExcitonA);
    const cd r_bb = rho(kExcitonB, kExcitonB);
    out(kExcitonA, kExcitonA) += 2.0 * (p.gamma1 * r_ii + p.gamma_ab * r_bb);
    out(kExcitonB, kExcitonB) += 2.0 * (p.gamma3 * r_ii + p.gamma_ba * r_aa);
    out(kGround, kGround) += 2.0 * (p.gamma2 * r_aa + p.gamma4 * r_bb);
    return out;
}

DensityMatrix Liouvillian::apply(const DensityMatrix& rho) const {
    DensityMatrix out = apply_linear(rho);
    out(kBiexciton, kBiexciton) += pump_;
    return out;
}

Superoperator Liouvillian::matrix() const {
    Superoperator l;
    for (int n = 0; n < 4; ++n) {
        for (int m = 0; m < 4; ++m) {
            DensityMatrix basis = DensityMatrix::Zero();
            basis(m, n) = 1.0;
            const DensityMatrix image = apply_linear(basis);
            l.col(m + 4 * n) = Eigen::Map<const Eigen::Matrix<cd, 16, 1>>(image.data());
        }
    }
    return l;
}

double default_step(const RateParams& params) {
    return 1e-3 / Liouvillian(params).rate_scale();
}

std::vector<DensityMatrix> propagate(const DensityMatrix& rho0, const Liouvillian& generator,
                                     std::span<const double> times, double step) {
    if (step <= 0.0) {
        step = 1e-3 / generator.rate_scale();
    }
    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    DensityMatrix rho = rho0;
    double now = 0.0;
    for (double target : times) {
        if (!(target >= now) || !std::isfinite(target)) {
            throw IntegrationError("sample times must be finite, non-negative and non-decreasing");
        }
        const double span = target - now;
        if (span > 0.0) {
            const auto n = static_cast<long>(std::ceil(span / step));
            const double h = span / static_cast<double>(n);
            for (long s = 0; s < n; ++s) {
                const DensityMatrix k1 = generator.apply(rho);
                const DensityMatrix k2 = generator.apply(rho + 0.5 * h * k1);
                const DensityMatrix k3 = generator.apply(rho + 0.5 * h * k2);
                const DensityMatrix k4 = generator.apply(rho + h * k3);
                rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            if (!rho.allFinite()) {
                throw IntegrationError("non-finite density matrix at t = " + std::to_string(target));
            }
        }
        now = target;
        out.push_back(rho);
    }
    return out;
}

DensityMatrix to_density(const CascadeState& s) {
    DensityMatrix rho = DensityMatrix::Zero();
    rho(kBiexciton, kBiexciton) = s.rho_ii;
    rho(kExcitonA, kExcitonA) = s.rho_aa;
    rho(kExcitonB, kExcitonB) = s.rho_bb;
    rho(kGround, kGround) = s.rho_jj;
    // rho_ab = <|a><b|> = <b|rho|a>
    rho(kExcitonB, kExcitonA) = s.rho_ab;
    rho(kExcitonA, kExcitonB) = std::conj(s.rho_ab);
    return rho;
}

CascadeState from_density(const DensityMatrix& rho, double time) {
    CascadeState s;
    s.rho_ii = rho(kBiexciton, kBiexciton).real();
    s.rho_aa = rho(kExcitonA, kExcitonA).real();
    s.rho_bb = rho(kExcitonB, kExcitonB).real();
    s.rho_jj = rho(kGround, kGround).real();
    s.rho_ab = rho(kExcitonB, kExcitonA);
    s.time = time;
    return s;
}

CascadeState integrate(const CascadeState& initial, const RateParams& params, double t,
                       double step) {
    const Liouvillian generator(params, true);
    const double times[] = {t};
    const auto rho = propagate(to_density(initial), generator, times, step);
    return from_density(rho.front(), initial.time + t);
}

double min_eigenvalue(const DensityMatrix& rho) {
    const DensityMatrix hermitian = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

CollapseOperator::CollapseOperator(const PolarizerSetting& p1, const PolarizerSetting& p2) {
    const cd c1(std::cos(p1.theta()), 0.0);
    const cd s1 = std::polar(std::sin(p1.theta()), -p1.phi());
    const cd c2(std::cos(p2.theta()), 0.0);
    const cd s2 = std::polar(std::sin(p2.theta()), -p2.phi());
    first_photon = transition(kExcitonA, kBiexciton, c1) + transition(kExcitonB, kBiexciton, s1);
    second_photon = transition(kGround, kExcitonA, c2) + transition(kGround, kExcitonB, s2);
}

DensityMatrix conditioned_state(const CollapseOperator& ops) {
    return ops.first_photon * projector(kBiexciton) * ops.first_photon.adjoint();
}

double calibration_factor() {
    static const double factor = [] {
        const CollapseOperator hh(PolarizerSetting(0.0, 0.0), PolarizerSetting(0.0, 0.0));
        const DensityMatrix sigma = conditioned_state(hh);
        const double raw =
            (hh.second_photon.adjoint() * hh.second_photon * sigma).trace().real();
        return 4.0 / raw;
    }();
    return factor;
}

std::vector<double> g2_conditioned_curve(const RateParams& params, const PolarizerSetting& p1,
                                         const PolarizerSetting& p2,
                                         std::span<const double> taus, double step) {
    const CollapseOperator ops(p1, p2);
    const Liouvillian generator(params, false);
    const DensityMatrix detector = ops.second_photon.adjoint() * ops.second_photon;
    const auto states = propagate(conditioned_state(ops), generator, taus, step);
    const double norm = calibration_factor();
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& sigma : states) {
        out.push_back(norm * (detector * sigma).trace().real());
    }
    return out;
}

double g2_conditioned(const RateParams& params, const PolarizerSetting& p1,
                      const PolarizerSetting& p2, double tau, double step) {
    const double taus[] = {tau};
    return g2_conditioned_curve(params, p1, p2, taus, step).front();
}

} // namespace cascade::oracle
