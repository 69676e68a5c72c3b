#include "fisheye/qed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fisheye/error.hpp"

namespace fisheye::qed {

using lens::kOmega0;
using specfun::kPi;

void AtomPairConfig::validate() const {
    for (const DiskPoint& p : {p1, p2})
        if (!(p.rho >= 0.0 && p.rho <= 1.0)) throw DomainError("atom outside the disk");
    if (purcell_eta && !(*purcell_eta > 0.0)) throw DomainError("purcell_eta must be positive");
    if (!(freespace_factor >= 0.0)) throw DomainError("freespace_factor must be >= 0");
}

AtomPairConfig antipodal_pair(double rho, double phi) { return {{rho, phi}, {rho, phi + kPi}, 1.0, {}, 0.5}; }

namespace {

double with_freespace(const AtomPairConfig& atoms, double gamma) {
    return atoms.purcell_eta ? gamma * (1.0 + atoms.freespace_factor / *atoms.purcell_eta) : gamma;
}

// Every mode vanishes on the mirror, so an atom there does not decay; the regularised
// on-site function itself diverges logarithmically (in its real part) at rho = 1.
double onsite_gamma(const LensConfig& cfg, DiskPoint p, specfun::ComplexDegree nu) {
    if (greens::xi_pair(p, p).image <= -1.0 + 1e-14) return 0.0;
    return 3.0 * greens::greens_onsite_regular(cfg, p, nu).value.imag();
}

void finish(CouplingRates& r) { r.beta = r.delta_omega / (r.gamma + r.gamma_coop); }

}  // namespace

CouplingRates coupling_rates(const LensConfig& cfg, const AtomPairConfig& atoms) {
    cfg.validate();
    atoms.validate();
    const auto nu = lens::atomic_order_parameter(cfg);
    const cplx w2 = cplx(1.0, cfg.alpha) * cplx(1.0, cfg.alpha);
    const cplx g = w2 * greens::greens_zz(cfg, atoms.p1, atoms.p2, nu).value;

    CouplingRates r;
    r.delta_omega = 1.5 * g.real();
    r.gamma_coop = 3.0 * g.imag();
    r.gamma = with_freespace(atoms, onsite_gamma(cfg, atoms.p1, nu));
    r.gamma_2 = with_freespace(atoms, onsite_gamma(cfg, atoms.p2, nu));
    finish(r);
    return r;
}

namespace {

struct RateSums {
    double gamma_coop, delta_omega;
};

RateSums rate_sums(const LensConfig& cfg, const greens::XiPair& x, int L) {
    const double kappa = cfg.alpha * kOmega0;
    const double k2 = kappa * kappa;
    const auto pa = specfun::legendre_poly_table(L, -x.direct);
    const auto pb = specfun::legendre_poly_table(L, -x.image);
    const double norm = 1.0 / (4.0 * kPi * cfg.b * cfg.R0 * cfg.R0 * cfg.n0 * cfg.n0);
    double gsum = 0.0, dsum = 0.0;
    for (int l = 1; l <= L; ++l) {
        const double w = specfun::smooth_window_weight(l, L);
        if (w == 0.0) break;
        const double S = norm * (2.0 * l + 1.0) * (pa[l] - pb[l]);
        const double wl = lens::eigenfrequency(cfg, l);
        const double ap = k2 + (wl + kOmega0) * (wl + kOmega0);
        const double am = k2 + (wl - kOmega0) * (wl - kOmega0);
        const double Lsum = -wl / ap + wl / am;
        const double Dsum = (wl + kOmega0) / ap + (wl - kOmega0) / am;
        gsum += w * kappa * S * Lsum;
        dsum += w * S * (0.5 * wl * Dsum - 1.0);
    }
    const double scale = 3.0 * kPi / (kOmega0 * kOmega0 * kOmega0);
    return {scale * gsum, scale * dsum};
}

}  // namespace

CouplingRates rates_modesum_oracle(const LensConfig& cfg, const AtomPairConfig& atoms, const ModeSumOptions& opts) {
    cfg.validate();
    atoms.validate();
    const auto x = greens::xi_pair(atoms.p1, atoms.p2);
    if (x.direct <= -1.0 + 1e-15) throw PoleError("rates_modesum_oracle: coincident points");
    const double nu = lens::atomic_order_parameter(cfg).value.real();
    int L = opts.l_max > 0 ? opts.l_max : std::max(16, 8 * int(std::ceil(nu)));
    RateSums prev = rate_sums(cfg, x, L);
    while (2 * L <= opts.l_cap) {
        L *= 2;
        const RateSums next = rate_sums(cfg, x, L);
        const double scale = std::hypot(next.gamma_coop, next.delta_omega);
        if (std::abs(next.gamma_coop - prev.gamma_coop) <= opts.tol * scale &&
            std::abs(next.delta_omega - prev.delta_omega) <= opts.tol * scale) {
            CouplingRates r;
            r.delta_omega = next.delta_omega;
            r.gamma_coop = next.gamma_coop;
            r.gamma = r.gamma_2 = r.beta = std::numeric_limits<double>::quiet_NaN();
            return r;
        }
        prev = next;
    }
    throw ConvergenceError("rates_modesum_oracle: no convergence below l_max cap");
}

CouplingRates scaling_rates(const LensConfig& cfg, double R0_over_lambda, double alpha) {
    LensConfig c = cfg;
    c.R0 = R0_over_lambda;
    c.alpha = 0.0;
    c.validate();
    if (!(alpha >= 0.0)) throw DomainError("scaling_rates: alpha must be >= 0");
    const int m = int(std::floor(lens::atomic_order_parameter(c).value.real()));
    const double sign = (m % 2) ? -1.0 : 1.0;
    const double y = 2.0 * kPi * kPi * R0_over_lambda * alpha;
    CouplingRates r;
    r.delta_omega = sign * 3.0 / (8.0 * cfg.b) / (1.0 + y * y);
    r.gamma = r.gamma_2 = 1.5 * kPi * kPi * R0_over_lambda * alpha / cfg.b;
    r.gamma_coop = 0.0;
    finish(r);
    return r;
}

TwoAtomTrajectory trajectory(const CouplingRates& rates, const std::vector<double>& t_grid) {
    const cplx ep(rates.delta_omega, -0.5 * (rates.gamma + rates.gamma_coop));
    const cplx em(-rates.delta_omega, -0.5 * (rates.gamma - rates.gamma_coop));
    const cplx phase(0.0, rates.delta_omega < 0.0 ? -1.0 : 1.0);
    TwoAtomTrajectory tr;
    tr.times = t_grid;
    for (double t : t_grid) {
        const cplx up = std::exp(cplx(0.0, -1.0) * ep * t);
        const cplx um = std::exp(cplx(0.0, -1.0) * em * t);
        const cplx ceg = 0.5 * (up + um);
        const cplx cge = 0.5 * (up - um);
        tr.pop1.push_back(std::norm(ceg));
        tr.pop2.push_back(std::norm(cge));
        tr.bell_fidelity.push_back(0.5 * std::norm(ceg + phase * cge));
    }
    return tr;
}

double optimal_time(const CouplingRates& rates) {
    if (rates.delta_omega == 0.0) throw PoleError("optimal_time: zero exchange rate");
    return kPi / (4.0 * std::abs(rates.delta_omega));
}

double entanglement_fidelity(const CouplingRates& rates) {
    if (rates.delta_omega == 0.0) throw PoleError("entanglement_fidelity: zero exchange rate");
    const double dw = std::abs(rates.delta_omega);
    return std::exp(-0.25 * kPi * std::abs(rates.gamma) / dw) * std::cosh(0.25 * kPi * std::abs(rates.gamma_coop) / dw);
}

double entangling_error(const CouplingRates& rates) { return std::min(1.0 - entanglement_fidelity(rates), 0.5); }

double fidelity_approx(double R0_over_lambda, double alpha) {
    return std::exp(-kPi * kPi * kPi * R0_over_lambda * alpha);
}

double fidelity_with_freespace(double R0_over_lambda, double alpha, double eta) {
    if (!(eta > 0.0)) throw DomainError("fidelity_with_freespace: eta must be positive");
    return std::exp(-kPi * kPi * kPi * (1.0 + 0.5 / eta) * R0_over_lambda * alpha);
}

}  // namespace fisheye::qed
