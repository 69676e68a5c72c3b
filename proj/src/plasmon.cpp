#include "fisheye/plasmon.hpp"

#include <algorithm>
#include <cmath>

#include "fisheye/error.hpp"
#include "fisheye/qed.hpp"

namespace fisheye::plasmon {

using specfun::kPi;

void PlasmonStack::validate() const {
    if (!(eps_metal.real() < -1.0)) throw DomainError("plasmon: Re(eps_metal) must be < -1");
    if (!(eps_dielectric > 1.0)) throw DomainError("plasmon: eps_dielectric must be > 1");
    if (!(lambda0_nm > 0.0)) throw DomainError("plasmon: lambda0 must be positive");
}

Wavenumbers wavenumbers(cplx n, const PlasmonStack& s) {
    const double k0 = s.k0();
    const cplx n2 = n * n;
    return {std::sqrt(n2 - 1.0) * k0, std::sqrt(n2 - s.eps_dielectric) * k0 / s.eps_dielectric,
            std::sqrt(n2 - s.eps_metal) * k0 / s.eps_metal};
}

cplx dispersion_residual(cplx n, double d_nm, const PlasmonStack& s) {
    const Wavenumbers k = wavenumbers(n, s);
    return std::tanh(k.k_d * s.eps_dielectric * d_nm) + (k.k_air * k.k_d + k.k_d * k.k_m) / (k.k_d * k.k_d + k.k_air * k.k_m);
}

cplx spp_index_air(const PlasmonStack& s) { return std::sqrt(s.eps_metal / (s.eps_metal + 1.0)); }

cplx spp_index_dielectric(const PlasmonStack& s) {
    return std::sqrt(s.eps_metal * s.eps_dielectric / (s.eps_metal + s.eps_dielectric));
}

namespace {

// residual / k_d, even in k_d and hence analytic across n^2 = eps_d where the
// principal root of k_d changes sign (a lossless metal puts the root on that cut)
cplx smooth_residual(cplx n, double d, const PlasmonStack& s) {
    const Wavenumbers k = wavenumbers(n, s);
    const cplx x = k.k_d * s.eps_dielectric * d;
    const cplx th = std::abs(x) < 1e-8 ? cplx(s.eps_dielectric * d) : std::tanh(x) / k.k_d;
    return s.k0() * (th + (k.k_air + k.k_m) / (k.k_d * k.k_d + k.k_air * k.k_m));
}

cplx newton(double d, const PlasmonStack& s, cplx n, const SolveOptions& opts) {
    cplx f = smooth_residual(n, d, s);
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (std::abs(f) < 1e-13) return n;
        const double h = 1e-7 * std::abs(n);
        const cplx df = (smooth_residual(n + h, d, s) - smooth_residual(n - h, d, s)) / (2.0 * h);
        cplx step = f / df;
        double lambda = 1.0;
        cplx trial = n - step;
        cplx ft = smooth_residual(trial, d, s);
        while (!(std::abs(ft) < std::abs(f)) && lambda > 1e-6) {
            lambda *= 0.5;
            trial = n - lambda * step;
            ft = smooth_residual(trial, d, s);
        }
        n = trial;
        f = ft;
        if (std::abs(lambda * step) < 1e-15 * std::abs(n) && std::abs(f) < 1e-10) return n;
    }
    if (std::abs(f) < 1e-10) return n;
    throw ConvergenceError("solve_effective_index: Newton iteration did not converge");
}

void check_jump(cplx a, cplx b, const SolveOptions& opts) {
    if (std::abs(b.real() - a.real()) > opts.branch_jump)
        throw ConvergenceError("solve_effective_index: branch jump during continuation");
}

}  // namespace

std::vector<EffectiveIndexSample> sweep_effective_index(const PlasmonStack& s, double d_max, const SolveOptions& opts) {
    s.validate();
    if (!(d_max >= 0.0) || !(opts.step_nm > 0.0)) throw DomainError("sweep_effective_index: bad range");
    const int steps = int(std::ceil(d_max / opts.step_nm - 1e-9));
    std::vector<EffectiveIndexSample> out;
    cplx n = newton(0.0, s, spp_index_air(s), opts);
    out.push_back({0.0, n});
    for (int i = 1; i <= steps; ++i) {
        const double d = std::min(d_max, i * opts.step_nm);
        const cplx next = newton(d, s, n, opts);
        check_jump(n, next, opts);
        n = next;
        out.push_back({d, n});
    }
    return out;
}

EffectiveIndexSample solve_effective_index(double d, const PlasmonStack& s, std::optional<cplx> seed,
                                           const SolveOptions& opts) {
    s.validate();
    if (!(d >= 0.0)) throw DomainError("solve_effective_index: d must be >= 0");
    if (seed) return {d, newton(d, s, *seed, opts)};
    return sweep_effective_index(s, d, opts).back();
}

IndexInverter::IndexInverter(const PlasmonStack& stack, double d_max, const SolveOptions& opts)
    : stack_(stack), opts_(opts), table_(sweep_effective_index(stack, d_max, opts)) {
    for (size_t i = 1; i < table_.size(); ++i)
        if (table_[i].n_eff.real() < table_[i - 1].n_eff.real() - 1e-6)
            throw ConvergenceError("IndexInverter: Re n(d) not monotone on the sweep");
}

double IndexInverter::n_min() const { return table_.front().n_eff.real(); }
double IndexInverter::n_max() const { return table_.back().n_eff.real(); }

EffectiveIndexSample IndexInverter::solve(double n_target) const {
    if (!(n_target >= n_min() && n_target <= n_max()))
        throw DomainError("height_for_index: target index outside the achievable range");
    const auto it = std::lower_bound(table_.begin(), table_.end(), n_target,
                                     [](const EffectiveIndexSample& s, double v) { return s.n_eff.real() < v; });
    if (it == table_.begin()) return table_.front();
    const EffectiveIndexSample hi = *it, lo = *(it - 1);
    double a = lo.height_nm, b = hi.height_nm;
    EffectiveIndexSample mid = lo;
    for (int i = 0; i < 60 && b - a > 1e-10; ++i) {
        const double d = 0.5 * (a + b);
        mid = {d, newton(d, stack_, mid.n_eff, opts_)};
        (mid.n_eff.real() < n_target ? a : b) = d;
    }
    const double d = 0.5 * (a + b);
    return {d, newton(d, stack_, mid.n_eff, opts_)};
}

double height_for_index(double n_target, const PlasmonStack& stack, double d_max) {
    return IndexInverter(stack, d_max).solve(n_target).height_nm;
}

std::vector<ProfilePoint> lens_height_profile(const LensConfig& cfg, const PlasmonStack& stack, int samples) {
    cfg.validate();
    if (samples < 2) throw DomainError("lens_height_profile: need at least 2 samples");
    const IndexInverter inv(stack);
    std::vector<ProfilePoint> out;
    out.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double rho = double(i) / (samples - 1);
        const double target = lens::refractive_index(cfg, rho);
        const EffectiveIndexSample s =
            target < inv.n_min() ? EffectiveIndexSample{0.0, spp_index_air(stack)} : inv.solve(target);
        out.push_back({rho, s.height_nm, s.n_eff});
    }
    return out;
}

double average_absorption(const LensConfig& cfg, const PlasmonStack& stack, int samples) {
    if (samples < 1000) throw DomainError("average_absorption: need >= 1000 radial samples");
    const auto profile = lens_height_profile(cfg, stack, samples);
    double sum = 0.0;
    for (size_t i = 0; i < profile.size(); ++i) {
        const double v = profile[i].n_eff.imag() / profile[i].n_eff.real();
        sum += (i == 0 || i + 1 == profile.size()) ? 0.5 * v : v;
    }
    return sum / (samples - 1);
}

double mirror_loss(const LensConfig& cfg, double reflectivity_sq, double n_bar) {
    if (!(reflectivity_sq > 0.0 && reflectivity_sq <= 1.0)) throw DomainError("mirror_loss: need 0 < r^2 <= 1");
    if (!(n_bar > 0.0)) throw DomainError("mirror_loss: n_bar must be positive");
    return (1.0 - reflectivity_sq) / (4.0 * kPi * n_bar * cfg.R0);
}

Estimate end_to_end_estimate(const LensConfig& cfg, const PlasmonStack& stack, double reflectivity_sq, double eta,
                             int samples) {
    Estimate e;
    e.alpha_abs = average_absorption(cfg, stack, samples);
    e.alpha_mirror = mirror_loss(cfg, reflectivity_sq, lens::radial_mean_index(cfg));
    e.alpha_total = e.alpha_abs + e.alpha_mirror;
    e.fidelity = qed::fidelity_with_freespace(cfg.R0, e.alpha_total, eta);
    e.fidelity_quoted = qed::fidelity_with_freespace(cfg.R0, e.alpha_total_quoted, eta);
    return e;
}

}  // namespace fisheye::plasmon
