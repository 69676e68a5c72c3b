// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "commands.hpp"
#include "fisheye/greens.hpp"
#include "fisheye/plasmon.hpp"
#include "fisheye/qed.hpp"
#include "fisheye/schrodinger.hpp"

using namespace fisheye;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int threads() { return int(std::max(1u, std::min(8u, std::thread::hardware_concurrency()))); }

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

lens::LensConfig lens_at(double R0, double alpha = 0.0) {
    lens::LensConfig cfg;
    cfg.R0 = R0;
    cfg.alpha = alpha;
    return cfg;
}

double re_nu(double R0) { return lens::atomic_order_parameter(lens_at(R0)).value.real(); }

Outcome fredholm() {
    const cli::CheckResult r = cli::check_fredholm({}, 5, threads());
    return {r.pass, fmt("worst rel = %.3g over %s (limit 1e-6)", r.value, r.detail.c_str())};
}

Outcome order_parameter() {
    const double radii[] = {1.749, 3.34, 8.11, 14.48};
    const double target[] = {10.5, 20.5, 50.5, 90.5};
    bool ok = true;
    std::string d;
    for (int i = 0; i < 4; ++i) {
        const double v = re_nu(radii[i]);
        ok &= std::abs(v - target[i]) <= 0.05;
        d += fmt("%s%.3f->%.3f", i ? ", " : "", radii[i], v);
    }
    d += fmt(" (R0 = 14.5 itself gives %.3f)", re_nu(14.5));
    return {ok, d};
}

Outcome ddi_peak() {
    const double b = 0.1, expected = 3.0 / (8.0 * b);
    std::vector<double> h;
    bool ok = true;
    std::string d;
    for (double R0 : cli::default_ddi_radii()) {
        const cli::PeakStats s = cli::antipodal_peak(R0, b, 1.0);
        const double a = std::abs(s.height);
        h.push_back(a);
        ok &= std::abs(a - expected) / expected <= 0.02;
        ok &= s.fwhm >= 0.4 && s.fwhm <= 0.6;
        d += fmt("%snu=%.1f peak %.3f fwhm %.3f", h.size() > 1 ? "; " : "", re_nu(R0), a, s.fwhm);
    }
    const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
    const double spread = (*hi - *lo) / *hi;
    ok &= spread < 0.02;
    d += fmt("; target %.2f +- 2%%, spread %.1f%% (limit 2%%)", expected, 100.0 * spread);
    return {ok, d};
}

Outcome lossy_oracle() {
    const cli::CheckResult r = cli::check_lossy_oracle();
    return {r.pass, fmt("worst rel = %.3g (limit 1e-3)", r.value)};
}

Outcome scaling_laws() {
    double worst_dw = 0.0, worst_g = 0.0, worst_coop = 0.0;
    for (double nu = 10.5; nu <= 90.5; nu += 10.0)
        for (double alpha : {1e-4, 5e-4, 1e-3}) {
            const lens::LensConfig cfg = lens_at(lens::radius_for_degree(nu), alpha);
            const qed::CouplingRates ex = qed::coupling_rates(cfg, qed::antipodal_pair(0.27));
            const qed::CouplingRates sc = qed::scaling_rates(cfg, cfg.R0, alpha);
            worst_dw = std::max(worst_dw, std::abs(sc.delta_omega - ex.delta_omega) / std::abs(ex.delta_omega));
            worst_g = std::max(worst_g, std::abs(sc.gamma - ex.gamma) / ex.gamma);
            worst_coop = std::max(worst_coop, std::abs(ex.gamma_coop) / ex.gamma);
        }
    const bool ok = worst_dw < 0.05 && worst_g < 0.05 && worst_coop < 1e-2;
    return {ok, fmt("worst rel: delta_omega %.3g, gamma %.3g (limit 0.05); gamma_coop/gamma %.3g (limit 1e-2)",
                    worst_dw, worst_g, worst_coop)};
}

Outcome fidelity_consistency() {
    double worst = 0.0;
    int n = 0;
    for (double nu = 10.5; lens::radius_for_degree(nu) <= 14.5; nu += 1.0, ++n) {
        const lens::LensConfig cfg = lens_at(lens::radius_for_degree(nu), 5e-4);
        const double exact = qed::entanglement_fidelity(qed::coupling_rates(cfg, qed::antipodal_pair(0.27)));
        worst = std::max(worst, std::abs(qed::fidelity_approx(cfg.R0, 5e-4) - exact) / exact);
    }
    const double f = qed::fidelity_approx(3.34, 5e-4);
    const bool ok = worst < 0.02 && std::abs(f - 0.9496) <= 1e-4;
    return {ok, fmt("worst rel %.3g over %d radii (limit 0.02); approx F(3.34, 5e-4) = %.5f (0.9496 +- 1e-4)", worst,
                    n, f)};
}

Outcome born_markov() {
    const double theta = lens::stereo_theta(0.27);
    const schrodinger::CompareReport head = schrodinger::compare_to_analytics(lens_at(3.34, 5e-4), 0.27);
    bool ok = head.relative_deviation < 0.15;
    std::string d = fmt("dev at (3.34, 5e-4) %.3g (limit 0.15)", head.relative_deviation);

    // "bounded": the deviation stays under twice the headline tolerance over both sweeps
    std::vector<std::function<lens::LensConfig()>> cases;
    for (int i = 0; i <= 8; ++i) {
        const double alpha = std::pow(10.0, -4.0 + 2.0 * i / 8.0);
        cases.push_back([alpha] { return lens_at(3.34, alpha); });
    }
    for (int i = 0; i <= 6; ++i) {
        const double dnu = -0.45 + 0.15 * i;
        cases.push_back([dnu] { return lens_at(lens::radius_for_degree(20.5 + dnu), 5e-4); });
    }
    std::vector<double> dev(cases.size());
    cli::parallel_for(int(cases.size()), threads(), [&](int i) {
        dev[i] = schrodinger::compare_to_analytics(cases[i](), 0.27).relative_deviation;
    });
    const double worst = *std::max_element(dev.begin(), dev.end());
    ok &= std::all_of(dev.begin(), dev.end(), [](double v) { return std::isfinite(v) && v < 0.3; });
    d += fmt("; worst over alpha and detuning sweeps %.3g (bound 0.3)", worst);

    const lens::LensConfig lossless = lens_at(3.34);
    const auto rates = qed::coupling_rates(lossless, qed::antipodal_pair(0.27));
    const auto [odd, even] = schrodinger::build_blocks(lossless, theta, lens::kOmega0, {}, 0.0);
    const auto sim = schrodinger::evolve(odd, even, schrodinger::default_time_grid(rates.delta_omega));
    const double rel = std::abs(sim.extracted_delta_omega - std::abs(rates.delta_omega)) / std::abs(rates.delta_omega);
    ok &= rel < 0.05;
    d += fmt("; kappa = 0 exchange rate rel %.3g (limit 0.05)", rel);
    return {ok, d};
}

Outcome plasmonic() {
    const plasmon::PlasmonStack stack;
    const auto sweep = plasmon::sweep_effective_index(stack, 200.0);
    const double n0 = sweep.front().n_eff.real(), n200 = sweep.back().n_eff.real();
    bool ok = std::abs(n0 - 1.02) < 0.01 && std::abs(n200 - 2.0) < 0.01;
    const plasmon::Estimate e = plasmon::end_to_end_estimate(lens_at(1.749), stack, 0.95, 3.0);
    ok &= std::abs(e.alpha_abs - 3e-3) <= 0.3 * 3e-3;
    ok &= std::abs(e.fidelity_quoted - 0.806) <= 0.005;
    return {ok, fmt("Re n(0) = %.4f, Re n(200 nm) = %.4f; alpha_abs = %.4g (3e-3 +- 30%%); F at alpha = 3.4e-3 "
                    "= %.4f (0.806 +- 0.005); mirror formula %.4g vs quoted %.1g (x%.2f), F with it %.4f",
                    n0, n200, e.alpha_abs, e.fidelity_quoted, e.alpha_mirror, e.alpha_mirror_quoted,
                    e.alpha_mirror / e.alpha_mirror_quoted, e.fidelity)};
}

Outcome properties() {
    std::vector<cli::CheckResult> checks = {cli::check_integer_degree(), cli::check_orthonormality(),
                                            cli::check_unitarity(), cli::check_parity_isolation()};
    const std::vector<double> radii = cli::default_ddi_radii();
    const std::string a = cli::format_csv(cli::ddi_sweep(radii, 0.1, 1.0, 401, 1));
    const std::string b = cli::format_csv(cli::ddi_sweep(radii, 0.1, 1.0, 401, threads()));
    const std::string c = cli::format_csv(cli::ddi_sweep(radii, 0.1, 1.0, 401, threads()));
    bool ok = a == b && b == c;
    std::string d = fmt("csv_determinism %s", ok ? "ok" : "DIFFERS");
    for (const auto& r : checks) {
        ok &= r.pass;
        d += fmt("; %s %.3g (limit %.0e)", r.name.c_str(), r.value, r.threshold);
    }
    return {ok, d};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 fredholm_equivalence", fredholm},
        {"2 order_parameter", order_parameter},
        {"3 antipodal_ddi_peak", ddi_peak},
        {"4 lossy_rate_oracle", lossy_oracle},
        {"5 scaling_laws", scaling_laws},
        {"6 fidelity_consistency", fidelity_consistency},
        {"7 born_markov_simulator", born_markov},
        {"8 plasmonic_estimate", plasmonic},
        {"9 property_suites", properties},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("[%s] %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
