#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fisheye/error.hpp"
#include "fisheye/greens.hpp"
#include "fisheye/schrodinger.hpp"

namespace fisheye::cli {

using lens::DiskPoint;
using lens::LensConfig;
using specfun::cplx;
using specfun::kPi;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<double> linspace(double a, double b, int n) {
    if (n == 1) return {a};
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

std::vector<double> logspace(double a, double b, int n) {
    auto v = linspace(std::log10(a), std::log10(b), n);
    for (double& x : v) x = std::pow(10.0, x);
    return v;
}

std::vector<double> radii_for(std::initializer_list<double> nus) {
    std::vector<double> r;
    for (double nu : nus) r.push_back(lens::radius_for_degree(nu));
    return r;
}

// Point on the diameter through phi = 0: x > 0 at phi = 0, x < 0 at phi = pi.
DiskPoint on_diameter(double x, double R0) { return {std::min(1.0, std::abs(x) / R0), x >= 0.0 ? 0.0 : kPi}; }

double ddi_at(const LensConfig& cfg, DiskPoint p1, DiskPoint p2) {
    qed::AtomPairConfig atoms;
    atoms.p1 = p1;
    atoms.p2 = p2;
    return qed::coupling_rates(cfg, atoms).delta_omega;
}

}  // namespace

std::string format_csv(const Table& t) {
    std::string s;
    for (size_t i = 0; i < t.header.size(); ++i) s += (i ? "," : "") + t.header[i];
    s += '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + fmt(row[i]);
        s += '\n';
    }
    return s;
}

void sort_rows(Table& t) { std::stable_sort(t.rows.begin(), t.rows.end()); }

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (int i; (i = next++) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!first) first = std::current_exception();
                    next = n;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

std::vector<double> default_ddi_radii() { return radii_for({30.5, 50.5, 70.5, 90.5}); }
std::vector<double> default_loss_radii() { return radii_for({10.5, 20.5, 50.5, 90.5}); }

Table ddi_sweep(const std::vector<double>& radii, double b, double offset, int n_points, int threads) {
    if (n_points < 2) throw DomainError("ddi-sweep: need at least 2 points");
    struct Job {
        double R0, x;
    };
    std::vector<Job> jobs;
    for (double R0 : radii) {
        if (!(offset > 0.0 && offset < R0)) throw DomainError("ddi-sweep: offset must lie inside the disk");
        for (double x : linspace(-R0, R0, n_points))
            if (std::abs(x + (R0 - offset)) > 1e-12) jobs.push_back({R0, x});
    }
    Table t{{"R0_over_lambda", "x_over_lambda", "ddi_over_Gamma0"}, std::vector<std::vector<double>>(jobs.size())};
    parallel_for(int(jobs.size()), threads, [&](int i) {
        LensConfig cfg;
        cfg.R0 = jobs[i].R0;
        cfg.b = b;
        cfg.validate();
        const double v = ddi_at(cfg, on_diameter(-(cfg.R0 - offset), cfg.R0), on_diameter(jobs[i].x, cfg.R0));
        t.rows[i] = {jobs[i].R0, jobs[i].x, v};
    });
    sort_rows(t);
    return t;
}

PeakStats antipodal_peak(double R0, double b, double offset, int n_points) {
    LensConfig cfg;
    cfg.R0 = R0;
    cfg.b = b;
    cfg.validate();
    if (!(offset > 0.0 && offset < R0)) throw DomainError("antipodal_peak: offset must lie inside the disk");
    const DiskPoint p1 = on_diameter(-(R0 - offset), R0);
    const double centre = R0 - offset;
    const auto xs = linspace(std::max(0.0, centre - 1.25), std::min(R0, centre + 1.25), n_points);
    std::vector<double> v(xs.size());
    size_t ib = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        v[i] = ddi_at(cfg, p1, on_diameter(xs[i], R0));
        if (std::abs(v[i]) > std::abs(v[ib])) ib = i;
    }
    const double half = 0.5 * std::abs(v[ib]);
    auto crossing = [&](size_t i, size_t j) {  // |v| = half between xs[i] and xs[j]
        const double a = std::abs(v[i]) - half, c = std::abs(v[j]) - half;
        return xs[i] + (xs[j] - xs[i]) * a / (a - c);
    };
    size_t l = ib, r = ib;
    while (l > 0 && std::abs(v[l]) > half) --l;
    while (r + 1 < xs.size() && std::abs(v[r]) > half) ++r;
    if (std::abs(v[l]) > half || std::abs(v[r]) > half)
        throw ConvergenceError("antipodal_peak: half maximum not reached inside the window");
    return {xs[ib], v[ib], crossing(r - 1, r) - crossing(l, l + 1)};
}

Table dynamics(const DynamicsParams& p) {
    LensConfig cfg;
    cfg.R0 = p.R0;
    cfg.alpha = p.alpha;
    cfg.validate();
    if (p.samples < 2) throw DomainError("dynamics: need at least 2 samples");
    const qed::CouplingRates rates = qed::coupling_rates(cfg, qed::antipodal_pair(p.rho));
    if (rates.delta_omega == 0.0) throw DomainError("dynamics: no exchange coupling at this radius");
    const double t_max = p.t_max > 0.0 ? p.t_max : 10.0 * kPi / std::abs(rates.delta_omega);
    const auto grid = linspace(0.0, t_max, p.samples);
    const auto tr = qed::trajectory(rates, grid);

    size_t i0 = 0;
    const double t0 = qed::optimal_time(rates);
    for (size_t i = 0; i < grid.size(); ++i)
        if (std::abs(grid[i] - t0) < std::abs(grid[i0] - t0)) i0 = i;

    Table t{{"t_Gamma0", "pop1", "pop2", "bell_fidelity", "t0_marker"}, {}};
    schrodinger::SimResult sim;
    if (p.simulate) {
        t.header.insert(t.header.end(), {"sim_pop1", "sim_pop2", "sim_bell_fidelity"});
        const auto [odd, even] = schrodinger::build_blocks(cfg, lens::stereo_theta(p.rho), lens::kOmega0,
                                                           {1, p.l_max}, cfg.alpha * lens::kOmega0);
        sim = schrodinger::evolve(odd, even, grid);
    }
    for (size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> row{grid[i], tr.pop1[i], tr.pop2[i], tr.bell_fidelity[i], i == i0 ? 1.0 : 0.0};
        if (p.simulate) row.insert(row.end(), {sim.pop1[i], sim.pop2[i], sim.bell_fidelity[i]});
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

struct FidelityPoint {
    double R0, alpha, x;
};

Table fidelity_table(const FidelityParams& p, const std::vector<FidelityPoint>& pts, bool with_radius) {
    Table t;
    if (with_radius) t.header.push_back("R0_over_lambda");
    t.header.insert(t.header.end(), {"x", "one_minus_F_analytic", "F_approx"});
    if (p.simulate) t.header.push_back("one_minus_F_numeric");
    t.rows.resize(pts.size());
    parallel_for(int(pts.size()), p.threads, [&](int i) {
        LensConfig cfg;
        cfg.R0 = pts[i].R0;
        cfg.alpha = pts[i].alpha;
        cfg.validate();
        const auto rates = qed::coupling_rates(cfg, qed::antipodal_pair(p.rho));
        std::vector<double> row;
        if (with_radius) row.push_back(cfg.R0);
        row.insert(row.end(), {pts[i].x, qed::entangling_error(rates), qed::fidelity_approx(cfg.R0, cfg.alpha)});
        if (p.simulate) {
            schrodinger::CompareOptions co;
            co.l_range.last = p.l_max;
            row.push_back(schrodinger::compare_to_analytics(cfg, p.rho, co).error_numeric);
        }
        t.rows[i] = std::move(row);
    });
    sort_rows(t);
    return t;
}

}  // namespace

Table fidelity_vs_loss(const FidelityParams& p) {
    if (!(p.alpha_min > 0.0 && p.alpha_max >= p.alpha_min)) throw DomainError("fidelity: bad alpha range");
    if (p.samples < 1) throw DomainError("fidelity: need at least 1 sample");
    std::vector<FidelityPoint> pts;
    for (double R0 : p.radii.empty() ? default_loss_radii() : p.radii)
        for (double a : logspace(p.alpha_min, p.alpha_max, p.samples)) pts.push_back({R0, a, a});
    return fidelity_table(p, pts, true);
}

Table fidelity_vs_detuning(const FidelityParams& p) {
    if (!(p.detuning_max > 0.0 && p.detuning_max < 0.5)) throw DomainError("fidelity: detuning must lie in (0, 0.5)");
    if (p.samples < 1) throw DomainError("fidelity: need at least 1 sample");
    std::vector<FidelityPoint> pts;
    for (double dn : linspace(-p.detuning_max, p.detuning_max, p.samples))
        pts.push_back({lens::radius_for_degree(p.nu_center + dn), p.alpha, dn});
    return fidelity_table(p, pts, false);
}

Table fidelity_vs_radius(const FidelityParams& p) {
    if (!(p.nu_min >= 0.5 && p.nu_max >= p.nu_min)) throw DomainError("fidelity: bad order-parameter range");
    std::vector<FidelityPoint> pts;
    for (double nu = std::ceil(p.nu_min - 0.5) + 0.5; nu <= p.nu_max + 1e-9; nu += 1.0) {
        const double R0 = lens::radius_for_degree(nu);
        pts.push_back({R0, p.alpha, R0});
    }
    return fidelity_table(p, pts, false);
}

Table plasmon_index_sweep(const plasmon::PlasmonStack& stack, double d_max_nm, double step_nm) {
    plasmon::SolveOptions opts;
    opts.step_nm = step_nm;
    Table t{{"d_nm", "n_eff", "chi"}, {}};
    for (const auto& s : plasmon::sweep_effective_index(stack, d_max_nm, opts))
        t.rows.push_back({s.height_nm, s.n_eff.real(), s.n_eff.imag()});
    return t;
}

KeyValues plasmon_estimate(const plasmon::PlasmonStack& stack, const EstimateParams& p) {
    LensConfig cfg;
    cfg.R0 = p.R0;
    const plasmon::Estimate e = plasmon::end_to_end_estimate(cfg, stack, p.reflectivity_sq, p.eta, p.samples);
    const double alpha = p.recomputed_mirror_loss ? e.alpha_total : e.alpha_total_quoted;
    const double F = p.recomputed_mirror_loss ? e.fidelity : e.fidelity_quoted;
    const double F_other = p.recomputed_mirror_loss ? e.fidelity_quoted : e.fidelity;
    return {{"alpha_abs", e.alpha_abs},
            {"alpha_mirror_formula", e.alpha_mirror},
            {"alpha_mirror_quoted", e.alpha_mirror_quoted},
            {"mirror_formula_over_quoted", e.alpha_mirror / e.alpha_mirror_quoted},
            {"alpha_total", alpha},
            {"F", F},
            {"F_alternative", F_other}};
}

std::string format_key_values(const KeyValues& kv) {
    std::string s = "quantity,value\n";
    for (const auto& [k, v] : kv) s += k + "," + fmt(v) + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// validation suite

CheckResult check_fredholm(const std::vector<double>& radii_in, int grid, int threads, const GreensFn& closed_form) {
    const auto radii = radii_in.empty() ? radii_for({10.5, 20.5, 50.5}) : radii_in;
    const GreensFn closed = closed_form ? closed_form : [](const LensConfig& c, DiskPoint a, DiskPoint b, cplx w) {
        return greens::greens_zz(c, a, b, w).value;
    };
    struct Job {
        double R0;
        DiskPoint p1, p2;
    };
    std::vector<Job> jobs;
    const auto r1 = linspace(0.1, 0.9, grid), r2 = linspace(0.15, 0.85, grid);
    for (double R0 : radii)
        for (int i = 0; i < grid; ++i)
            for (int j = 0; j < grid; ++j) {
                DiskPoint a{r1[i], 0.3 * i}, b{r2[j], 2.0 + 0.7 * j};
                if (greens::xi_pair(a, b).direct < -0.99) b.phi += 0.5 * kPi;  // keep clear of the source
                jobs.push_back({R0, a, b});
            }
    std::vector<double> err(jobs.size());
    parallel_for(int(jobs.size()), threads, [&](int k) {
        LensConfig cfg;
        cfg.R0 = jobs[k].R0;
        const cplx g = closed(cfg, jobs[k].p1, jobs[k].p2, lens::kOmega0);
        const cplx m = greens::greens_modesum(cfg, jobs[k].p1, jobs[k].p2, lens::kOmega0).g.value;
        err[k] = std::abs(g - m) / std::abs(g);
    });
    const double worst = *std::max_element(err.begin(), err.end());
    return {"fredholm_equivalence", worst < 1e-6, worst, 1e-6,
            std::to_string(jobs.size()) + " point pairs, " + std::to_string(radii.size()) + " radii"};
}

CheckResult check_integer_degree(int l_max, int points) {
    double worst = 0.0;
    for (int l = 0; l <= l_max; ++l)
        for (double x : linspace(-0.98, 1.0, points)) {
            const double ref = specfun::legendre_poly(l, x);
            const cplx v = specfun::legendre_nu({cplx(l, 0.0)}, x);
            worst = std::max(worst, std::abs(v - ref));
        }
    return {"integer_degree_reduction", worst < 1e-10, worst, 1e-10,
            "l <= " + std::to_string(l_max) + ", " + std::to_string(points) + " x points"};
}

CheckResult check_orthonormality(int l_max) {
    LensConfig cfg;
    std::vector<lens::ModeIndex> modes;
    for (int l = 1; l <= l_max; ++l)
        for (int m : lens::allowed_m(l)) modes.push_back({l, m});
    double worst = 0.0;
    for (size_t i = 0; i < modes.size(); ++i)
        for (size_t j = 0; j < modes.size(); ++j) {
            const cplx v = lens::orthonormality_check(cfg, modes[i], modes[j]);
            worst = std::max(worst, std::abs(v - (i == j ? 1.0 : 0.0)));
        }
    return {"orthonormality", worst < 1e-6, worst, 1e-6, std::to_string(modes.size()) + " modes, l <= " + std::to_string(l_max)};
}

CheckResult check_unitarity(double nu, double rho) {
    LensConfig cfg;
    cfg.R0 = lens::radius_for_degree(nu);
    const auto [odd, even] = schrodinger::build_blocks(cfg, lens::stereo_theta(rho), lens::kOmega0, {}, 0.0);
    const auto rates = qed::coupling_rates(cfg, qed::antipodal_pair(rho));
    const auto sim = schrodinger::evolve(odd, even, schrodinger::default_time_grid(rates.delta_omega));
    double worst = 0.0;
    for (double n : sim.norm) worst = std::max(worst, std::abs(n - 1.0));
    return {"unitarity_kappa0", worst < 1e-10, worst, 1e-10, "nu = " + fmt(nu) + ", method " + sim.method};
}

CheckResult check_parity_isolation(double nu, double rho) {
    LensConfig cfg;
    cfg.R0 = lens::radius_for_degree(nu);
    const auto [odd, even] = schrodinger::build_blocks(cfg, lens::stereo_theta(rho), lens::kOmega0, {}, 0.0);
    const Eigen::MatrixXcd H = schrodinger::full_hamiltonian(odd, even);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    const Eigen::MatrixXcd& V = es.eigenvectors();

    // Mode rows of the full basis in order of l.
    std::vector<int> ls;
    for (const auto& m : odd.modes) ls.push_back(m.l);
    for (const auto& m : even.modes) ls.push_back(m.l);
    std::sort(ls.begin(), ls.end());

    const auto rates = qed::coupling_rates(cfg, qed::antipodal_pair(rho));
    const auto grid = schrodinger::default_time_grid(rates.delta_omega, 200);
    double worst = 0.0;
    for (int parity = 0; parity < 2; ++parity) {
        // |o> = (|a> + |b>)/sqrt2 must stay out of even-l modes, |e> out of odd-l modes.
        Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(H.rows());
        psi0(0) = 1.0 / std::sqrt(2.0);
        psi0(1) = (parity == 0 ? 1.0 : -1.0) / std::sqrt(2.0);
        const Eigen::VectorXcd c = V.adjoint() * psi0;
        for (double t : grid) {
            const double t_lab = t / odd.gamma0;
            Eigen::VectorXcd ph(c.size());
            for (int k = 0; k < c.size(); ++k) ph(k) = c(k) * std::polar(1.0, -es.eigenvalues()(k) * t_lab);
            const Eigen::VectorXcd psi = V * ph;
            for (size_t j = 0; j < ls.size(); ++j)
                if ((ls[j] % 2 == 0) == (parity == 0)) worst = std::max(worst, std::norm(psi(2 + int(j))));
        }
    }
    return {"parity_block_isolation", worst < 1e-12, worst, 1e-12, "cross-parity mode population"};
}

CheckResult check_lossy_oracle() {
    double worst = 0.0;
    for (double alpha : {1e-4, 1e-3}) {
        LensConfig cfg;
        cfg.R0 = 3.34;
        cfg.alpha = alpha;
        const auto atoms = qed::antipodal_pair(0.27);
        const auto a = qed::coupling_rates(cfg, atoms);
        const auto b = qed::rates_modesum_oracle(cfg, atoms);
        worst = std::max({worst, std::abs(a.delta_omega - b.delta_omega) / std::abs(a.delta_omega),
                          std::abs(a.gamma_coop - b.gamma_coop) / std::abs(a.gamma_coop)});
    }
    return {"lossy_rate_oracle", worst < 1e-3, worst, 1e-3, "alpha in {1e-4, 1e-3}, R0 = 3.34"};
}

std::vector<CheckResult> run_validation(const ValidateOptions& opts) {
    std::vector<CheckResult> out;
    if (opts.quick) {
        out.push_back(check_fredholm(radii_for({20.5}), 3, opts.threads, opts.closed_form));
        out.push_back(check_integer_degree(8, 20));
        out.push_back(check_orthonormality(4));
        out.push_back(check_unitarity(10.5));
        out.push_back(check_parity_isolation(10.5));
    } else {
        out.push_back(check_fredholm({}, 5, opts.threads, opts.closed_form));
        out.push_back(check_integer_degree());
        out.push_back(check_orthonormality());
        out.push_back(check_unitarity());
        out.push_back(check_parity_isolation());
        out.push_back(check_lossy_oracle());
    }
    return out;
}

std::string format_checks(const std::vector<CheckResult>& checks) {
    std::ostringstream os;
    for (const auto& c : checks) {
        char line[256];
        std::snprintf(line, sizeof line, "%-26s %s  worst %.3e (limit %.1e)  %s\n", c.name.c_str(),
                      c.pass ? "PASS" : "FAIL", c.value, c.threshold, c.detail.c_str());
        os << line;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// command line

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Maxwell fish-eye lens: Green's functions, coupling rates and entanglement fidelity", "fisheye"};
    app.set_config("--config", "", "key = value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_path;
    bool quick = false, simulate = false, recomputed = false;
    int l_max = 0, samples = 0;
    int threads = int(std::max(1u, std::thread::hardware_concurrency()));
    std::vector<double> radii;
    double b = 0.1, offset = 1.0, alpha = 5e-4, rho = 0.27, nu_center = 20.5, t_max = 0.0;
    double alpha_min = 1e-5, alpha_max = 1e-2, detuning_max = 0.45, nu_min = 10.5, nu_max = 90.5;
    plasmon::PlasmonStack stack;
    double eps_metal_re = stack.eps_metal.real(), eps_metal_im = stack.eps_metal.imag();
    double d_max = 200.0, d_step = 0.5, reflectivity_sq = 0.95, eta = 3.0;

    app.add_option("--out", out_path, "write output to FILE instead of stdout");
    app.add_flag("--quick", quick, "validate: run the fast subset");
    app.add_flag("--simulate", simulate, "dynamics/fidelity: add Schrodinger-simulator columns");
    app.add_flag("--recomputed-mirror-loss", recomputed, "plasmon estimate: use the mirror-loss formula for F");
    app.add_option("--l-max", l_max, "simulator: highest mode l (0 = 4 ceil(Re nu))")->check(CLI::NonNegativeNumber);
    app.add_option("--samples", samples, "points per sweep (0 = command default)")->check(CLI::NonNegativeNumber);
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--R0", radii, "lens radii / lambda0 (comma separated)")->delimiter(',');
    app.add_option("--b", b, "lens thickness / lambda0");
    app.add_option("--offset", offset, "ddi-sweep: distance of atom 1 from the mirror / lambda0");
    app.add_option("--alpha", alpha, "loss ratio kappa / omega0");
    app.add_option("--alpha-min", alpha_min, "fidelity vs-loss: smallest alpha");
    app.add_option("--alpha-max", alpha_max, "fidelity vs-loss: largest alpha");
    app.add_option("--detuning-max", detuning_max, "fidelity vs-detuning: largest |Re nu - nu_center|");
    app.add_option("--nu-center", nu_center, "order parameter used when --R0 is absent");
    app.add_option("--nu-min", nu_min, "fidelity vs-radius: smallest order parameter");
    app.add_option("--nu-max", nu_max, "fidelity vs-radius: largest order parameter");
    app.add_option("--rho", rho, "radial position of the antipodal atoms, r / R0");
    app.add_option("--t-max", t_max, "dynamics: final time in units of 1/Gamma0 (0 = ten half-periods)");
    app.add_option("--eps-metal-re", eps_metal_re, "plasmon: Re eps of the metal");
    app.add_option("--eps-metal-im", eps_metal_im, "plasmon: Im eps of the metal");
    app.add_option("--eps-dielectric", stack.eps_dielectric, "plasmon: eps of the dielectric layer");
    app.add_option("--lambda-nm", stack.lambda0_nm, "plasmon: vacuum wavelength in nm");
    app.add_option("--d-max", d_max, "plasmon index-sweep: largest height in nm");
    app.add_option("--d-step", d_step, "plasmon index-sweep: height step in nm");
    app.add_option("--reflectivity-sq", reflectivity_sq, "plasmon estimate: mirror reflectivity r^2");
    app.add_option("--eta", eta, "plasmon estimate: Purcell factor");

    auto* validate = app.add_subcommand("validate", "run the invariant suite; exit 1 on any failure");
    auto* ddi = app.add_subcommand("ddi-sweep", "delta_omega / Gamma0 along the lens diameter");
    auto* dyn = app.add_subcommand("dynamics", "two-atom populations and Bell fidelity in time");
    auto* fid = app.add_subcommand("fidelity", "entangling error versus loss, detuning or radius");
    auto* pla = app.add_subcommand("plasmon", "plasmonic lens: effective index sweep or loss estimate");
    std::string fid_mode, pla_mode;
    fid->add_option("mode", fid_mode, "vs-loss | vs-detuning | vs-radius")
        ->required()
        ->check(CLI::IsMember({"vs-loss", "vs-detuning", "vs-radius"}));
    pla->add_option("mode", pla_mode, "index-sweep | estimate")->required()->check(CLI::IsMember({"index-sweep", "estimate"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadArguments;
    }

    auto emit = [&](const std::string& text) {
        if (out_path.empty()) {
            out << text;
            return;
        }
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw DomainError("cannot open output file " + out_path);
        f << text;
    };
    auto warn_thin = [&](double radius) {
        LensConfig cfg;
        cfg.R0 = radius;
        cfg.b = b;
        if (!cfg.thin_disk_ok()) err << "warning: b = " << b << " is not thin compared with lambda0\n";
    };

    try {
        if (*validate) {
            const auto checks = run_validation({quick, threads, {}});
            emit(format_checks(checks));
            const bool ok = std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
            return ok ? kOk : kValidationFailed;
        }
        if (*ddi) {
            const auto rs = radii.empty() ? default_ddi_radii() : radii;
            warn_thin(rs.front());
            emit(format_csv(ddi_sweep(rs, b, offset, samples ? samples : 801, threads)));
        } else if (*dyn) {
            DynamicsParams p;
            p.R0 = radii.empty() ? lens::radius_for_degree(nu_center) : radii.front();
            p.alpha = alpha;
            p.rho = rho;
            p.t_max = t_max;
            p.samples = samples ? samples : 2000;
            p.simulate = simulate;
            p.l_max = l_max;
            emit(format_csv(dynamics(p)));
        } else if (*fid) {
            FidelityParams p;
            p.radii = radii;
            p.alpha = alpha;
            p.alpha_min = alpha_min;
            p.alpha_max = alpha_max;
            p.detuning_max = detuning_max;
            p.nu_center = nu_center;
            p.nu_min = nu_min;
            p.nu_max = nu_max;
            p.rho = rho;
            p.simulate = simulate;
            p.l_max = l_max;
            p.threads = threads;
            if (fid_mode == "vs-loss") {
                p.samples = samples ? samples : 13;
                emit(format_csv(fidelity_vs_loss(p)));
            } else if (fid_mode == "vs-detuning") {
                p.samples = samples ? samples : 19;
                emit(format_csv(fidelity_vs_detuning(p)));
            } else {
                emit(format_csv(fidelity_vs_radius(p)));
            }
        } else if (*pla) {
            stack.eps_metal = cplx(eps_metal_re, eps_metal_im);
            if (pla_mode == "index-sweep") {
                emit(format_csv(plasmon_index_sweep(stack, d_max, d_step)));
            } else {
                EstimateParams p;
                p.R0 = radii.empty() ? 1.749 : radii.front();
                p.reflectivity_sq = reflectivity_sq;
                p.eta = eta;
                p.samples = samples ? samples : 1000;
                p.recomputed_mirror_loss = recomputed;
                emit(format_key_values(plasmon_estimate(stack, p)));
            }
        }
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kNoConvergence;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kBadArguments;
    }
    return kOk;
}

}  // namespace fisheye::cli
