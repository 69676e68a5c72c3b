#include "fisheye/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fisheye/error.hpp"

namespace fisheye::schrodinger {

using specfun::kPi;

Eigen::MatrixXcd BlockModel::hamiltonian() const {
    const int n = dim();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < int(modes.size()); ++j) {
        const CollectiveMode& m = modes[j];
        H(j + 1, j + 1) = cplx(m.detuning, -m.loss);
        H(0, j + 1) = H(j + 1, 0) = m.coupling;
    }
    return H;
}

double coupling_squared(const LensConfig& cfg, int l, double theta, double gamma0, double omega0) {
    const double d2 = 3.0 * kPi * gamma0 / (omega0 * omega0 * omega0);
    const double g2 = d2 * lens::eigenfrequency(cfg, l) / (cfg.b * cfg.R0 * cfg.R0 * cfg.n0 * cfg.n0);
    const double N2 = (2.0 * l + 1.0) / (8.0 * kPi) * (1.0 - specfun::legendre_poly(l, std::cos(kPi - 2.0 * theta)));
    return 2.0 * g2 * N2;
}

double coupling_squared_printed(const LensConfig& cfg, int l, double theta, double gamma0, double omega0) {
    const double K2 = 3.0 * kPi * gamma0 / (omega0 * omega0 * omega0 * cfg.b * cfg.R0 * cfg.R0 * cfg.R0);
    return K2 * (2.0 * l + 1.0) * std::sqrt(double(l) * (l + 1.0)) / (4.0 * kPi) *
           (1.0 - specfun::legendre_poly(l, std::cos(kPi - 2.0 * theta)));
}

std::pair<BlockModel, BlockModel> build_blocks(const LensConfig& cfg, double theta, double omega0, LRange l_range,
                                               double kappa, const BlockOptions& opts) {
    cfg.validate();
    if (!(kappa >= 0.0)) throw DomainError("build_blocks: kappa must be >= 0");
    if (!(opts.gamma0_over_omega0 > 0.0)) throw DomainError("build_blocks: gamma0_over_omega0 must be positive");
    if (l_range.last == 0) {
        LensConfig lossless = cfg;
        lossless.alpha = 0.0;
        l_range.last = 4 * int(std::ceil(lens::atomic_order_parameter(lossless).value.real()));
    }
    if (l_range.first < 1 || l_range.last < l_range.first) throw DomainError("build_blocks: empty l_range");

    const double gamma0 = opts.gamma0_over_omega0 * omega0;
    BlockModel odd{Parity::odd, {}, gamma0}, even{Parity::even, {}, gamma0};
    for (int l = l_range.first; l <= l_range.last; ++l) {
        double G2 = coupling_squared(cfg, l, theta, gamma0, omega0);
        if (opts.half_weight_last && l == l_range.last) G2 *= 0.5;
        CollectiveMode m{l, lens::eigenfrequency(cfg, l) - omega0, std::sqrt(std::max(G2, 0.0)), kappa};
        (l % 2 ? odd : even).modes.push_back(m);
    }
    return {odd, even};
}

Eigen::MatrixXcd full_hamiltonian(const BlockModel& odd, const BlockModel& even) {
    std::vector<std::pair<CollectiveMode, bool>> all;
    for (const auto& m : odd.modes) all.push_back({m, true});
    for (const auto& m : even.modes) all.push_back({m, false});
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first.l < b.first.l; });
    const int n = 2 + int(all.size());
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    const double r = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < int(all.size()); ++j) {
        const CollectiveMode& m = all[j].first;
        const int k = j + 2;
        H(k, k) = cplx(m.detuning, -m.loss);
        // sigma_o couples with +G to both atoms, sigma_e with +G and -G.
        const double sb = all[j].second ? 1.0 : -1.0;
        H(0, k) = H(k, 0) = r * m.coupling;
        H(1, k) = H(k, 1) = sb * r * m.coupling;
    }
    return H;
}

namespace {

// Amplitudes of one block started in its atomic state.
struct BlockTrace {
    std::vector<cplx> atom;
    std::vector<double> norm;
    cplx atom_eigenvalue = 0.0;  // eigenvalue with the largest weight on the atomic state
    bool spectral = true;
};

bool lossless(const BlockModel& b) {
    return std::all_of(b.modes.begin(), b.modes.end(), [](const CollectiveMode& m) { return m.loss == 0.0; });
}

bool spectral_trace(const BlockModel& block, const std::vector<double>& t_lab, BlockTrace& out) {
    const Eigen::MatrixXcd H = block.hamiltonian();
    const int n = block.dim();
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(n);
    e0(0) = 1.0;

    Eigen::MatrixXcd V;
    Eigen::VectorXcd omega, c;
    if (lossless(block)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        if (es.info() != Eigen::Success) return false;
        V = es.eigenvectors();
        omega = es.eigenvalues().cast<cplx>();
        c = V.adjoint() * e0;
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H);
        if (es.info() != Eigen::Success) return false;
        V = es.eigenvectors();
        omega = es.eigenvalues();
        c = V.partialPivLu().solve(e0);
    }
    const double hnorm = H.norm();
    if ((H * V - V * omega.asDiagonal()).norm() > 1e-8 * hnorm) return false;
    if ((V * c - e0).norm() > 1e-8) return false;

    int dominant = 0;
    for (int j = 1; j < n; ++j)
        if (std::abs(V(0, j) * c(j)) > std::abs(V(0, dominant) * c(dominant))) dominant = j;
    out.atom_eigenvalue = omega(dominant);

    Eigen::VectorXcd coeff(n);
    for (double t : t_lab) {
        for (int j = 0; j < n; ++j) coeff(j) = c(j) * std::exp(cplx(0.0, -1.0) * omega(j) * t);
        const Eigen::VectorXcd psi = V * coeff;
        out.atom.push_back(psi(0));
        out.norm.push_back(psi.squaredNorm());
    }
    out.spectral = true;
    return true;
}

void rk4_trace(const BlockModel& block, const std::vector<double>& t_lab, BlockTrace& out) {
    const Eigen::MatrixXcd H = block.hamiltonian();
    const Eigen::MatrixXcd A = cplx(0.0, -1.0) * H;
    const int n = block.dim();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    psi(0) = 1.0;
    const double dt_max = 0.2 / std::max(H.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
    const double span = t_lab.empty() ? 0.0 : t_lab.back() - t_lab.front();
    if (span / dt_max > 5e7) throw ConvergenceError("evolve: RK4 fallback would need too many steps");

    double t = t_lab.empty() ? 0.0 : t_lab.front();
    if (t != 0.0) throw DomainError("evolve: time grid must start at 0");
    for (double target : t_lab) {
        const int steps = int(std::ceil((target - t) / dt_max));
        if (steps > 0) {
            const double h = (target - t) / steps;
            for (int s = 0; s < steps; ++s) {
                const Eigen::VectorXcd k1 = A * psi;
                const Eigen::VectorXcd k2 = A * (psi + 0.5 * h * k1);
                const Eigen::VectorXcd k3 = A * (psi + 0.5 * h * k2);
                const Eigen::VectorXcd k4 = A * (psi + h * k3);
                psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            t = target;
        }
        out.atom.push_back(psi(0));
        out.norm.push_back(psi.squaredNorm());
    }
    // Dominant atomic eigenvalue still needed for the exchange sign.
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H);
    int dominant = 0;
    for (int j = 1; j < n; ++j)
        if (std::norm(es.eigenvectors()(0, j)) > std::norm(es.eigenvectors()(0, dominant))) dominant = j;
    out.atom_eigenvalue = es.eigenvalues()(dominant);
    out.spectral = false;
}

BlockTrace trace_block(const BlockModel& block, const std::vector<double>& t_lab, Integrator integrator) {
    BlockTrace out;
    if (integrator == Integrator::automatic && spectral_trace(block, t_lab, out)) return out;
    out = BlockTrace{};
    rk4_trace(block, t_lab, out);
    return out;
}

}  // namespace

SimResult evolve(const BlockModel& odd, const BlockModel& even, const std::vector<double>& t_grid, Integrator integrator) {
    if (odd.parity != Parity::odd || even.parity != Parity::even) throw DomainError("evolve: blocks out of order");
    if (!(odd.gamma0 > 0.0) || odd.gamma0 != even.gamma0) throw DomainError("evolve: inconsistent gamma0");
    if (t_grid.empty()) throw DomainError("evolve: empty time grid");

    std::vector<double> t_lab(t_grid.size());
    std::transform(t_grid.begin(), t_grid.end(), t_lab.begin(), [&](double t) { return t / odd.gamma0; });
    const BlockTrace to = trace_block(odd, t_lab, integrator);
    const BlockTrace te = trace_block(even, t_lab, integrator);

    SimResult r;
    r.times = t_grid;
    r.method = (to.spectral && te.spectral) ? "eigen" : "rk4";
    r.spectral_delta_omega = 0.5 * (to.atom_eigenvalue - te.atom_eigenvalue).real() / odd.gamma0;
    const cplx phase(0.0, r.spectral_delta_omega < 0.0 ? -1.0 : 1.0);
    for (size_t i = 0; i < t_grid.size(); ++i) {
        const cplx a = 0.5 * (to.atom[i] + te.atom[i]);
        const cplx b = 0.5 * (to.atom[i] - te.atom[i]);
        r.amp_a.push_back(a);
        r.amp_b.push_back(b);
        r.pop1.push_back(std::norm(a));
        r.pop2.push_back(std::norm(b));
        r.bell_fidelity.push_back(0.5 * std::norm(a + phase * b));
        r.norm.push_back(0.5 * (to.norm[i] + te.norm[i]));
    }

    const auto& F = r.bell_fidelity;
    const size_t im = size_t(std::max_element(F.begin(), F.end()) - F.begin());
    r.max_fidelity = F[im];
    r.t_max_fidelity = t_grid[im];
    if (im > 0 && im + 1 < F.size()) {
        const double h = t_grid[im + 1] - t_grid[im];
        const double d1 = 0.5 * (F[im + 1] - F[im - 1]);
        const double d2 = F[im + 1] - 2.0 * F[im] + F[im - 1];
        if (d2 < 0.0 && std::abs(t_grid[im] - t_grid[im - 1] - h) < 1e-9 * h) {
            const double s = -d1 / d2;
            r.max_fidelity = F[im] - 0.5 * d1 * d1 / d2;
            r.t_max_fidelity = t_grid[im] + s * h;
        }
    }

    r.extracted_delta_omega = std::numeric_limits<double>::quiet_NaN();
    for (size_t i = 1; i < t_grid.size(); ++i) {
        const double d0 = r.pop1[i - 1] - r.pop2[i - 1], d1 = r.pop1[i] - r.pop2[i];
        if (d0 > 0.0 && d1 <= 0.0) {
            const double tc = t_grid[i - 1] + (t_grid[i] - t_grid[i - 1]) * d0 / (d0 - d1);
            r.extracted_delta_omega = kPi / (4.0 * tc);
            break;
        }
    }
    return r;
}

std::vector<double> default_time_grid(double delta_omega, int points) {
    if (delta_omega == 0.0 || points < 2) throw DomainError("default_time_grid: need delta_omega != 0 and >= 2 points");
    const double T = 3.0 * kPi / std::abs(delta_omega);
    std::vector<double> t(points);
    for (int i = 0; i < points; ++i) t[i] = T * i / (points - 1);
    return t;
}

CompareReport compare_to_analytics(const LensConfig& cfg, double rho, const CompareOptions& opts) {
    const qed::CouplingRates rates = qed::coupling_rates(cfg, qed::antipodal_pair(rho));
    const auto [odd, even] = build_blocks(cfg, lens::stereo_theta(rho), lens::kOmega0, opts.l_range,
                                          cfg.alpha * lens::kOmega0, opts.blocks);
    const SimResult sim = evolve(odd, even, default_time_grid(rates.delta_omega, opts.time_points));

    CompareReport rep;
    rep.F_analytic = qed::entanglement_fidelity(rates);
    rep.error_analytic = qed::entangling_error(rates);
    rep.F_numeric = sim.max_fidelity;
    rep.error_numeric = 1.0 - sim.max_fidelity;
    rep.relative_deviation = std::abs(rep.error_numeric - rep.error_analytic) / rep.error_analytic;
    rep.delta_omega_numeric = std::abs(sim.spectral_delta_omega);
    rep.delta_omega_analytic = std::abs(rates.delta_omega);
    return rep;
}

}  // namespace fisheye::schrodinger
