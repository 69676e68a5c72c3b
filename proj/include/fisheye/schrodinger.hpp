#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fisheye/qed.hpp"

namespace fisheye::schrodinger {

using lens::LensConfig;
using specfun::cplx;

enum class Parity { odd, even };

struct CollectiveMode {
    int l = 0;
    double detuning = 0.0;  // omega_l - omega0
    double coupling = 0.0;  // G_l >= 0
    double loss = 0.0;      // kappa
};

// One parity block of the single-excitation Hamiltonian: an arrowhead matrix with the
// atomic state |o> or |e> in row 0 coupled to every collective mode A_l of that parity.
// Frequencies are in lab units (omega0 = 2 pi); gamma0 converts times and rates to
// units of Gamma0.
struct BlockModel {
    Parity parity = Parity::odd;
    std::vector<CollectiveMode> modes;
    double gamma0 = 0.0;

    int dim() const { return 1 + int(modes.size()); }
    Eigen::MatrixXcd hamiltonian() const;
};

struct LRange {
    int first = 1;
    int last = 0;  // 0: 4 ceil(Re nu)
};

struct BlockOptions {
    double gamma0_over_omega0 = 1e-6;  // weak-coupling scale of the dipole
    // Give the highest retained mode half its coupling weight. Truncated sums over l
    // alternate between even and odd cut-offs; the half-weight end averages the two.
    bool half_weight_last = true;
};

// G_l^2 = 2 g_l^2 N_l^2 with g_l^2 = (d^2/hbar eps0) omega_l / (b R0^2 n0^2) and
// N_l^2 = (2l+1)/(8 pi) [1 - P_l(cos(pi - 2 theta))]; d^2/(hbar eps0) = 3 pi Gamma0 / omega0^3.
double coupling_squared(const LensConfig& cfg, int l, double theta, double gamma0, double omega0);

// Simplified form: (3 pi Gamma0 / (omega0^3 b R0^3)) (2l+1) sqrt(l(l+1)) / (4 pi) [1 - P_l(cos(pi - 2 theta))]
// for n0 = 1; kept separately to cross-check coupling_squared.
double coupling_squared_printed(const LensConfig& cfg, int l, double theta, double gamma0, double omega0);

// Odd-l modes go to the odd block (coupled to sigma_o), even-l modes to the even block.
std::pair<BlockModel, BlockModel> build_blocks(const LensConfig& cfg, double theta, double omega0,
                                               LRange l_range, double kappa, const BlockOptions& opts = {});

// Hamiltonian in the original basis {|e,g>, |g,e>, |l> ...}, modes ordered by l.
Eigen::MatrixXcd full_hamiltonian(const BlockModel& odd, const BlockModel& even);

enum class Integrator { automatic, rk4 };

struct SimResult {
    std::vector<double> times;  // units of 1 / Gamma0
    std::vector<cplx> amp_a;    // |e,g>
    std::vector<cplx> amp_b;    // |g,e>
    std::vector<double> pop1, pop2, bell_fidelity, norm;
    double max_fidelity = 0.0;
    double t_max_fidelity = 0.0;
    double extracted_delta_omega = 0.0;  // pi / (4 t_cross), t_cross the first pop1 = pop2; NaN if none
    double spectral_delta_omega = 0.0;   // Re(E_o - E_e)/2 of the atom-like eigenvalues, signed
    std::string method;
};

// Evolve |e,g> = (|o> + |e>)/sqrt(2). Each block is diagonalised (Hermitian solver for
// kappa = 0); if the eigen-residual exceeds 1e-8 ||H|| the block falls back to RK4.
SimResult evolve(const BlockModel& odd, const BlockModel& even, const std::vector<double>& t_grid,
                 Integrator integrator = Integrator::automatic);

struct CompareReport {
    double F_numeric = 0.0;
    double F_analytic = 0.0;           // closed form from qed::entanglement_fidelity
    double error_numeric = 0.0;        // 1 - F_numeric
    double error_analytic = 0.0;       // qed::entangling_error, capped at 1/2
    double relative_deviation = 0.0;   // |error_numeric - error_analytic| / error_analytic
    double delta_omega_numeric = 0.0;  // |.|, from the spectral splitting
    double delta_omega_analytic = 0.0;
};

struct CompareOptions {
    LRange l_range{};
    BlockOptions blocks{};
    int time_points = 2000;
};

// Antipodal atoms at radius rho; the lens loss cfg.alpha sets kappa = alpha omega0.
CompareReport compare_to_analytics(const LensConfig& cfg, double rho, const CompareOptions& opts = {});

// Uniform grid over [0, 3 pi / |delta_omega|] in units of 1 / Gamma0.
std::vector<double> default_time_grid(double delta_omega, int points = 2000);

}  // namespace fisheye::schrodinger
