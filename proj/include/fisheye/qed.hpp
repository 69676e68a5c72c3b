#pragma once

#include <optional>
#include <vector>

#include "fisheye/greens.hpp"

namespace fisheye::qed {

using greens::DiskPoint;
using lens::LensConfig;
using specfun::cplx;

struct AtomPairConfig {
    DiskPoint p1;
    DiskPoint p2;
    double lambda0 = 1.0;                 // internal unit; kept for the record
    std::optional<double> purcell_eta;    // gamma / gamma0 near the surface
    double freespace_factor = 0.5;        // fraction of gamma0 that still leaks out

    void validate() const;
};

// Antipodal pair at radius rho: (rho, phi) and (rho, phi + pi).
AtomPairConfig antipodal_pair(double rho, double phi = 0.0);

// All rates in units of Gamma0 = d^2 omega0^3 / (3 pi eps0 hbar c^3).
struct CouplingRates {
    double delta_omega = 0.0;
    double gamma = 0.0;       // single-atom decay at p1
    double gamma_coop = 0.0;
    double beta = 0.0;        // delta_omega / (gamma + gamma_coop)
    double gamma_2 = 0.0;     // single-atom decay at p2 (equal to gamma for antipodal pairs)
};

// delta_omega = 1.5 Re{(1 + i alpha)^2 G}, gamma_coop = 3 Im{(1 + i alpha)^2 G} at omega0 (1 + i alpha).
// On-site gamma = 3 Im G_reg(r, r) from greens::greens_onsite_regular; the exact on-site sum
// diverges logarithmically, and the real part of the divergence carries no decay.
// With a Purcell factor, gamma gains freespace_factor * gamma / eta.
CouplingRates coupling_rates(const LensConfig& cfg, const AtomPairConfig& atoms);

struct ModeSumOptions {
    int l_max = 0;        // 0: start at 8 ceil(Re nu)
    double tol = 1e-9;
    int l_cap = 1 << 16;
};

// Direct eigenmode sums
//   Gamma  = (3 pi / omega0^3) sum_l kappa S_l (L+ + L-),
//   dOmega = (3 pi / omega0^3) sum_l S_l [omega_l (D+ + D-)/2 - 1],
// S_l = sum_m f*(r1) f(r2). The "-1" removes the completeness sum, which vanishes for
// distinct points but spoils convergence. gamma and gamma_2 are not available from the
// sums (the on-site series diverges) and are returned as NaN.
CouplingRates rates_modesum_oracle(const LensConfig& cfg, const AtomPairConfig& atoms,
                                   const ModeSumOptions& opts = {});

// Small-alpha laws for antipodal atoms with Re nu = m + 1/2:
//   delta_omega = s 3/(8b) / (1 + (2 pi^2 R0 alpha)^2), gamma = 1.5 pi^2 R0 alpha / b, gamma_coop = 0,
// s = (-1)^m, the sign the closed form carries at the image point.
CouplingRates scaling_rates(const LensConfig& cfg, double R0_over_lambda, double alpha);

struct TwoAtomTrajectory {
    std::vector<double> times;  // units of 1 / Gamma0
    std::vector<double> pop1;
    std::vector<double> pop2;
    std::vector<double> bell_fidelity;
};

// Exact no-jump solution started in |e,g>. The Bell target is
// (|e,g> - i s |g,e>)/sqrt(2) with s = sign(delta_omega), so the overlap peaks at
// t0 = pi / (4 |delta_omega|) for either sign of the exchange.
TwoAtomTrajectory trajectory(const CouplingRates& rates, const std::vector<double>& t_grid);

double optimal_time(const CouplingRates& rates);

// F = exp(-(pi/4)|gamma/dw|) cosh((pi/4)|gamma_coop/dw|). Throws PoleError for dw = 0.
double entanglement_fidelity(const CouplingRates& rates);

// 1 - F capped at 1/2: starting from |e,g> the Bell overlap is already 1/2.
double entangling_error(const CouplingRates& rates);

// F = exp(-pi^3 R0 alpha).
double fidelity_approx(double R0_over_lambda, double alpha);

// F = exp(-pi^3 (1 + 1/(2 eta)) R0 alpha).
double fidelity_with_freespace(double R0_over_lambda, double alpha, double eta);

}  // namespace fisheye::qed
