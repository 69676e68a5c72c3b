#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "fisheye/lens.hpp"

namespace fisheye::plasmon {

using lens::LensConfig;
using specfun::cplx;

struct PlasmonStack {
    cplx eps_metal{-25.23, 0.589};  // silver at the SiV line
    double eps_dielectric = 3.6;    // Si3N4
    double lambda0_nm = 737.0;

    void validate() const;
    double k0() const { return 2.0 * specfun::kPi / lambda0_nm; }  // 1/nm
};

struct EffectiveIndexSample {
    double height_nm = 0.0;
    cplx n_eff;  // n + i chi
};

// Transverse wavenumbers (1/nm). Each square root is taken on the principal branch
// (Re >= 0); k_d and k_m then carry the 1/eps factors of the boundary conditions,
// so Re k_m < 0 for a metal.
struct Wavenumbers {
    cplx k_air, k_d, k_m;
};
Wavenumbers wavenumbers(cplx n_eff, const PlasmonStack& stack);

// tanh(k_d eps_d d) + (k_air k_d + k_d k_m) / (k_d^2 + k_air k_m).
cplx dispersion_residual(cplx n_eff, double d_nm, const PlasmonStack& stack);

// Flat air/metal and dielectric/metal surface plasmon indices (d = 0 and d -> infinity).
cplx spp_index_air(const PlasmonStack& stack);
cplx spp_index_dielectric(const PlasmonStack& stack);

struct SolveOptions {
    double step_nm = 0.5;     // continuation step when no seed is given
    int max_iterations = 100;
    double branch_jump = 0.05;
};

// Damped Newton on the residual. Without a seed the root is tracked from d = 0 in
// step_nm increments. Throws ConvergenceError on failure or on a jump in Re n larger
// than branch_jump between neighbouring heights.
EffectiveIndexSample solve_effective_index(double d_nm, const PlasmonStack& stack,
                                           std::optional<cplx> seed = std::nullopt, const SolveOptions& opts = {});

// Continuation sweep d = 0, step, ..., d_max.
std::vector<EffectiveIndexSample> sweep_effective_index(const PlasmonStack& stack, double d_max_nm,
                                                        const SolveOptions& opts = {});

// Re n(d) tabulated once, then inverted by bisection with Newton refinement.
class IndexInverter {
public:
    explicit IndexInverter(const PlasmonStack& stack, double d_max_nm = 300.0, const SolveOptions& opts = {});
    double n_min() const;
    double n_max() const;
    // Throws DomainError outside [n_min, n_max].
    EffectiveIndexSample solve(double n_target) const;

private:
    PlasmonStack stack_;
    SolveOptions opts_;
    std::vector<EffectiveIndexSample> table_;
};

double height_for_index(double n_target, const PlasmonStack& stack, double d_max_nm = 300.0);

struct ProfilePoint {
    double rho = 0.0;
    double height_nm = 0.0;
    cplx n_eff;
};

// d(rho) with Re n_eff(d) = 2 n0/(1 + rho^2) on a uniform rho grid. Targets below the
// bare air/metal index (the outermost ring for n0 = 1) are held at d = 0, the lowest
// index the stack can reach.
std::vector<ProfilePoint> lens_height_profile(const LensConfig& cfg, const PlasmonStack& stack, int n_radial_samples);

// (1/R0) int_0^R0 chi/n dr, trapezoid on n_radial_samples points.
double average_absorption(const LensConfig& cfg, const PlasmonStack& stack, int n_radial_samples = 1000);

// (1 - r^2) / (4 pi n_bar R0), R0 in units of lambda0.
double mirror_loss(const LensConfig& cfg, double reflectivity_sq, double n_bar);

inline constexpr double kQuotedMirrorLoss = 4e-4;
inline constexpr double kQuotedTotalLoss = 3.4e-3;

struct Estimate {
    double alpha_abs = 0.0;
    double alpha_mirror = 0.0;         // from mirror_loss
    double alpha_mirror_quoted = kQuotedMirrorLoss;
    double alpha_total = 0.0;          // alpha_abs + alpha_mirror
    double fidelity = 0.0;             // qed::fidelity_with_freespace at alpha_total
    double alpha_total_quoted = kQuotedTotalLoss;
    double fidelity_quoted = 0.0;      // same formula at the quoted total loss
};

Estimate end_to_end_estimate(const LensConfig& cfg, const PlasmonStack& stack, double reflectivity_sq, double eta,
                             int n_radial_samples = 1000);

}  // namespace fisheye::plasmon
