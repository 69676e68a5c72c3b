#pragma once

#include "fisheye/lens.hpp"

namespace fisheye::greens {

using lens::DiskPoint;
using lens::LensConfig;
using specfun::ComplexDegree;
using specfun::cplx;

struct GreensValue {
    cplx value;  // 1 / lambda0
};

// xi = (|zeta|^2 - 1)/(|zeta|^2 + 1), zeta = (a1 - a2)/(a1 conj(a2) + 1).
// A vanishing denominator is the limit xi = +1.
double xi(cplx alpha1, cplx alpha2);

// Both arguments of the Legendre functions in the closed form:
// direct = xi(a1, a2) = -cos(theta_12) and image = xi(a1, 1/conj(a2)) = -cos(theta'_12),
// where theta'_12 is measured to the reflected point (pi - theta2, phi2).
struct XiPair {
    double direct;
    double image;
};
XiPair xi_pair(DiskPoint p1, DiskPoint p2);

// G_zz = -[P_nu(xi_direct) - P_nu(xi_image)] / (4 b sin(pi nu)).
GreensValue greens_zz(const LensConfig& cfg, DiskPoint p1, DiskPoint p2, cplx omega);
GreensValue greens_zz(const LensConfig& cfg, DiskPoint p1, DiskPoint p2, ComplexDegree nu);

struct ModeSumOptions {
    int l_max = 0;          // 0: start at 8 ceil(Re nu)
    double tol = 1e-10;     // relative change between L and 2L
    int l_cap = 1 << 14;
};

struct ModeSumResult {
    GreensValue g;
    double achieved_tol = 0.0;
    int l_max = 0;
};

// Eigenmode expansion with the m-sum collapsed by the addition theorem:
//   G = -1/(4 pi b) sum_l (2l+1) [P_l(cos theta_12) - P_l(cos theta'_12)] / (nu(nu+1) - l(l+1)).
// Terms fall off only like 1/l, so partial sums are combined with a smooth window
// (specfun::smooth_window_limit) and L is doubled until two estimates agree.
ModeSumResult greens_modesum(const LensConfig& cfg, DiskPoint p1, DiskPoint p2, cplx omega,
                             const ModeSumOptions& opts = {});

// Windowed mode sum at exactly L terms.
GreensValue greens_modesum_at(const LensConfig& cfg, DiskPoint p1, DiskPoint p2, cplx omega, int L);

// Image-point value 1/(4 b sin(pi nu)), the antipodal limit of greens_zz once the
// direct term P_nu(xi_direct) is dropped.
cplx greens_image_approx(const LensConfig& cfg, ComplexDegree nu);

// F(nu) = 2 gamma_E + 2 psi(nu+1) + pi cot(pi nu).
cplx source_constant(ComplexDegree nu);

// (sin(pi nu)/pi) [ln((1+xi)/2) + F(nu)], leading behaviour of P_nu near xi = -1.
cplx source_asymptote(const LensConfig& cfg, ComplexDegree nu, double xi_near_minus1);

// Coincident-point Green's function with the real logarithmic divergence removed:
//   -F(nu)/(4 pi b) + P_nu(xi_image(p, p)) / (4 b sin(pi nu)).
// Its imaginary part is the on-site decay; the real part depends on the cut-off.
GreensValue greens_onsite_regular(const LensConfig& cfg, DiskPoint p, ComplexDegree nu);

}  // namespace fisheye::greens
