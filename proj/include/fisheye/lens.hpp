#pragma once

#include <complex>
#include <vector>

#include "fisheye/specfun.hpp"

namespace fisheye::lens {

using specfun::ComplexDegree;
using specfun::cplx;

// Units: c = 1 and lambda0 = 1, so the atomic frequency is 2 pi.
inline constexpr double kOmega0 = 2.0 * specfun::kPi;

struct LensConfig {
    double R0 = 3.34;    // lens radius / lambda0
    double n0 = 1.0;     // index at the mirror
    double b = 0.1;      // thickness / lambda0
    double alpha = 0.0;  // kappa / omega0

    // Throws DomainError unless R0 > 0, b > 0, n0 >= 1, alpha >= 0.
    void validate() const;
    // omega0 well below the first transverse cutoff pi c / b (taken as < 0.5 pi / b).
    bool thin_disk_ok() const;
};

struct DiskPoint {
    double rho = 0.0;  // r / R0
    double phi = 0.0;
    cplx alpha() const { return std::polar(rho, phi); }
};

struct ModeIndex {
    int l = 1;
    int m = 0;
};

double refractive_index(const LensConfig& cfg, double rho);

// (1/R0) * integral_0^R0 n(r) dr.
double radial_mean_index(const LensConfig& cfg);

// Polar angle on the sphere for a disk point; pi at the centre, pi/2 on the mirror.
double stereo_theta(double rho);

double eigenfrequency(const LensConfig& cfg, int l);

// nu = (sqrt(4 omega^2 R0^2 n0^2 + 1) - 1) / 2 on the principal branch.
ComplexDegree order_parameter(const LensConfig& cfg, cplx omega);

// Degree seen by the atom: omega = omega0 (1 + i alpha).
ComplexDegree atomic_order_parameter(const LensConfig& cfg);

// Lens radius for which the lossless degree equals nu.
double radius_for_degree(double nu, double n0 = 1.0);

std::vector<int> allowed_m(int l);
bool is_allowed(ModeIndex mode);

// TE mode amplitude sqrt(2/(b R0^2 n0^2)) Y_l^m(theta(rho), phi).
cplx mode_function(const LensConfig& cfg, ModeIndex mode, DiskPoint p);

// integral d^3r n^2 f_A f_B^* over the mirrored disk. The azimuthal integral is done
// analytically, the radial one by Gauss-Legendre in u = cos(theta) with n and 2n
// nodes; disagreement above 1e-10 raises ConvergenceError.
cplx orthonormality_check(const LensConfig& cfg, ModeIndex a, ModeIndex b, int quadrature_n = 64);

}  // namespace fisheye::lens
