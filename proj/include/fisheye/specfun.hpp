#pragma once

#include <complex>
#include <vector>

namespace fisheye::specfun {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Degree of a Legendre function. Loss only ever pushes Im(value) upward.
struct ComplexDegree {
    cplx value;
};

// Digamma function psi(z). Throws PoleError near z = 0, -1, -2, ...
cplx digamma(cplx z);

// Legendre polynomial P_l(x) by the three-term recurrence.
double legendre_poly(int l, double x);

// All P_0(x) .. P_lmax(x) in one pass.
std::vector<double> legendre_poly_table(int lmax, double x);

// Associated Legendre function P_l^m(x) with the Condon-Shortley phase,
// so P_1^1(x) = -sqrt(1-x^2). Negative m uses
// P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m.
double assoc_legendre(int l, int m, double x);

// Orthonormal Y_l^m(theta, phi) built on assoc_legendre above.
cplx spherical_harmonic(int l, int m, double theta, double phi);

struct LegendreOptions {
    double x_switch = 0.0;       // hypergeometric series for x >= x_switch
    double tolerance = 1e-10;    // relative size of the last retained term
    int max_terms = 100000;
};

// P_nu(x) for complex degree and real x in (-1, 1].
//
// Seeds of degree mu and mu+1 (Re mu in [0,1)) come from 2F1(-mu, mu+1; 1; (1-x)/2)
// when x >= x_switch and from the logarithmic expansion about x = -1 otherwise.
// The result is then carried to degree nu with the three-term recurrence in the
// degree, which is neutrally stable for |x| < 1 and avoids the cancellation that
// the direct series suffers for large |nu|.
cplx legendre_nu(ComplexDegree nu, double x, const LegendreOptions& opts = {});

// Partial sums S_0 .. S_lmax of
//   P_nu(x) = sin(pi nu)/pi * sum_l (-1)^l (2l+1) / (nu(nu+1) - l(l+1)) P_l(x).
// Throws PoleError when nu is within 1e-6 of an integer.
std::vector<cplx> legendre_nu_expansion_oracle(ComplexDegree nu, double x, int lmax);

// Smooth-window limit of a slowly converging series given its partial sums:
// sum_l t_l w(l/L), where w = 1 on [0, 1/2] and falls to 0 at 1 along a C-infinity
// step. Recovers the (Abel/Cesaro) limit of oscillating tails far faster than
// plain truncation.
cplx smooth_window_limit(const std::vector<cplx>& partial_sums);

// Weight of term l out of L in smooth_window_limit.
double smooth_window_weight(int l, int L);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace fisheye::specfun
