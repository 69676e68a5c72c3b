#include "fisheye/greens.hpp"

#include <algorithm>
#include <array>
#include <vector>
#include <cmath>

#include "fisheye/error.hpp"

namespace fisheye::greens {

using specfun::kEulerGamma;
using specfun::kPi;

namespace {

struct SpherePoint {
    double c, s;  // cos and sin of the stereographic polar angle
};

SpherePoint sphere(DiskPoint p) {
    if (p.rho < 0.0 || p.rho > 1.0) throw DomainError("disk point outside 0 <= rho <= 1");
    const double r2 = p.rho * p.rho;
    return {(r2 - 1.0) / (r2 + 1.0), 2.0 * p.rho / (r2 + 1.0)};
}

cplx checked_sin(ComplexDegree nu) {
    const cplx s = std::sin(kPi * nu.value);
    if (std::abs(s) < 1e-8) throw PoleError("Green's function evaluated on a cavity resonance");
    return s;
}

int default_l_max(ComplexDegree nu) { return std::max(16, 8 * int(std::ceil(nu.value.real()))); }

}  // namespace

double xi(cplx alpha1, cplx alpha2) {
    const cplx den = alpha1 * std::conj(alpha2) + 1.0;
    if (std::abs(den) == 0.0) return 1.0;
    const double z2 = std::norm((alpha1 - alpha2) / den);
    if (!std::isfinite(z2)) return 1.0;
    return (z2 - 1.0) / (z2 + 1.0);
}

XiPair xi_pair(DiskPoint p1, DiskPoint p2) {
    const SpherePoint a = sphere(p1), b = sphere(p2);
    const double cc = a.c * b.c;
    const double ss = a.s * b.s * std::cos(p1.phi - p2.phi);
    return {std::clamp(-(cc + ss), -1.0, 1.0), std::clamp(cc - ss, -1.0, 1.0)};
}

GreensValue greens_zz(const LensConfig& cfg, DiskPoint p1, DiskPoint p2, ComplexDegree nu) {
    const XiPair x = xi_pair(p1, p2);
    if (x.direct <= -1.0 + 1e-14) throw PoleError("greens_zz: coincident points");
    const cplx s = checked_sin(nu);
    const cplx pd = specfun::legendre_nu(nu, x.direct);
    const cplx pi = specfun::legendre_nu(nu, x.image);
    return {-(pd - pi) / (4.0 * cfg.b * s)};
}

GreensValue greens_zz(const LensConfig& cfg, DiskPoint p1, DiskPoint p2, cplx omega) {
    cfg.validate();
    return greens_zz(cfg, p1, p2, lens::order_parameter(cfg, omega));
}

namespace {

// Adaptive Gauss-Legendre on [a, b]: split until 8- and 16-point rules agree.
template <class F>
double integrate(F f, double a, double b, double tol, int depth = 0) {
    static const auto rules = [] {
        std::array<std::vector<double>, 4> r;
        specfun::gauss_legendre(8, r[0], r[1]);
        specfun::gauss_legendre(16, r[2], r[3]);
        return r;
    }();
    auto apply = [&](const std::vector<double>& x, const std::vector<double>& w) {
        double s = 0.0;
        for (size_t i = 0; i < x.size(); ++i) s += w[i] * f(0.5 * (a + b) + 0.5 * (b - a) * x[i]);
        return 0.5 * (b - a) * s;
    };
    const double coarse = apply(rules[0], rules[1]);
    const double fine = apply(rules[2], rules[3]);
    if (std::abs(fine - coarse) <= tol * std::max(1.0, std::abs(fine)) || depth >= 24) return fine;
    const double m = 0.5 * (a + b);
    return integrate(f, a, m, tol, depth + 1) + integrate(f, m, b, tol, depth + 1);
}

// sum_{l>=1} (2l+1) P_l(x) / (l(l+1))^2. With (2l+1)/(l(l+1))^2 = 1/l^2 - 1/(l+1)^2 and
// 1/k^2 = int_0^1 t^(k-1) (-ln t) dt, the sum is an integral over the generating
// function g(t) = (1 - 2xt + t^2)^(-1/2); t = exp(-s) gives a smooth integrand.
double second_moment_sum(double x) {
    auto f = [x](double s) {
        const double t = std::exp(-s);
        const double g = 1.0 / std::sqrt((1.0 - t) * (1.0 - t) + 2.0 * t * (1.0 - x));
        return s * (g - 1.0) * (-std::expm1(-s));
    };
    return integrate(f, 0.0, 1.0, 1e-14) + integrate(f, 1.0, 8.0, 1e-14) + integrate(f, 8.0, 64.0, 1e-14);
}

}  // namespace

// With lambda = l(l+1) and K = nu(nu+1),
//   1/(K - lambda) = -1/lambda - K/lambda^2 + K^2/(lambda^2 (K - lambda)).
// The first two pieces are summed in closed form (sum (2l+1) P_l(x)/lambda = -1 - ln((1-x)/2)
// and second_moment_sum); only the fast-decaying last piece is summed term by term.
GreensValue greens_modesum_at(const LensConfig& cfg, DiskPoint p1, DiskPoint p2, cplx omega, int L) {
    if (L < 2) throw DomainError("greens_modesum: l_max must be >= 2");
    const XiPair x = xi_pair(p1, p2);
    if (x.direct <= -1.0 + 1e-14) throw PoleError("greens_modesum: coincident points");
    const cplx k = omega * cfg.R0 * cfg.n0;
    const cplx kk = k * k;
    const double a = -x.direct, b = -x.image;  // cos(theta_12), cos(theta'_12)
    const auto pa = specfun::legendre_poly_table(L, a);
    const auto pb = specfun::legendre_poly_table(L, b);

    const double first = x.direct == x.image ? 0.0 : std::log(0.5 * (1.0 + x.image)) - std::log(0.5 * (1.0 + x.direct));
    const double second = second_moment_sum(a) - second_moment_sum(b);
    cplx rest = 0.0;
    for (int l = 1; l <= L; ++l) {
        const double w = specfun::smooth_window_weight(l, L);
        if (w == 0.0) break;
        const double lam = double(l) * (l + 1.0);
        rest += w * (2.0 * l + 1.0) * (pa[l] - pb[l]) * kk * kk / (lam * lam * (kk - lam));
    }
    return {-(-first - kk * second + rest) / (4.0 * kPi * cfg.b)};
}

ModeSumResult greens_modesum(const LensConfig& cfg, DiskPoint p1, DiskPoint p2, cplx omega,
                             const ModeSumOptions& opts) {
    cfg.validate();
    const ComplexDegree nu = lens::order_parameter(cfg, omega);
    int L = opts.l_max > 0 ? opts.l_max : default_l_max(nu);
    cplx prev = greens_modesum_at(cfg, p1, p2, omega, L).value;
    while (2 * L <= opts.l_cap) {
        L *= 2;
        const cplx next = greens_modesum_at(cfg, p1, p2, omega, L).value;
        const double change = std::abs(next - prev) / std::max(std::abs(next), 1e-300);
        if (change <= opts.tol) return {{next}, change, L};
        prev = next;
    }
    throw ConvergenceError("greens_modesum: no convergence below l_max cap");
}

cplx greens_image_approx(const LensConfig& cfg, ComplexDegree nu) {
    return 1.0 / (4.0 * cfg.b * checked_sin(nu));
}

cplx source_constant(ComplexDegree nu) {
    const cplx z = kPi * nu.value;
    return 2.0 * kEulerGamma + 2.0 * specfun::digamma(nu.value + 1.0) + kPi * std::cos(z) / std::sin(z);
}

cplx source_asymptote(const LensConfig&, ComplexDegree nu, double xi_near_minus1) {
    if (!(xi_near_minus1 > -1.0) || xi_near_minus1 >= -0.99)
        throw DomainError("source_asymptote: need -1 < xi < -0.99");
    return std::sin(kPi * nu.value) / kPi * (std::log(0.5 * (1.0 + xi_near_minus1)) + source_constant(nu));
}

GreensValue greens_onsite_regular(const LensConfig& cfg, DiskPoint p, ComplexDegree nu) {
    const cplx s = checked_sin(nu);
    const double xi_img = xi_pair(p, p).image;
    if (xi_img <= -1.0 + 1e-14) throw PoleError("greens_onsite_regular: point on the mirror");
    return {-source_constant(nu) / (4.0 * kPi * cfg.b) + specfun::legendre_nu(nu, xi_img) / (4.0 * cfg.b * s)};
}

}  // namespace fisheye::greens
