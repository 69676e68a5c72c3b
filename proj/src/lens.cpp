#include "fisheye/lens.hpp"

#include <cmath>
#include <string>

#include "fisheye/error.hpp"

namespace fisheye::lens {

using specfun::kPi;

void LensConfig::validate() const {
    if (!(R0 > 0.0) || !std::isfinite(R0)) throw DomainError("lens: R0 must be positive");
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("lens: b must be positive");
    if (!(n0 >= 1.0) || !std::isfinite(n0)) throw DomainError("lens: n0 must be >= 1");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("lens: alpha must be >= 0");
}

bool LensConfig::thin_disk_ok() const { return kOmega0 < 0.5 * kPi / b; }

double refractive_index(const LensConfig& cfg, double rho) {
    if (rho < 0.0) throw DomainError("refractive_index: rho < 0");
    return 2.0 * cfg.n0 / (1.0 + rho * rho);
}

double radial_mean_index(const LensConfig& cfg) {
    std::vector<double> x, w;
    specfun::gauss_legendre(64, x, w);
    double sum = 0.0;
    for (size_t i = 0; i < x.size(); ++i) sum += 0.5 * w[i] * refractive_index(cfg, 0.5 * (x[i] + 1.0));
    return sum;
}

double stereo_theta(double rho) {
    if (rho < 0.0 || rho > 1.0) throw DomainError("stereo_theta: rho outside [0, 1]");
    const double r2 = rho * rho;
    return std::acos((r2 - 1.0) / (r2 + 1.0));
}

double eigenfrequency(const LensConfig& cfg, int l) {
    if (l < 1) throw DomainError("eigenfrequency: l must be >= 1");
    return std::sqrt(double(l) * (l + 1.0)) / (cfg.R0 * cfg.n0);
}

ComplexDegree order_parameter(const LensConfig& cfg, cplx omega) {
    if (!(omega.real() > 0.0)) throw DomainError("order_parameter: Re(omega) must be positive");
    const cplx k = omega * cfg.R0 * cfg.n0;
    return {0.5 * (std::sqrt(4.0 * k * k + 1.0) - 1.0)};
}

ComplexDegree atomic_order_parameter(const LensConfig& cfg) {
    return order_parameter(cfg, kOmega0 * cplx(1.0, cfg.alpha));
}

double radius_for_degree(double nu, double n0) {
    if (!(nu > 0.0)) throw DomainError("radius_for_degree: nu must be positive");
    return std::sqrt(nu * (nu + 1.0)) / (kOmega0 * n0);
}

std::vector<int> allowed_m(int l) {
    if (l < 1) throw DomainError("allowed_m: l must be >= 1");
    std::vector<int> m;
    m.reserve(l);
    for (int k = -(l - 1); k <= l - 1; k += 2) m.push_back(k);
    return m;
}

bool is_allowed(ModeIndex mode) {
    return mode.l >= 1 && std::abs(mode.m) <= mode.l - 1 && (mode.l - mode.m) % 2 != 0;
}

namespace {
void require_mode(ModeIndex mode) {
    if (!is_allowed(mode))
        throw DomainError("invalid mode (l=" + std::to_string(mode.l) + ", m=" + std::to_string(mode.m) + ")");
}
}  // namespace

cplx mode_function(const LensConfig& cfg, ModeIndex mode, DiskPoint p) {
    require_mode(mode);
    const double norm = std::sqrt(2.0 / (cfg.b * cfg.R0 * cfg.R0 * cfg.n0 * cfg.n0));
    return norm * specfun::spherical_harmonic(mode.l, mode.m, stereo_theta(p.rho), p.phi);
}

namespace {

// b * int_0^R0 r n(r)^2 f_A f_B^* dr at phi = 0, with r n^2 dr = R0^2 n0^2 du.
cplx radial_overlap(const LensConfig& cfg, ModeIndex a, ModeIndex b, int n) {
    std::vector<double> x, w;
    specfun::gauss_legendre(n, x, w);
    cplx sum = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double u = 0.5 * (x[i] - 1.0);  // [-1, 0]
        const DiskPoint p{std::sqrt((1.0 + u) / (1.0 - u)), 0.0};
        sum += 0.5 * w[i] * mode_function(cfg, a, p) * std::conj(mode_function(cfg, b, p));
    }
    return cfg.b * cfg.R0 * cfg.R0 * cfg.n0 * cfg.n0 * sum;
}

}  // namespace

cplx orthonormality_check(const LensConfig& cfg, ModeIndex a, ModeIndex b, int quadrature_n) {
    require_mode(a);
    require_mode(b);
    if (quadrature_n < 64) throw DomainError("orthonormality_check: quadrature_n must be >= 64");
    if (a.m != b.m) return 0.0;
    const cplx coarse = radial_overlap(cfg, a, b, quadrature_n);
    const cplx fine = radial_overlap(cfg, a, b, 2 * quadrature_n);
    if (std::abs(fine - coarse) > 1e-10 * std::max(1.0, std::abs(fine)))
        throw ConvergenceError("orthonormality_check: quadrature not converged");
    return 2.0 * kPi * fine;
}

}  // namespace fisheye::lens
