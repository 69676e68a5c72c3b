#include "fisheye/specfun.hpp"

#include <cmath>
#include <string>

#include "fisheye/error.hpp"

namespace fisheye::specfun {

namespace {

cplx cot(cplx z) { return std::cos(z) / std::sin(z); }

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// 2F1(-mu, mu+1; 1; z) for |z| <= 1/2.
cplx hypergeometric_seed(cplx mu, double z, const LegendreOptions& opts) {
    cplx sum = 1.0, term = 1.0;
    int small = 0;
    for (int k = 0; k < opts.max_terms; ++k) {
        term *= (double(k) - mu) * (double(k) + mu + 1.0) / double((k + 1) * (k + 1)) * z;
        sum += term;
        if (term == 0.0) return sum;
        if (k > std::abs(mu) + 1.0 && std::abs(term) <= opts.tolerance * std::abs(sum)) {
            if (++small == 2) return sum;
        } else {
            small = 0;
        }
    }
    throw ConvergenceError("legendre_nu: hypergeometric series did not converge");
}

// Logarithmic expansion of P_nu about x = -1 in w = (1+x)/2:
//   P_nu = -(1/pi) sum_k w^k [ c_k (sin(pi nu) h_k - pi cos(pi nu)) - sin(pi nu) B_k ]
// with c_k = (-nu)_k (nu+1)_k / k!^2,
//      h_k = 2 psi(k+1) - psi(nu+1+k) - ln w,
//      B_k = (nu+1)_k (-nu)_k psi(1+nu-k) / k!^2.
// B_k is advanced by B_k = (nu+k)/k^2 [(k-1-nu) B_{k-1} + c_{k-1}], which stays
// finite where (-nu)_k vanishes and psi(1+nu-k) has a pole, so integer degree is
// handled without special cases.
cplx log_seed(cplx nu, double w, const LegendreOptions& opts) {
    const cplx s = std::sin(kPi * nu);
    const cplx c = std::cos(kPi * nu);
    const double lw = std::log(w);
    const cplx psi_nu1 = digamma(nu + 1.0);

    cplx ck = 1.0;
    cplx Bk = psi_nu1;
    double harmonic = 0.0;  // H_k
    cplx psi_shift = psi_nu1;  // psi(nu+1+k)
    double wk = 1.0;
    cplx sum = 0.0;
    int small = 0;
    for (int k = 0; k < opts.max_terms; ++k) {
        const cplx hk = 2.0 * (harmonic - kEulerGamma) - psi_shift - lw;
        const cplx term = (ck * (s * hk - kPi * c) - s * Bk) * wk;
        sum += term;
        if (k > std::abs(nu) + 2.0 && std::abs(term) <= opts.tolerance * std::abs(sum)) {
            if (++small == 2) return -sum / kPi;
        } else {
            small = 0;
        }
        const double k1 = k + 1.0;
        const cplx c_prev = ck;
        ck *= (double(k) - nu) * (double(k) + nu + 1.0) / (k1 * k1);
        Bk = (nu + k1) / (k1 * k1) * ((double(k) - nu) * Bk + c_prev);
        harmonic += 1.0 / k1;
        psi_shift += 1.0 / (nu + k1);
        wk *= w;
    }
    throw ConvergenceError("legendre_nu: logarithmic series did not converge");
}

}  // namespace

cplx digamma(cplx z) {
    if (!finite(z)) throw DomainError("digamma: non-finite argument");
    const double nearest = std::round(z.real());
    if (nearest <= 0.0 && std::abs(z - cplx(nearest, 0.0)) < 1e-12)
        throw PoleError("digamma: pole at z = " + std::to_string(nearest));

    if (z.real() < 0.5) return digamma(1.0 - z) - kPi * cot(kPi * z);

    cplx acc = 0.0;
    while (z.real() < 10.0) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // Bernoulli tail: B_2k / (2k z^2k)
    static constexpr double coef[] = {1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240,
                                      1.0 / 132, -691.0 / 32760, 1.0 / 12};
    const cplx iz2 = 1.0 / (z * z);
    cplx p = iz2, tail = 0.0;
    for (double a : coef) {
        tail += a * p;
        p *= iz2;
    }
    return acc + std::log(z) - 0.5 / z - tail;
}

double legendre_poly(int l, double x) {
    if (l < 0) throw DomainError("legendre_poly: negative degree");
    if (l == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < l; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

std::vector<double> legendre_poly_table(int lmax, double x) {
    if (lmax < 0) throw DomainError("legendre_poly_table: negative degree");
    std::vector<double> p(lmax + 1);
    p[0] = 1.0;
    if (lmax >= 1) p[1] = x;
    for (int k = 1; k < lmax; ++k) p[k + 1] = ((2.0 * k + 1.0) * x * p[k] - k * p[k - 1]) / (k + 1.0);
    return p;
}

namespace {

// sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) P_l^m(x), m >= 0, Condon-Shortley phase.
double normalized_assoc(int l, int m, double x) {
    const double sx = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
    double pmm = 1.0;
    for (int k = 1; k <= m; ++k) pmm *= -sx * std::sqrt((2.0 * k - 1.0) / (2.0 * k));
    pmm *= std::sqrt((2.0 * m + 1.0) / (4.0 * kPi));
    if (l == m) return pmm;
    double p_prev = pmm;
    double p = x * std::sqrt(2.0 * m + 3.0) * pmm;
    for (int ll = m + 2; ll <= l; ++ll) {
        const double a = std::sqrt((4.0 * ll * ll - 1.0) / (double(ll) * ll - double(m) * m));
        const double b = std::sqrt((double(ll - 1) * (ll - 1) - double(m) * m) /
                                   (4.0 * (ll - 1) * (ll - 1) - 1.0));
        const double next = a * (x * p - b * p_prev);
        p_prev = p;
        p = next;
    }
    return p;
}

void check_lm(int l, int m, const char* who) {
    if (l < 0 || std::abs(m) > l) throw DomainError(std::string(who) + ": need 0 <= |m| <= l");
}

}  // namespace

double assoc_legendre(int l, int m, double x) {
    check_lm(l, m, "assoc_legendre");
    if (x < -1.0 || x > 1.0) throw DomainError("assoc_legendre: x outside [-1, 1]");
    const int am = std::abs(m);
    const double log_ratio = std::lgamma(l - am + 1.0) - std::lgamma(l + am + 1.0);
    const double scale = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * std::exp(log_ratio));
    const double plm = normalized_assoc(l, am, x) / scale;
    if (m >= 0) return plm;
    return ((am % 2) ? -1.0 : 1.0) * std::exp(log_ratio) * plm;
}

cplx spherical_harmonic(int l, int m, double theta, double phi) {
    check_lm(l, m, "spherical_harmonic");
    if (theta < 0.0 || theta > kPi) throw DomainError("spherical_harmonic: theta outside [0, pi]");
    const int am = std::abs(m);
    const cplx y = normalized_assoc(l, am, std::cos(theta)) * std::polar(1.0, am * phi);
    if (m >= 0) return y;
    return ((am % 2) ? -1.0 : 1.0) * std::conj(y);
}

cplx legendre_nu(ComplexDegree degree, double x, const LegendreOptions& opts) {
    cplx nu = degree.value;
    if (!finite(nu)) throw DomainError("legendre_nu: non-finite degree");
    if (!(x > -1.0) || x > 1.0) throw DomainError("legendre_nu: x outside (-1, 1]");
    if (x == 1.0) return 1.0;
    if (nu.real() < -0.5) nu = -nu - 1.0;  // P_nu = P_{-nu-1}

    const int n = nu.real() < 1.0 ? 0 : int(std::floor(nu.real()));
    const cplx mu = nu - double(n);

    auto seed = [&](cplx deg) {
        return x >= opts.x_switch ? hypergeometric_seed(deg, 0.5 * (1.0 - x), opts)
                                  : log_seed(deg, 0.5 * (1.0 + x), opts);
    };
    cplx p_prev = seed(mu);
    if (n == 0) return p_prev;
    cplx p = seed(mu + 1.0);
    for (int j = 1; j < n; ++j) {
        const cplx k = mu + double(j);
        const cplx next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
        p_prev = p;
        p = next;
    }
    return p;
}

std::vector<cplx> legendre_nu_expansion_oracle(ComplexDegree degree, double x, int lmax) {
    const cplx nu = degree.value;
    if (std::abs(nu - std::round(nu.real())) < 1e-6)
        throw PoleError("legendre_nu_expansion_oracle: degree too close to an integer");
    if (lmax < 0) throw DomainError("legendre_nu_expansion_oracle: negative lmax");
    const cplx pref = std::sin(kPi * nu) / kPi;
    const cplx nn = nu * (nu + 1.0);
    const auto p = legendre_poly_table(lmax, x);
    std::vector<cplx> partial(lmax + 1);
    cplx sum = 0.0;
    for (int l = 0; l <= lmax; ++l) {
        const double sign = (l % 2) ? -1.0 : 1.0;
        sum += pref * sign * (2.0 * l + 1.0) / (nn - double(l) * (l + 1.0)) * p[l];
        partial[l] = sum;
    }
    return partial;
}

double smooth_window_weight(int l, int L) {
    if (L <= 0) return l <= 0 ? 1.0 : 0.0;
    const double s = double(l) / L;
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    const double u = (s - 0.5) / 0.5;
    auto f = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    const double a = f(1.0 - u), b = f(u);
    return a / (a + b);
}

cplx smooth_window_limit(const std::vector<cplx>& partial_sums) {
    if (partial_sums.empty()) return 0.0;
    const int L = int(partial_sums.size()) - 1;
    cplx sum = 0.0, prev = 0.0;
    for (int l = 0; l <= L; ++l) {
        sum += (partial_sums[l] - prev) * smooth_window_weight(l, L);
        prev = partial_sums[l];
    }
    return sum;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw DomainError("gauss_legendre: need n >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 1; k < n; ++k) {
                const double p2 = ((2.0 * k + 1.0) * z * p1 - k * p0) / (k + 1.0);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

}  // namespace fisheye::specfun
