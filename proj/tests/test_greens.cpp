#include <doctest.h>

#include <cmath>
#include <random>

#include "fisheye/error.hpp"
#include "fisheye/greens.hpp"

using namespace fisheye;
using namespace fisheye::greens;
using lens::kOmega0;
using specfun::kPi;

namespace {

LensConfig at_degree(double nu) {
    LensConfig cfg;
    cfg.R0 = lens::radius_for_degree(nu);
    return cfg;
}

DiskPoint random_point(std::mt19937& rng) {
    std::uniform_real_distribution<double> r(0.05, 0.95), p(0.0, 2 * kPi);
    return {r(rng), p(rng)};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("xi limits and symmetry") {
    const cplx a = std::polar(0.4, 0.3);
    CHECK(xi(a, a) == doctest::Approx(-1.0));
    const cplx anti = std::polar(0.4, 0.3 + kPi);
    CHECK(xi(a, 1.0 / std::conj(anti)) == doctest::Approx(1.0));
    std::mt19937 rng(3);
    for (int i = 0; i < 50; ++i) {
        const cplx u = random_point(rng).alpha(), v = random_point(rng).alpha();
        CHECK(xi(u, v) == doctest::Approx(xi(v, u)).epsilon(1e-14));
    }
    // xi_pair agrees with the complex form for both arguments
    const DiskPoint p{0.3, 0.2}, q{0.7, 2.1};
    const XiPair x = xi_pair(p, q);
    CHECK(x.direct == doctest::Approx(xi(p.alpha(), q.alpha())).epsilon(1e-13));
    CHECK(x.image == doctest::Approx(xi(p.alpha(), 1.0 / std::conj(q.alpha()))).epsilon(1e-13));
}

TEST_CASE("antipodal value and the image approximation") {
    const LensConfig cfg = at_degree(20.5);
    const cplx g = greens_zz(cfg, {0.27, 0.0}, {0.27, kPi}, kOmega0).value;
    // the image term alone gives exactly 1/(4 b sin(pi nu)) = +2.5; the direct term
    // P_nu(xi_direct) shifts the total by about 11 % at this radius
    CHECK(greens_image_approx(cfg, lens::atomic_order_parameter(cfg)).real() == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(std::abs(g.imag()) < 1e-14);
    CHECK(g.real() * 4.0 * cfg.b == doctest::Approx(0.8898).epsilon(1e-3));

    // lossy degree: Im nu = 2 pi R0 alpha to first order, so |sin(pi nu)| = cosh(2 pi^2 R0 alpha);
    // the rational form 1/(1 + q^2) agrees to leading order in q
    for (double alpha : {1e-4, 1e-3}) {
        LensConfig c = cfg;
        c.alpha = alpha;
        const cplx gi = greens_image_approx(c, lens::atomic_order_parameter(c));
        const double q = 2.0 * kPi * kPi * c.R0 * alpha;
        CHECK(std::abs(gi.real()) * 4.0 * c.b == doctest::Approx(1.0 / std::cosh(q)).epsilon(1e-4));
        CHECK(std::abs(gi.real()) * 4.0 * c.b == doctest::Approx(1.0 / (1.0 + q * q)).epsilon(1e-2));
    }
    LensConfig lossless = cfg;
    CHECK(greens_image_approx(lossless, lens::atomic_order_parameter(lossless)).real() == doctest::Approx(2.5));
    // half-integer parity of m sets the sign: sin(21.5 pi) = -1
    const LensConfig odd = at_degree(21.5);
    CHECK(greens_image_approx(odd, lens::atomic_order_parameter(odd)).real() == doctest::Approx(-2.5).epsilon(1e-12));
}

TEST_CASE("reciprocity") {
    std::mt19937 rng(11);
    const LensConfig cfg = at_degree(20.5);
    for (int i = 0; i < 30; ++i) {
        const DiskPoint a = random_point(rng), b = random_point(rng);
        const cplx w = kOmega0 * cplx(1.0, 1e-3);
        CHECK(rel(greens_zz(cfg, a, b, w).value, greens_zz(cfg, b, a, w).value) < 1e-10);
    }
}

TEST_CASE("closed form equals the mode sum") {
    std::mt19937 rng(5);
    LensConfig cfg;
    cfg.R0 = 3.34;
    int checked = 0;
    while (checked < 20) {
        const DiskPoint a = random_point(rng), b = random_point(rng);
        if (xi_pair(a, b).direct < -0.99) continue;
        const cplx g = greens_zz(cfg, a, b, kOmega0).value;
        const ModeSumResult m = greens_modesum(cfg, a, b, kOmega0);
        CHECK(rel(m.g.value, g) < 1e-6);
        ++checked;
    }
    // also with loss
    cfg.alpha = 1e-3;
    const cplx w = kOmega0 * cplx(1.0, cfg.alpha);
    const DiskPoint a{0.3, 0.1}, b{0.6, 2.5};
    CHECK(rel(greens_modesum(cfg, a, b, w).g.value, greens_zz(cfg, a, b, w).value) < 1e-6);
}

TEST_CASE("mode sum truncation sensitivity at the antipode") {
    for (double nu : {10.5, 20.5, 50.5}) {
        const LensConfig cfg = at_degree(nu);
        const DiskPoint a{0.27, 0.0}, b{0.27, kPi};
        const int n = int(std::ceil(nu));
        const cplx g4 = greens_modesum_at(cfg, a, b, kOmega0, 4 * n).value;
        const cplx g8 = greens_modesum_at(cfg, a, b, kOmega0, 8 * n).value;
        CAPTURE(nu);
        CHECK(rel(g4, g8) < 1e-6);
    }
}

TEST_CASE("single-pole dominance near a resonance") {
    // nu = 20 + d: the l = 20 term 1/(nu(nu+1) - 420) dominates
    const DiskPoint a{0.3, 0.0}, b{0.5, 2.0};
    auto scaled = [&](double d) {
        const double nu = 20.0 + d;
        LensConfig cfg = at_degree(nu);
        const double K = nu * (nu + 1.0) - 420.0;
        return greens_zz(cfg, a, b, kOmega0).value * K;
    };
    const cplx s1 = scaled(1e-3), s2 = scaled(5e-4), s3 = scaled(-5e-4);
    CHECK(rel(s2, s1) < 1e-2);
    CHECK(rel(s3, s1) < 1e-2);
    LensConfig near = at_degree(20.0 + 1e-3);
    CHECK(rel(greens_modesum(near, a, b, kOmega0).g.value, greens_zz(near, a, b, kOmega0).value) < 1e-6);
}

TEST_CASE("mirror condition") {
    const LensConfig cfg = at_degree(20.5);
    const DiskPoint a{0.4, 0.2};
    const double g9 = std::abs(greens_zz(cfg, a, {0.9, 1.0}, kOmega0).value);
    const double g999 = std::abs(greens_zz(cfg, a, {0.999, 1.0}, kOmega0).value);
    CHECK(g999 * 10.0 <= g9);
    CHECK(std::abs(greens_zz(cfg, a, {1.0, 1.0}, kOmega0).value) < 1e-12);
}

TEST_CASE("radius independence of the image peak") {
    // The image term is 1/(4b) for every half-integer degree; the direct term makes
    // the full antipodal value depend on the radius by several percent.
    const LensConfig c1 = at_degree(20.5), c2 = at_degree(50.5);
    const cplx i1 = greens_image_approx(c1, lens::atomic_order_parameter(c1));
    const cplx i2 = greens_image_approx(c2, lens::atomic_order_parameter(c2));
    CHECK(std::abs(std::abs(i1) - std::abs(i2)) / std::abs(i1) < 1e-2);
    const double g1 = std::abs(greens_zz(c1, {0.27, 0.0}, {0.27, kPi}, kOmega0).value);
    const double g2 = std::abs(greens_zz(c2, {0.27, 0.0}, {0.27, kPi}, kOmega0).value);
    CHECK(std::abs(g1 - g2) / g2 < 0.1);
}

TEST_CASE("peak width near the image point") {
    const LensConfig cfg = at_degree(50.5);
    const DiskPoint a{1.0 - 1.0 / cfg.R0, kPi};
    const double centre = cfg.R0 - 1.0;
    const int n = 1201;
    std::vector<double> xs(n), g(n);
    int ib = 0;
    for (int i = 0; i < n; ++i) {
        xs[i] = centre - 1.0 + 2.0 * i / (n - 1);
        g[i] = std::abs(greens_zz(cfg, a, {xs[i] / cfg.R0, 0.0}, kOmega0).value);
        if (g[i] > g[ib]) ib = i;
    }
    int l = ib, r = ib;
    while (l > 0 && g[l] > 0.5 * g[ib]) --l;
    while (r < n - 1 && g[r] > 0.5 * g[ib]) ++r;
    const double fwhm = xs[r] - xs[l];
    CHECK(fwhm >= 0.4);
    CHECK(fwhm <= 0.6);
}

TEST_CASE("source asymptote and constant") {
    const LensConfig cfg = at_degree(10.5);
    const lens::ComplexDegree nu{10.5};
    const double x = -1.0 + 1e-5;
    CHECK(rel(source_asymptote(cfg, nu, x), specfun::legendre_nu(nu, x)) < 1e-3);
    // 2 gamma + 2 psi(1.5) + pi cot(pi/2) = 4 - 4 ln 2
    CHECK(source_constant({0.5}).real() == doctest::Approx(4.0 - 4.0 * std::log(2.0)).epsilon(1e-13));
    CHECK(source_constant({10.5}).real() == doctest::Approx(5.9509095888746289).epsilon(1e-12));
    CHECK(std::abs(source_constant({10.5}).imag()) < 1e-15);
    CHECK(std::abs(source_asymptote(cfg, nu, x).imag()) < 1e-15);
    CHECK_THROWS_AS(source_asymptote(cfg, nu, -0.5), DomainError);
}

TEST_CASE("poles and coincident points") {
    const LensConfig cfg = at_degree(20.5);
    CHECK_THROWS_AS(greens_zz(cfg, {0.3, 0.4}, {0.3, 0.4}, kOmega0), PoleError);
    CHECK_THROWS_AS(greens_zz(cfg, {0.3, 0.4}, {0.5, 1.4}, lens::ComplexDegree{20.0}), PoleError);
}
