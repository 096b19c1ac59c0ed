#include "doctest.h"
#include "support.hpp"

#include "arago/green.hpp"
#include "arago/layerpot.hpp"

#include <random>

using namespace arago;
using test::rel;

TEST_CASE("layer eigenvalues match spherical Bessel closed forms") {
    struct Ref {
        int m;
        double tau;
        cplx s, k;
    };
    // mpmath: S = 2 i tau j_m h_m, K = i tau^2 (j_m h_m)'
    const Ref tab[] = {
        {0, 1.0, {0.9092974268256817, 1.4161468365471424}, {-1.3254442633728241, -0.50684940972146069}},
        {3, 2.0, {0.36053540427425599, 0.014748692578318835}, {-0.085585625308253053, 0.037406635635886767}},
        {10, 5.0, {0.10858214777224639, 1.6592933332316408e-6}, {-0.037791068719304062, 1.4703953620431964e-5}},
        {25, 3.0, {0.039490365720910053, 4.0912178730214106e-43}, {-0.019467596758189825, 1.01583553861478e-41}},
    };
    for (const auto& r : tab) {
        CAPTURE(r.m);
        const LayerEigen q = layer_eigen(r.m, r.tau), c = layer_eigen_closed(r.m, r.tau);
        CHECK(std::abs(q.s_eig - r.s) < 1e-13 * std::abs(r.s));
        CHECK(std::abs(q.k_eig - r.k) < 1e-13 * std::abs(r.k));
        CHECK(std::abs(c.s_eig - r.s) < 1e-12 * std::abs(r.s));
        CHECK(std::abs(c.k_eig - r.k) < 1e-12 * std::abs(r.k));
    }
    for (int m : {1, 7, 40, 100})
        for (double tau : {0.5, 2.0, 9.0}) {
            const LayerEigen q = layer_eigen(m, tau), c = layer_eigen_closed(m, tau);
            CHECK(std::abs(q.s_eig - c.s_eig) < 1e-8 * std::abs(c.s_eig));
            CHECK(std::abs(q.k_eig - c.k_eig) < 1e-8 * std::abs(c.k_eig));
        }
}

TEST_CASE("spherical harmonic transform round trip") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    const int L = 16;
    SurfaceDensity a(L);
    for (auto& c : a.coeff) c = {n01(rng), n01(rng)};
    const SphereGrid g = SphereGrid::for_degree(L);
    const SurfaceDensity b = analyze(g, a.synthesize(g), L);
    double err = 0.0;
    for (size_t i = 0; i < a.coeff.size(); ++i) err = std::max(err, std::abs(a.coeff[i] - b.coeff[i]));
    CHECK(err < 1e-10 * a.norm());
}

TEST_CASE("sphere grid integrates low-degree polynomials exactly") {
    const SphereGrid g = SphereGrid::make(10, 21);
    double area = 0.0, z2 = 0.0;
    for (size_t i = 0; i < g.x.size(); ++i)
        for (int j = 0; j < g.nphi; ++j) {
            const auto p = g.node(i, j);
            area += g.weight(i);
            z2 += g.weight(i) * p[2] * p[2];
        }
    CHECK(area == doctest::Approx(4.0 * kPi).epsilon(1e-14));
    CHECK(z2 == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
}

TEST_CASE("point source trace reproduces the free field on the sphere") {
    const double tau = 1.5;
    const ExteriorPoint src = ExteriorPoint::from_polar(3, 2.2, 0.4);
    const int L = default_layer_degree(tau, src.r);
    const SurfaceDensity t = point_source_trace(tau, src, L);
    for (double th : {0.3, 1.2, 2.5})
        for (double ph : {0.0, 2.0, 4.0}) {
            const std::array<double, 3> u{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
            const ExteriorPoint q = ExteriorPoint::from_cartesian(3, {u[0], u[1], u[2]});
            CHECK(rel(t.evaluate(u), free_green(3, tau, distance(q, src))) < 1e-11);
        }
}

TEST_CASE("combined-field solve leaves a small residual") {
    for (double tau : {0.5, 1.0, 2.0, 6.0}) {
        const ExteriorPoint src = ExteriorPoint::from_polar(3, 1.7, -0.2);
        const int L = default_layer_degree(tau, src.r);
        const SurfaceDensity g0 = point_source_trace(tau, src, L);
        const SurfaceDensity phi = cfie_solve(tau, g0);
        CHECK(cfie_residual(tau, phi, g0) < 1e-12);
    }
}

TEST_CASE("surface quadrature and modal expansion of the potential agree") {
    const double tau = 2.0;
    const ExteriorPoint src = ExteriorPoint::from_polar(3, 2.0, 0.5);
    const SurfaceDensity phi = cfie_solve(tau, point_source_trace(tau, src, default_layer_degree(tau, src.r)));
    for (double r : {1.3, 2.0, 3.5}) {
        const ExteriorPoint q = ExteriorPoint::from_polar(3, r, -0.7, {0.6, 0.8});
        CHECK(rel(scattered_field(tau, phi, q), scattered_field_modal(tau, phi, q).value) < 1e-9);
    }
    CHECK_THROWS(scattered_field(tau, phi, ExteriorPoint::from_polar(3, 1.0005, 0.0)));
}

TEST_CASE("layer-potential Green function agrees with the mode sum") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ur(1.5, 4.0), ua(-1.4, 1.4), uphi(0.0, 2.0 * kPi);
    for (int k = 0; k < 4; ++k) {
        const double p1 = uphi(rng), p2 = uphi(rng);
        const ExteriorPoint a = ExteriorPoint::from_polar(3, ur(rng), ua(rng), {std::cos(p1), std::sin(p1)});
        const ExteriorPoint b = ExteriorPoint::from_polar(3, ur(rng), ua(rng), {std::cos(p2), std::sin(p2)});
        for (double tau : {0.5, 2.0}) CHECK(rel(layer_green(tau, a, b).value, exact_green(3, tau, a, b).value) < 1e-10);
    }
}

TEST_CASE("scattered field satisfies the Sommerfeld condition") {
    const double tau = 1.0;
    const ExteriorPoint src = ExteriorPoint::from_polar(3, 1.8, 0.2);
    const SurfaceDensity phi = cfie_solve(tau, point_source_trace(tau, src, default_layer_degree(tau, src.r)));
    auto resid = [&](double R) {
        const ModalField f = scattered_field_modal(tau, phi, ExteriorPoint::from_polar(3, R, -0.3, {0.0, 1.0}));
        return R * std::abs(f.radial_derivative - cplx(0.0, tau) * f.value);
    };
    CHECK(resid(100.0) / resid(50.0) == doctest::Approx(0.5).epsilon(0.02));
}
