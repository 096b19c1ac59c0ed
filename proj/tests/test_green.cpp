#include "doctest.h"
#include "support.hpp"

#include "arago/green.hpp"

#include <random>

using namespace arago;
using test::rel;

namespace {

ExteriorPoint point(int d, double r, double y, int axis) {
    std::vector<double> om(static_cast<size_t>(d - 1), 0.0);
    om[static_cast<size_t>(axis) % om.size()] = 1.0;
    return ExteriorPoint::from_polar(d, r, y, om);
}

ExteriorPoint random_point(std::mt19937_64& rng, int d, double rmin, double rmax) {
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> ur(rmin, rmax);
    std::vector<double> c(static_cast<size_t>(d));
    double n = 0.0;
    for (auto& x : c) {
        x = n01(rng);
        n += x * x;
    }
    const double r = ur(rng) / std::sqrt(n);
    for (auto& x : c) x *= r;
    return ExteriorPoint::from_cartesian(d, c);
}

} // namespace

TEST_CASE("free Green function matches the Hankel closed form") {
    struct Ref {
        int d;
        double tau, rho;
        cplx v;
    };
    // mpmath: (i/4) (tau/(2 pi rho))^{(d-2)/2} H^(1)_{(d-2)/2}(tau rho)
    const Ref tab[] = {
        {3, 2.0, 1.5, {-0.052520733152615761, 7.4866489506319929e-3}},
        {3, 0.3, 4.0, {7.2088784740802465e-3, 0.018542328460817006}},
        {3, 40.0, 0.7, {-0.10943105848075731, 0.030797139515288724}},
        {4, 2.0, 1.5, {-0.017224513200377593, 0.017987636416330906}},
        {4, 0.3, 4.0, {1.8535673469606333e-3, 1.4869718737579563e-3}},
        {4, 40.0, 0.7, {-0.17171028226256004, 0.2968273528076302}},
        {5, 2.0, 1.5, {-2.1263656591060817e-3, 0.011674817811481946}},
        {5, 0.3, 4.0, {2.9304078252910657e-4, 9.8394303688387803e-5}},
        {5, 40.0, 0.7, {0.24454281989710096, 1.0052313178912069}},
    };
    for (const auto& r : tab) {
        CAPTURE(r.d);
        CAPTURE(r.tau);
        CHECK(rel(free_green(r.d, r.tau, r.rho), r.v) < 1e-12);
    }
}

TEST_CASE("exact Dirichlet Green function matches the mpmath series") {
    struct Ref {
        int d;
        double tau, r, s, c;
        cplx v;
    };
    const Ref tab[] = {
        {3, 3.0, 2.0, 1.5, -0.11508098899676866, {3.0741561214958827e-3, 8.2882648070940756e-3}},
        {3, 0.5, 1.2, 3.0, 0.6, {5.5472914241618378e-3, 5.7205666315133348e-3}},
        {3, 8.0, 1.05, 2.0, -1.0, {1.817158455797013e-5, 1.0092889575605121e-4}},
        {4, 3.0, 2.0, 1.5, -0.11508098899676866, {3.5326299758463784e-3, 2.7526181181343302e-3}},
        {4, 0.5, 1.2, 3.0, 0.6, {1.9029768539353112e-3, 1.1020920016922333e-3}},
        {4, 8.0, 1.05, 2.0, -1.0, {2.3106089832982466e-4, 3.316590369043178e-5}},
        {5, 3.0, 2.0, 1.5, -0.11508098899676866, {2.2576517550260592e-3, 2.2438614410849448e-4}},
        {5, 0.5, 1.2, 3.0, 0.6, {5.9749012310229946e-4, 1.7522340850461018e-4}},
        {5, 8.0, 1.05, 2.0, -1.0, {1.8672760256338836e-4, -3.7239164589341279e-4}},
    };
    for (const auto& t : tab) {
        CAPTURE(t.d);
        CAPTURE(t.tau);
        const ExteriorPoint a = ExteriorPoint::north(t.d, t.r);
        const double y = kPi / 2.0 - std::acos(t.c);
        const ExteriorPoint b = ExteriorPoint::from_polar(t.d, t.s, y);
        REQUIRE(cos_angle(a, b) == doctest::Approx(t.c).epsilon(1e-14));
        CHECK(rel(exact_green(t.d, t.tau, a, b).value, t.v) < 1e-10);
    }
}

TEST_CASE("radial mode splits into free and reflected parts") {
    for (int d = 3; d <= 5; ++d)
        for (int m : {0, 3, 40}) {
            const RadialModeKernel k = radial_mode(d, m, 6.0, 1.4, 2.2);
            CHECK(std::abs(k.free_part + k.reflected_part - k.total) <= 1e-14 * std::abs(k.free_part));
            CHECK(k.nu == doctest::Approx(m + 0.5 * (d - 2)));
            // vanishes when either point touches the sphere
            const RadialModeKernel b = radial_mode(d, m, 6.0, 1.0, 2.2);
            CHECK(std::abs(b.total) <= 1e-12 * std::abs(b.free_part));
        }
}

TEST_CASE("addition theorem reproduces the free Green function") {
    for (int d = 3; d <= 5; ++d)
        for (double tau : {0.5, 5.0, 30.0}) {
            const double r = 3.0, s = 2.0, c = std::cos(kPi / 4.0);
            const ModeSum m = free_mode_sum(d, tau, r, s, c);
            CHECK(rel(m.value, free_green(d, tau, std::sqrt(r * r + s * s - 2.0 * r * s * c))) < 1e-10);
            CHECK(m.tail_bound < 1e-12 * std::abs(m.value));
        }
}

TEST_CASE("reciprocity on random pairs") {
    std::mt19937_64 rng(11);
    for (int d = 3; d <= 5; ++d)
        for (int k = 0; k < 6; ++k) {
            const ExteriorPoint a = random_point(rng, d, 1.05, 3.5), b = random_point(rng, d, 1.05, 3.5);
            for (double tau : {0.3, 4.0, 17.0}) {
                const cplx g1 = exact_green(d, tau, a, b).value, g2 = exact_green(d, tau, b, a).value;
                CHECK(rel(g1, g2) < 1e-10);
            }
        }
}

TEST_CASE("Dirichlet condition on the unit sphere") {
    for (int d = 3; d <= 5; ++d)
        for (double tau : {1.0, 12.0}) {
            const ExteriorPoint src = point(d, 1.8, 0.2, 0);
            for (double y : {-1.2, -0.3, 0.5, 1.4}) {
                const GreenValue g = exact_green(d, tau, src, point(d, 1.0, y, 1));
                CHECK(std::abs(g.value) <= 1e-10 * std::abs(g.free_part));
            }
        }
}

TEST_CASE("Helmholtz residual of the exact Green function is second order in the step") {
    for (int d = 3; d <= 5; ++d) {
        const ExteriorPoint src = point(d, 2.0, 0.3, 0);
        std::vector<double> p(static_cast<size_t>(d), 0.3);
        p[0] = 1.4;
        p[d - 1] = -0.6;
        const FieldSampler f = [&](const std::vector<double>& x) {
            return exact_green(d, 4.0, src, ExteriorPoint::from_cartesian(d, x)).value;
        };
        const double r1 = helmholtz_residual(d, 4.0, f, p, 2e-3), r2 = helmholtz_residual(d, 4.0, f, p, 1e-3);
        CHECK(std::log2(r1 / r2) == doctest::Approx(2.0).epsilon(0.1));
        CHECK(r2 < 1e-5);
    }
}

TEST_CASE("Sommerfeld condition: the outgoing residual decays one order faster") {
    for (int d = 3; d <= 5; ++d) {
        const double tau = 3.0;
        const ExteriorPoint src = point(d, 2.0, 0.4, 0);
        auto resid = [&](double R) {
            const double dr = 1e-4;
            const cplx gp = exact_green(d, tau, src, point(d, R + dr, -0.2, 1)).value;
            const cplx gm = exact_green(d, tau, src, point(d, R - dr, -0.2, 1)).value;
            const cplx g0 = exact_green(d, tau, src, point(d, R, -0.2, 1)).value;
            return std::pow(R, 0.5 * (d - 1)) * std::abs((gp - gm) / (2.0 * dr) - cplx(0.0, tau) * g0);
        };
        CHECK(resid(100.0) / resid(50.0) == doctest::Approx(0.5).epsilon(0.05));
    }
}

TEST_CASE("static limit: d = 3 approaches the Kelvin image solution at first order") {
    const ExteriorPoint src = ExteriorPoint::from_polar(3, 2.0, 0.3);
    const ExteriorPoint tgt = ExteriorPoint::from_polar(3, 1.6, -0.5, {0.0, 1.0});
    std::vector<double> img = src.cartesian();
    for (auto& x : img) x /= src.r * src.r;
    const std::vector<double> q = tgt.cartesian();
    double di = 0.0;
    for (int i = 0; i < 3; ++i) di += (q[i] - img[i]) * (q[i] - img[i]);
    const double g0 = 1.0 / (4.0 * kPi * distance(src, tgt)) - 1.0 / (src.r * 4.0 * kPi * std::sqrt(di));
    const double e1 = std::abs(exact_green(3, 1e-2, src, tgt).value - g0);
    const double e2 = std::abs(exact_green(3, 5e-3, src, tgt).value - g0);
    CHECK(e1 < 5e-2 * std::abs(g0));
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("adaptive truncation honours the tail tolerance") {
    const ExteriorPoint a = ExteriorPoint::from_polar(4, 1.3, 0.2), b = ExteriorPoint::from_polar(4, 1.1, -0.9);
    ModeSumConfig loose;
    loose.tail_tolerance = 1e-6;
    const GreenValue g1 = exact_green(4, 20.0, a, b, loose);
    const GreenValue g2 = exact_green(4, 20.0, a, b);
    CHECK(g1.modes_used <= g2.modes_used);
    CHECK(rel(g1.value, g2.value) < 1e-5);
    ModeSumConfig fixed;
    fixed.method = ModeSumMethod::fixed_M;
    fixed.M = 5;
    const GreenValue g3 = exact_green(4, 20.0, a, b, fixed);
    CHECK(g3.modes_used == 6);
    CHECK(g3.tail_bound > 1e-3 * std::abs(g2.reflected_part));
}

TEST_CASE("mode table tail bounds shrink past the creeping cutoff") {
    const auto tab = mode_table(3, 10.0, 1.5, 2.0, -0.3, 60);
    REQUIRE(tab.size() == 61);
    for (size_t m = 0; m + 1 < tab.size(); ++m) CHECK(tab[m + 1].tail_bound <= tab[m].tail_bound);
    CHECK(tab[40].tail_bound < 1e-8 * tab[0].tail_bound);
}
