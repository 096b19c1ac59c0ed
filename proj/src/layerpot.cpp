#include "arago/layerpot.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace arago {

namespace {

// Spherical j_l and h_l for l = 0..L+1 in log-scaled form.
struct SphericalBessel {
    std::vector<Scaled> j, h;
};

SphericalBessel spherical_bessel(double x, int L) {
    SphericalBessel b;
    b.j = bessel_j_sequence(0.5, x, L + 1);
    b.h = hankel_sequence(0.5, x, L + 1);
    const double lpre = 0.5 * std::log(kPi / (2.0 * x));
    for (auto& v : b.j) v.lg += lpre;
    for (auto& v : b.h) v.lg += lpre;
    return b;
}

// f_l' = (l/x) f_l - f_{l+1}, returned with the scale of f_l.
Scaled derivative(const std::vector<Scaled>& f, int l, double x) {
    const cplx next = f[l + 1].mant * std::exp(f[l + 1].lg - f[l].lg);
    return {static_cast<double>(l) / x * f[l].mant - next, f[l].lg};
}

// Normalised associated Legendre Pbar_l^k(x), k >= 0, as table[k][l - k].
std::vector<std::vector<double>> assoc_legendre(int L, double x) {
    std::vector<std::vector<double>> p(static_cast<size_t>(L) + 1);
    const double sx = std::sqrt(std::max(0.0, 1.0 - x * x));
    double pkk = std::sqrt(1.0 / (4.0 * kPi));
    for (int k = 0; k <= L; ++k) {
        if (k > 0) pkk *= -sx * std::sqrt((2.0 * k + 1.0) / (2.0 * k));
        auto& row = p[k];
        row.resize(static_cast<size_t>(L - k) + 1);
        row[0] = pkk;
        if (k < L) row[1] = x * std::sqrt(2.0 * k + 3.0) * pkk;
        for (int l = k + 2; l <= L; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(k) * k));
            const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(k) * k) /
                                       (4.0 * (l - 1) * (l - 1) - 1.0));
            row[l - k] = a * (x * row[l - k - 1] - b * row[l - k - 2]);
        }
    }
    return p;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

cplx free_e3(double tau, double r) { return std::polar(1.0, tau * r) / (4.0 * kPi * r); }

void check_tau(double tau) {
    if (!(tau > 0.0)) throw std::domain_error("layerpot: tau must be positive");
}

} // namespace

LayerEigen layer_eigen(int m, double tau) {
    check_tau(tau);
    if (m < 0) throw std::domain_error("layer_eigen: negative degree");
    using GL = boost::math::quadrature::gauss<double, 20>;
    const int panels = 2 + m / 4 + static_cast<int>(std::ceil(tau));
    cplx s = 0.0, k = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = 2.0 * p / panels, b = 2.0 * (p + 1) / panels;
        const auto fs = [&](double r) { return std::polar(1.0, tau * r) * legendre_p(m, 1.0 - 0.5 * r * r); };
        s += GL::integrate([&](double r) { return fs(r).real(); }, a, b) +
             cplx(0.0, 1.0) * GL::integrate([&](double r) { return fs(r).imag(); }, a, b);
        const auto fk = [&](double r) { return 0.5 * cplx(-1.0, tau * r) * fs(r); };
        k += GL::integrate([&](double r) { return fk(r).real(); }, a, b) +
             cplx(0.0, 1.0) * GL::integrate([&](double r) { return fk(r).imag(); }, a, b);
    }
    return {m, tau, s, k};
}

LayerEigen layer_eigen_closed(int m, double tau) {
    check_tau(tau);
    if (m < 0) throw std::domain_error("layer_eigen_closed: negative degree");
    const SphericalBessel b = spherical_bessel(tau, m);
    const Scaled dj = derivative(b.j, m, tau), dh = derivative(b.h, m, tau);
    const double lg = b.j[m].lg + b.h[m].lg;
    const cplx jh = b.j[m].mant * b.h[m].mant * std::exp(lg);
    const cplx djh = (dj.mant * b.h[m].mant + b.j[m].mant * dh.mant) * std::exp(lg);
    return {m, tau, cplx(0.0, 2.0 * tau) * jh, cplx(0.0, tau * tau) * djh};
}

SphereGrid SphereGrid::make(int ntheta, int nphi) {
    if (ntheta < 1 || nphi < 1) throw std::domain_error("SphereGrid: empty grid");
    SphereGrid g;
    gauss_legendre(ntheta, g.x, g.w);
    g.nphi = nphi;
    return g;
}

SphereGrid SphereGrid::for_degree(int L) { return make(L + 6, 2 * L + 11); }

std::array<double, 3> SphereGrid::node(size_t i, int j) const {
    const double st = std::sqrt(std::max(0.0, 1.0 - x[i] * x[i]));
    const double ph = 2.0 * kPi * j / nphi;
    return {st * std::cos(ph), st * std::sin(ph), x[i]};
}

double SphereGrid::weight(size_t i) const { return w[i] * 2.0 * kPi / nphi; }

cplx SurfaceDensity::evaluate(const std::array<double, 3>& u) const {
    const auto p = assoc_legendre(L, std::clamp(u[2], -1.0, 1.0));
    const double ph = std::atan2(u[1], u[0]);
    cplx sum = 0.0;
    for (int k = 0; k <= L; ++k) {
        const cplx e = std::polar(1.0, k * ph);
        const double sign = (k % 2) ? -1.0 : 1.0;
        for (int l = k; l <= L; ++l) {
            sum += at(l, k) * p[k][l - k] * e;
            if (k > 0) sum += at(l, -k) * sign * p[k][l - k] * std::conj(e);
        }
    }
    return sum;
}

std::vector<cplx> SurfaceDensity::synthesize(const SphereGrid& g) const {
    std::vector<cplx> out(g.size());
    std::vector<cplx> fk(2 * static_cast<size_t>(L) + 1);
    for (size_t i = 0; i < g.x.size(); ++i) {
        const auto p = assoc_legendre(L, g.x[i]);
        for (int k = -L; k <= L; ++k) {
            const int ak = std::abs(k);
            const double sign = (k < 0 && ak % 2) ? -1.0 : 1.0;
            cplx s = 0.0;
            for (int l = ak; l <= L; ++l) s += at(l, k) * p[ak][l - ak];
            fk[k + L] = sign * s;
        }
        for (int j = 0; j < g.nphi; ++j) {
            const double ph = 2.0 * kPi * j / g.nphi;
            cplx s = 0.0;
            for (int k = -L; k <= L; ++k) s += fk[k + L] * std::polar(1.0, k * ph);
            out[i * g.nphi + j] = s;
        }
    }
    return out;
}

double SurfaceDensity::norm() const {
    double s = 0.0;
    for (const cplx& c : coeff) s += std::norm(c);
    return std::sqrt(s);
}

std::vector<cplx> sample(const SphereGrid& g, const SphereFunction& f) {
    std::vector<cplx> v(g.size());
    for (size_t i = 0; i < g.x.size(); ++i)
        for (int j = 0; j < g.nphi; ++j) v[i * g.nphi + j] = f(g.node(i, j));
    return v;
}

SurfaceDensity analyze(const SphereGrid& g, const std::vector<cplx>& values, int L) {
    if (values.size() != g.size()) throw std::invalid_argument("analyze: sample count mismatch");
    if (L < 0) throw std::domain_error("analyze: negative degree");
    SurfaceDensity d(L);
    std::vector<cplx> fk(2 * static_cast<size_t>(L) + 1);
    for (size_t i = 0; i < g.x.size(); ++i) {
        for (int k = -L; k <= L; ++k) {
            cplx s = 0.0;
            for (int j = 0; j < g.nphi; ++j) s += values[i * g.nphi + j] * std::polar(1.0, -k * 2.0 * kPi * j / g.nphi);
            fk[k + L] = s * g.weight(i);
        }
        const auto p = assoc_legendre(L, g.x[i]);
        for (int k = -L; k <= L; ++k) {
            const int ak = std::abs(k);
            const double sign = (k < 0 && ak % 2) ? -1.0 : 1.0;
            for (int l = ak; l <= L; ++l) d.at(l, k) += sign * p[ak][l - ak] * fk[k + L];
        }
    }
    return d;
}

SurfaceDensity sh_transform(int L, const SphereFunction& f) {
    const SphereGrid g = SphereGrid::for_degree(L);
    return analyze(g, sample(g, f), L);
}

SurfaceDensity cfie_solve(double tau, const SurfaceDensity& g0) {
    check_tau(tau);
    SurfaceDensity phi(g0.L);
    for (int l = 0; l <= g0.L; ++l) {
        const LayerEigen e = layer_eigen(l, tau);
        const cplx den = 1.0 + e.k_eig - cplx(0.0, 1.0) * e.s_eig;
        if (std::abs(den) < 1e-12) {
            std::ostringstream os;
            os << "cfie_solve: singular degree " << l << " at tau = " << tau;
            throw std::runtime_error(os.str());
        }
        for (int k = -l; k <= l; ++k) phi.at(l, k) = 2.0 * g0.at(l, k) / den;
    }
    return phi;
}

double cfie_residual(double tau, const SurfaceDensity& phi, const SurfaceDensity& g0) {
    if (phi.L != g0.L) throw std::invalid_argument("cfie_residual: degree mismatch");
    double num = 0.0;
    for (int l = 0; l <= phi.L; ++l) {
        const LayerEigen e = layer_eigen(l, tau);
        const cplx op = 1.0 + e.k_eig - cplx(0.0, 1.0) * e.s_eig;
        for (int k = -l; k <= l; ++k) num += std::norm(op * phi.at(l, k) - 2.0 * g0.at(l, k));
    }
    const double den = g0.norm();
    return den > 0.0 ? std::sqrt(num) / den : std::sqrt(num);
}

int default_layer_degree(double tau, double source_radius) {
    if (!(source_radius > 1.0)) throw std::domain_error("default_layer_degree: source must lie outside the sphere");
    const int geo = static_cast<int>(std::ceil(std::log(1e-12) / std::log(1.0 / source_radius)));
    return std::clamp(geo + 4 + static_cast<int>(std::ceil(2.0 * tau)), 12, 120);
}

SurfaceDensity point_source_trace(double tau, const ExteriorPoint& source, int L) {
    check_tau(tau);
    if (source.d != 3) throw std::invalid_argument("point_source_trace: d = 3 only");
    return sh_transform(L, [&](const std::array<double, 3>& u) {
        double r2 = 0.0;
        for (int i = 0; i < 3; ++i) r2 += (u[i] - source.cart[i]) * (u[i] - source.cart[i]);
        return free_e3(tau, std::sqrt(r2));
    });
}

cplx scattered_field(double tau, const SurfaceDensity& phi, const ExteriorPoint& target) {
    check_tau(tau);
    if (target.d != 3) throw std::invalid_argument("scattered_field: d = 3 only");
    if (target.r - 1.0 < 1e-3) throw std::domain_error("scattered_field: target too close to the boundary");
    const int n = std::clamp(static_cast<int>(std::ceil(40.0 / (target.r - 1.0))), phi.L + 6, 600);
    const int nt = std::max(n, static_cast<int>(std::ceil(2.0 * tau)) + 16);
    const SphereGrid g = SphereGrid::make(nt, 2 * nt);
    const std::vector<cplx> dens = phi.synthesize(g);
    cplx sum = 0.0;
    for (size_t i = 0; i < g.x.size(); ++i) {
        cplx ring = 0.0;
        for (int j = 0; j < g.nphi; ++j) {
            const auto y = g.node(i, j);
            double r2 = 0.0, ydx = 0.0;
            for (int c = 0; c < 3; ++c) {
                const double dx = target.cart[c] - y[c];
                r2 += dx * dx;
                ydx += y[c] * dx;
            }
            const double r = std::sqrt(r2);
            const cplx e = free_e3(tau, r);
            // d/dnu(y) E(x - y) = -E'(r) y.(x - y)/r with E' = E (i tau r - 1)/r
            const cplx dn = -e * cplx(-1.0, tau * r) / r * ydx / r;
            ring += (dn - cplx(0.0, 1.0) * e) * dens[i * g.nphi + j];
        }
        sum += ring * g.weight(i);
    }
    return sum;
}

ModalField scattered_field_modal(double tau, const SurfaceDensity& phi, const ExteriorPoint& target) {
    check_tau(tau);
    if (target.d != 3) throw std::invalid_argument("scattered_field_modal: d = 3 only");
    const int L = phi.L;
    const SphericalBessel b1 = spherical_bessel(tau, L);
    const SphericalBessel br = spherical_bessel(tau * target.r, L);
    std::array<double, 3> u{target.cart[0] / target.r, target.cart[1] / target.r, target.cart[2] / target.r};
    const auto p = assoc_legendre(L, std::clamp(u[2], -1.0, 1.0));
    const double ph = std::atan2(u[1], u[0]);
    ModalField out;
    for (int l = 0; l <= L; ++l) {
        // single layer: i tau j_l(tau) h_l(tau r); double layer: i tau^2 j_l'(tau) h_l(tau r)
        const Scaled dj = derivative(b1.j, l, tau), dh = derivative(br.h, l, tau * target.r);
        const double lg = b1.j[l].lg + br.h[l].lg;
        const cplx rad = cplx(0.0, tau) * (tau * dj.mant - cplx(0.0, 1.0) * b1.j[l].mant);
        const cplx val = rad * br.h[l].mant * std::exp(lg);
        const cplx der = rad * tau * dh.mant * std::exp(lg);
        cplx ang = 0.0;
        for (int k = -l; k <= l; ++k) {
            const int ak = std::abs(k);
            const double sign = (k < 0 && ak % 2) ? -1.0 : 1.0;
            ang += phi.at(l, k) * sign * p[ak][l - ak] * std::polar(1.0, k * ph);
        }
        out.value += val * ang;
        out.radial_derivative += der * ang;
    }
    return out;
}

LayerGreen layer_green(double tau, const ExteriorPoint& source, const ExteriorPoint& target, int L) {
    if (source.d != 3 || target.d != 3) throw std::invalid_argument("layer_green: d = 3 only");
    const int deg = (L > 0) ? L : default_layer_degree(tau, source.r);
    const SurfaceDensity g0 = point_source_trace(tau, source, deg);
    const SurfaceDensity phi = cfie_solve(tau, g0);
    LayerGreen out;
    out.degree = deg;
    out.scattered = scattered_field(tau, phi, target);
    out.value = free_e3(tau, distance(source, target)) - out.scattered;
    return out;
}

} // namespace arago
