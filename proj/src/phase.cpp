#include "arago/phase.hpp"
#include "arago/specfun.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arago {

namespace {

const double kCbrt2 = std::cbrt(2.0);

// zeta_tilde(1+u) = 2^{1/3} sum_{k>=1} c_k u^k
constexpr double kZetaSeries[] = {
    -1.0,
    0.3,
    -0.1828571428571428571429,
    0.1316825396825396825397,
    -0.1026364873222016079159,
    0.08387863818720961578104,
    -0.0707742596491440028855,
    0.06111505876706548975457,
    -0.05371015637698647622234,
    0.04785968544415098680512,
};
constexpr int kZetaTerms = static_cast<int>(std::size(kZetaSeries));
constexpr double kSeriesBand = 0.02;

void check_dim(int d) {
    if (d < 3 || d > 5) throw std::domain_error("dimension must be 3, 4 or 5");
}

// sum_{k>=1} c_k u^{k-1} and its first two derivatives in u
void zeta_series(double u, double& s0, double& s1, double& s2) {
    s0 = s1 = s2 = 0.0;
    for (int k = kZetaTerms; k >= 1; --k) {
        s2 = s2 * u + 2.0 * s1;
        s1 = s1 * u + s0;
        s0 = s0 * u + kZetaSeries[k - 1];
    }
}

} // namespace

// ---------------------------------------------------------------- Points

ExteriorPoint ExteriorPoint::from_cartesian(int d, const std::vector<double>& c) {
    check_dim(d);
    if (static_cast<int>(c.size()) != d) throw std::invalid_argument("ExteriorPoint: coordinate count must equal d");
    ExteriorPoint p;
    p.d = d;
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) {
        p.cart[i] = c[i];
        r2 += c[i] * c[i];
    }
    p.r = std::sqrt(r2);
    if (p.r < 1.0 - 1e-12) throw std::domain_error("ExteriorPoint: point lies inside the unit ball");
    p.y = std::asin(std::clamp(c[d - 1] / p.r, -1.0, 1.0));
    return p;
}

ExteriorPoint ExteriorPoint::from_polar(int d, double r, double y, const std::vector<double>& omega) {
    check_dim(d);
    if (r < 1.0 - 1e-12) throw std::domain_error("ExteriorPoint: r must be >= 1");
    std::vector<double> om(d - 1, 0.0);
    if (omega.empty()) {
        om[0] = 1.0;
    } else {
        if (static_cast<int>(omega.size()) != d - 1) throw std::invalid_argument("ExteriorPoint: omega must have d-1 entries");
        double n = 0.0;
        for (double v : omega) n += v * v;
        n = std::sqrt(n);
        if (!(n > 0.0)) throw std::invalid_argument("ExteriorPoint: omega must be nonzero");
        for (int i = 0; i < d - 1; ++i) om[i] = omega[i] / n;
    }
    ExteriorPoint p;
    p.d = d;
    p.r = r;
    p.y = y;
    for (int i = 0; i < d - 1; ++i) p.cart[i] = r * std::cos(y) * om[i];
    p.cart[d - 1] = r * std::sin(y);
    return p;
}

ExteriorPoint ExteriorPoint::north(int d, double s) { return from_polar(d, s, 0.5 * kPi); }

ExteriorPoint ExteriorPoint::south(int d, double s) { return from_polar(d, s, -0.5 * kPi); }

std::vector<double> ExteriorPoint::cartesian() const { return {cart.begin(), cart.begin() + d}; }

double distance(const ExteriorPoint& a, const ExteriorPoint& b) {
    if (a.d != b.d) throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < a.d; ++i) s += (a.cart[i] - b.cart[i]) * (a.cart[i] - b.cart[i]);
    return std::sqrt(s);
}

double cos_angle(const ExteriorPoint& a, const ExteriorPoint& b) {
    if (a.d != b.d) throw std::invalid_argument("cos_angle: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < a.d; ++i) s += a.cart[i] * b.cart[i];
    return std::clamp(s / (a.r * b.r), -1.0, 1.0);
}

// ---------------------------------------------------------- Source phase

double dist_phase_phi(double x, double y, double s) {
    const double q = 1.0 + x;
    return std::sqrt(std::max(0.0, s * s - 2.0 * s * q * std::sin(y) + q * q));
}

double psi_boundary(double y, double s) { return dist_phase_phi(0.0, y, s); }

SourceGeometry apparent_contour(double s) {
    if (!(s > 1.0)) throw std::domain_error("apparent_contour: s must exceed 1");
    SourceGeometry g;
    g.s = s;
    g.y0 = std::asin(1.0 / s);
    g.psi0 = std::sqrt((s - 1.0) * (s + 1.0));
    g.arago_time = 2.0 * (g.y0 + g.psi0);
    g.contour_latitude = g.y0;
    return g;
}

// ----------------------------------------------------------- Langer phase

double zeta_tilde(double rho) {
    if (!(rho > 0.0)) throw std::domain_error("zeta_tilde: rho must be positive");
    const double u = rho - 1.0;
    if (std::abs(u) < kSeriesBand) {
        double s0, s1, s2;
        zeta_series(u, s0, s1, s2);
        return kCbrt2 * u * s0;
    }
    if (rho > 1.0) {
        const double w = std::sqrt((rho - 1.0) * (rho + 1.0)) - std::acos(1.0 / rho);
        return -std::pow(1.5 * w, 2.0 / 3.0);
    }
    const double q = std::sqrt((1.0 - rho) * (1.0 + rho));
    const double w = std::log((1.0 + q) / rho) - q;
    return std::pow(1.5 * w, 2.0 / 3.0);
}

double zeta_tilde_d1(double rho) {
    if (!(rho > 0.0)) throw std::domain_error("zeta_tilde: rho must be positive");
    const double u = rho - 1.0;
    if (std::abs(u) < kSeriesBand) {
        double s0, s1, s2;
        zeta_series(u, s0, s1, s2);
        return kCbrt2 * (s0 + u * s1);
    }
    const double z = zeta_tilde(rho);
    if (rho > 1.0) return -std::sqrt((1.0 - 1.0 / (rho * rho)) / (-z));
    return -std::sqrt((1.0 / (rho * rho) - 1.0) / z);
}

double zeta_tilde_d2(double rho) {
    if (!(rho > 0.0)) throw std::domain_error("zeta_tilde: rho must be positive");
    const double u = rho - 1.0;
    if (std::abs(u) < kSeriesBand) {
        double s0, s1, s2;
        zeta_series(u, s0, s1, s2);
        return kCbrt2 * (2.0 * s1 + u * s2);
    }
    const double z = zeta_tilde(rho), z1 = zeta_tilde_d1(rho);
    return -(2.0 / (rho * rho * rho) + z1 * z1 * z1) / (2.0 * z * z1);
}

double langer_prefactor(double rho) {
    if (!(rho > 0.0)) throw std::domain_error("langer_prefactor: rho must be positive");
    const double u = rho - 1.0;
    double q;
    if (std::abs(u) < kSeriesBand) {
        double s0, s1, s2;
        zeta_series(u, s0, s1, s2);
        q = -4.0 * kCbrt2 * s0 / (2.0 + u);
    } else {
        q = 4.0 * zeta_tilde(rho) / ((1.0 - rho) * (1.0 + rho));
    }
    return std::sqrt(std::sqrt(q));
}

std::pair<double, double> eikonal_pair(double x, double y, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("eikonal_pair: alpha must be positive");
    return {y * alpha, std::pow(alpha, 2.0 / 3.0) * zeta_tilde((1.0 + x) / alpha)};
}

std::array<double, 2> eikonal_residual(double x, double y, double alpha, double step) {
    const auto px = eikonal_pair(x + step, y, alpha), mx = eikonal_pair(x - step, y, alpha);
    const auto py = eikonal_pair(x, y + step, alpha), my = eikonal_pair(x, y - step, alpha);
    const double zeta = eikonal_pair(x, y, alpha).second;
    const double tx = (px.first - mx.first) / (2.0 * step), ty = (py.first - my.first) / (2.0 * step);
    const double zx = (px.second - mx.second) / (2.0 * step), zy = (py.second - my.second) / (2.0 * step);
    const double g = 1.0 / ((1.0 + x) * (1.0 + x));
    return {tx * tx + g * ty * ty - zeta * (zx * zx + g * zy * zy) - 1.0, tx * zx + g * ty * zy};
}

// -------------------------------------------------------------- Transport

double transport_symbol_gamma(double rho, int d, double tol) {
    check_dim(d);
    if (!(rho > 0.0)) throw std::domain_error("transport_symbol_gamma: rho must be positive");
    if (rho == 1.0) return 1.0;
    using State = std::array<double, 1>;
    // (log gamma)' = -(zeta'' + (d-1) zeta'/rho) / (2 zeta')
    auto rhs = [d](const State& g, State& dg, double r) {
        const double z1 = zeta_tilde_d1(r), z2 = zeta_tilde_d2(r);
        dg[0] = -(z2 + (d - 1) * z1 / r) / (2.0 * z1);
        (void)g;
    };
    namespace ode = boost::numeric::odeint;
    State lg{0.0};
    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<State>());
    const double span = rho - 1.0;
    const double dt0 = 0.01 * span;
    const size_t steps = ode::integrate_adaptive(stepper, rhs, lg, 1.0, rho, dt0);
    if (steps > 1000000) throw std::runtime_error("transport_symbol_gamma: step budget exhausted");
    return std::exp(lg[0]);
}

double transport_symbol_gamma_exact(double rho, int d) {
    check_dim(d);
    return std::sqrt(zeta_tilde_d1(1.0) / zeta_tilde_d1(rho)) * std::pow(rho, -0.5 * (d - 1));
}

double transport_a0(double x, double y, double alpha, int d) {
    return std::pow(std::cos(y), 0.5 * (d - 2)) * transport_symbol_gamma((1.0 + x) / alpha, d);
}

TravelTimes travel_times(double r, double s, double rho) {
    if (!(rho > 1.0 && r * rho > 1.0 && s * rho > 1.0))
        throw std::domain_error("travel_times: need rho > 1, r rho > 1 and s rho > 1");
    auto f = [](double u) { return std::sqrt((u - 1.0) * (u + 1.0)) / u; };
    return {f(r * rho) - f(s * rho), f(r * rho) + f(s * rho) - 2.0 * f(rho)};
}

double critical_value_gamma(double x, double alpha, double s) {
    const double q = 1.0 + x;
    if (!(s > q)) throw std::domain_error("critical_value_gamma: need s > 1 + x");
    if (!(alpha > 0.0 && alpha < q)) throw std::domain_error("critical_value_gamma: need 0 < alpha < 1 + x");
    auto g = [&](double y) { return s * q * std::cos(y) / dist_phase_phi(x, y, s) - alpha; };
    auto phase = [&](double y) { return -y * alpha - dist_phase_phi(x, y, s); };
    const double yc = std::asin(q / s);
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t it = 200;
    const auto lo = boost::math::tools::toms748_solve(g, -0.5 * kPi, yc, tol, it);
    it = 200;
    const auto hi = boost::math::tools::toms748_solve(g, yc, 0.5 * kPi, tol, it);
    const double ym = 0.5 * (lo.first + lo.second), yp = 0.5 * (hi.first + hi.second);
    return 0.5 * (phase(ym) + phase(yp));
}

double exterior_geodesic(double r, double s, double cos_theta) {
    if (r < 1.0 || s < 1.0) throw std::domain_error("exterior_geodesic: radii must be >= 1");
    const double theta = std::acos(std::clamp(cos_theta, -1.0, 1.0));
    const double ar = std::acos(1.0 / r), as = std::acos(1.0 / s);
    if (theta <= ar + as) return std::sqrt(std::max(0.0, r * r + s * s - 2.0 * r * s * std::cos(theta)));
    return std::sqrt((r - 1.0) * (r + 1.0)) + std::sqrt((s - 1.0) * (s + 1.0)) + (theta - ar - as);
}

} // namespace arago
