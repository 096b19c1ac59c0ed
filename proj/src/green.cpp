#include "arago/green.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace arago {

namespace {

constexpr double kUnderflowLog = -700.0;

double order_shift(int d) { return 0.5 * (d - 2); }

void check_inputs(int d, double tau, double r, double s) {
    if (d < 3 || d > 5) throw std::domain_error("green: dimension must be 3, 4 or 5");
    if (!(tau > 0.0)) throw std::domain_error("green: tau must be positive");
    if (r < 1.0 - 1e-12 || s < 1.0 - 1e-12) throw std::domain_error("green: radii must be >= 1");
}

struct Series {
    std::vector<cplx> terms;   // Z_m(cos theta) * kernel_m
    std::vector<double> proxy; // Z_m(1) * |kernel_m|
};

Series reflected_series(int d, double tau, double r, double s, double cos_theta, int M) {
    const double lam = order_shift(d);
    const auto jt = bessel_j_sequence(lam, tau, M);
    const auto ht = hankel_sequence(lam, tau, M);
    const auto hs = hankel_sequence(lam, s * tau, M);
    const auto hr = (r == s) ? hs : hankel_sequence(lam, r * tau, M);
    const auto z = zonal_sequence(d, cos_theta, M);
    const auto z1 = zonal_sequence(d, 1.0, M);
    const cplx pref = -green_mode_constant() * std::pow(r * s, -lam);
    Series out;
    out.terms.resize(static_cast<size_t>(M) + 1);
    out.proxy.resize(static_cast<size_t>(M) + 1);
    for (int m = 0; m <= M; ++m) {
        const cplx mant = jt[m].mant * hs[m].mant * hr[m].mant / ht[m].mant;
        const double lg = jt[m].lg + hs[m].lg + hr[m].lg - ht[m].lg;
        const cplx k = (lg < kUnderflowLog) ? cplx(0.0) : pref * mant * std::exp(lg);
        out.terms[m] = z[m] * k;
        out.proxy[m] = z1[m] * std::abs(k);
    }
    return out;
}

Series incoming_series(int d, double tau, double r, double s, double cos_theta, int M) {
    const double lam = order_shift(d);
    const double lo = std::min(r, s), hi = std::max(r, s);
    const auto j = bessel_j_sequence(lam, lo * tau, M);
    const auto h = hankel_sequence(lam, hi * tau, M);
    const auto z = zonal_sequence(d, cos_theta, M);
    const auto z1 = zonal_sequence(d, 1.0, M);
    const cplx pref = green_mode_constant() * std::pow(r * s, -lam);
    Series out;
    out.terms.resize(static_cast<size_t>(M) + 1);
    out.proxy.resize(static_cast<size_t>(M) + 1);
    for (int m = 0; m <= M; ++m) {
        const double lg = j[m].lg + h[m].lg;
        const cplx k = (lg < kUnderflowLog) ? cplx(0.0) : pref * j[m].mant * h[m].mant * std::exp(lg);
        out.terms[m] = z[m] * k;
        out.proxy[m] = z1[m] * std::abs(k);
    }
    return out;
}

double tail_estimate(const std::vector<double>& p) {
    const size_t n = p.size();
    if (n < 4) return p.empty() ? 0.0 : p.back();
    double q = 0.0;
    for (size_t k = n - 3; k < n; ++k) {
        if (p[k - 1] > 0.0) q = std::max(q, p[k] / p[k - 1]);
    }
    const double last = p.back();
    if (last == 0.0) return 0.0;
    if (q < 1.0) return last * q / (1.0 - q);
    return last * static_cast<double>(n);
}

template <class Builder>
ModeSum adaptive_sum(Builder build, int M0, const ModeSumConfig& cfg, const char* what) {
    int M = (cfg.M > 0) ? cfg.M : M0;
    while (true) {
        const Series ser = build(M);
        cplx sum = 0.0;
        for (const cplx& t : ser.terms) sum += t;
        const double tail = tail_estimate(ser.proxy);
        if (cfg.method == ModeSumMethod::fixed_M) return {sum, M + 1, tail};
        const double lim = cfg.tail_tolerance * std::abs(sum);
        bool ok = M >= 3;
        for (int k = M - 2; ok && k <= M; ++k) ok = ser.proxy[k] <= lim;
        if (ok) return {sum, M + 1, tail};
        if (M >= cfg.M_max) {
            std::ostringstream os;
            os << what << ": mode sum not converged at M = " << M << ", tail estimate " << tail;
            throw std::runtime_error(os.str());
        }
        M = std::min(cfg.M_max, M + M / 2 + 8);
    }
}

} // namespace

cplx green_mode_constant() { return cplx(0.0, 0.5 * kPi); }

RadialModeKernel radial_mode(int d, int m, double tau, double r, double s) {
    check_inputs(d, tau, r, s);
    if (m < 0) throw std::domain_error("radial_mode: negative degree");
    const double lam = order_shift(d);
    const double lo = std::min(r, s), hi = std::max(r, s);
    const auto jt = bessel_j_sequence(lam, tau, m);
    const auto jl = bessel_j_sequence(lam, lo * tau, m);
    const auto ht = hankel_sequence(lam, tau, m);
    const auto hl = hankel_sequence(lam, lo * tau, m);
    const auto hh = hankel_sequence(lam, hi * tau, m);
    const cplx pref = green_mode_constant() * std::pow(r * s, -lam);

    RadialModeKernel k;
    k.d = d;
    k.m = m;
    k.nu = m + lam;
    k.tau = tau;
    k.r = r;
    k.s = s;
    const double lg_free = jl[m].lg + hh[m].lg;
    const double lg_refl = jt[m].lg + hl[m].lg + hh[m].lg - ht[m].lg;
    const cplx mf = pref * jl[m].mant * hh[m].mant;
    const cplx mr = -pref * jt[m].mant * hl[m].mant * hh[m].mant / ht[m].mant;
    if (std::max(lg_free, lg_refl) < kUnderflowLog) {
        k.negligible = true;
        k.bound = std::exp(std::log(std::abs(mf)) + lg_free) + std::exp(std::log(std::abs(mr)) + lg_refl);
        return k;
    }
    k.free_part = mf * std::exp(lg_free);
    k.reflected_part = mr * std::exp(lg_refl);
    k.total = k.free_part + k.reflected_part;
    return k;
}

cplx free_green(int d, double tau, double dist) {
    if (d < 3 || d > 5) throw std::domain_error("free_green: dimension must be 3, 4 or 5");
    if (!(dist > 0.0)) throw std::domain_error("free_green: distance must be positive");
    if (!(tau > 0.0)) throw std::domain_error("free_green: tau must be positive");
    const cplx e = std::polar(1.0, tau * dist);
    if (d == 3) return e / (4.0 * kPi * dist);
    if (d == 5) {
        const double x = tau * dist;
        // (i/4) (tau/(2 pi rho))^{3/2} H_{3/2}(x), H_{3/2}(x) = -sqrt(2/(pi x)) e^{ix} (1 + i/x)
        const double pre = std::pow(tau / (2.0 * kPi * dist), 1.5) * std::sqrt(2.0 / (kPi * x));
        return cplx(0.0, 0.25) * pre * (-e) * cplx(1.0, 1.0 / x);
    }
    const double x = tau * dist;
    const cplx h1 = (x >= 30.0) ? hankel_sequence(1.0, x, 0).front().value() : bessel(1.0, x).h1;
    return cplx(0.0, 0.25) * (tau / (2.0 * kPi * dist)) * h1;
}

int default_truncation(double tau, double r, double s, double tol) {
    const double rs = r * s;
    double geo = 200.0;
    if (rs > 1.0 + 1e-12) geo = std::min(geo, std::log(1.0 / tol) / std::log(rs));
    return static_cast<int>(std::ceil(tau) + std::ceil(6.0 * std::cbrt(tau)) + std::ceil(geo));
}

ModeSum reflected_sum(int d, double tau, double r, double s, double cos_theta, const ModeSumConfig& cfg) {
    check_inputs(d, tau, r, s);
    if (!cfg.include_reflection) return {cplx(0.0), 0, 0.0};
    const int M0 = default_truncation(tau, r, s, cfg.tail_tolerance);
    return adaptive_sum([&](int M) { return reflected_series(d, tau, r, s, cos_theta, M); }, M0, cfg, "reflected_sum");
}

ModeSum free_mode_sum(int d, double tau, double r, double s, double cos_theta, const ModeSumConfig& cfg) {
    check_inputs(d, tau, r, s);
    const double lo = std::min(r, s), hi = std::max(r, s);
    if (!(hi > lo)) throw std::domain_error("free_mode_sum: radii must differ");
    const double x = hi * tau;
    const int M0 = static_cast<int>(std::ceil(x) + std::ceil(6.0 * std::cbrt(x)) +
                                    std::ceil(std::log(1.0 / cfg.tail_tolerance) / std::log(hi / lo)));
    ModeSumConfig c = cfg;
    c.M_max = std::max(cfg.M_max, 2 * M0);
    return adaptive_sum([&](int M) { return incoming_series(d, tau, r, s, cos_theta, M); }, M0, c, "free_mode_sum");
}

GreenValue exact_green(int d, double tau, const ExteriorPoint& source, const ExteriorPoint& target, const ModeSumConfig& cfg) {
    if (source.d != d || target.d != d) throw std::invalid_argument("exact_green: dimension mismatch");
    const double dist = distance(source, target);
    GreenValue g;
    g.free_part = free_green(d, tau, dist);
    const ModeSum rs = reflected_sum(d, tau, target.r, source.r, cos_angle(source, target), cfg);
    g.reflected_part = rs.value;
    g.value = g.free_part + g.reflected_part;
    g.modes_used = rs.modes_used;
    g.tail_bound = rs.tail_bound;
    return g;
}

std::vector<ModeRecord> mode_table(int d, double tau, double r, double s, double cos_theta, int M) {
    check_inputs(d, tau, r, s);
    const Series refl = reflected_series(d, tau, r, s, cos_theta, M);
    Series inc;
    if (std::abs(r - s) > 0.0) inc = incoming_series(d, tau, r, s, cos_theta, M);
    std::vector<ModeRecord> out(static_cast<size_t>(M) + 1);
    double tail = 0.0;
    for (int m = M; m >= 0; --m) {
        out[m] = {m, m + order_shift(d), inc.terms.empty() ? 0.0 : std::abs(inc.terms[m]), std::abs(refl.terms[m]), tail};
        tail += refl.proxy[m];
    }
    return out;
}

double helmholtz_residual(int d, double tau, const FieldSampler& field, const std::vector<double>& point, double step) {
    if (static_cast<int>(point.size()) != d) throw std::invalid_argument("helmholtz_residual: point dimension");
    const cplx u0 = field(point);
    cplx lap = 0.0;
    std::vector<double> p = point;
    for (int i = 0; i < d; ++i) {
        p[i] = point[i] + step;
        const cplx up = field(p);
        p[i] = point[i] - step;
        const cplx um = field(p);
        p[i] = point[i];
        lap += (up - 2.0 * u0 + um) / (step * step);
    }
    return std::abs(lap + tau * tau * u0) / (tau * tau * std::abs(u0));
}

} // namespace arago
