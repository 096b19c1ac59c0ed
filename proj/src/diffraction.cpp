#include "arago/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace arago {

namespace {

constexpr double kNegligibleRatio = 1e-9;

double langer_x(double beta, double tau) {
    const double t23 = std::cbrt(tau * tau);
    const double alpha = 1.0 - beta / t23;
    return t23 * std::pow(alpha, 2.0 / 3.0) * zeta_tilde(1.0 / alpha);
}

// Sum of GK15 panels; returns value and |K - G| error.
template <class F>
std::pair<cplx, double> panel_sum(const OscQuadRule& q, F f) {
    const size_t per = 15;
    cplx sum = 0.0;
    double err = 0.0;
    for (size_t p = 0; p * per < q.nodes.size(); ++p) {
        cplx k = 0.0, g = 0.0;
        for (size_t j = p * per; j < (p + 1) * per; ++j) {
            const cplx v = f(q.nodes[j]);
            k += q.wk[j] * v;
            g += q.wg[j] * v;
        }
        sum += k;
        err += std::abs(k - g);
    }
    return {sum, err};
}

double lower_cutoff(double tau) {
    double b = 0.0;
    for (int i = 0; i < 400; ++i) {
        b += 0.25;
        const AiryValue a = airy_eval(langer_x(-b, tau));
        if (std::abs(a.a / a.a_plus) < kNegligibleRatio) return b;
    }
    throw std::runtime_error("lambda_integral: no decay on the illuminated side");
}

} // namespace

LambdaValue lambda_integral(double z, double tau, double b_cap) {
    if (!(z > 0.0) || z > 10.0) throw std::domain_error("lambda_integral: z must lie in (0, 10]");
    if (!(tau >= 8.0)) throw std::domain_error("lambda_integral: tau must be >= 8");
    LambdaValue out;
    const double t23 = std::cbrt(tau * tau);
    out.b_plus = std::min(0.25 * t23, b_cap);
    out.b_minus = lower_cutoff(tau);

    const cplx e_plus = std::polar(1.0, kPi / 3.0), e_minus = std::conj(e_plus);

    const OscQuadRule qn = OscQuadRule::make(-out.b_minus, 0.0, z + 1.0, 0.5 * kPi, 16);
    const auto [vn, en] = panel_sum(qn, [&](double b) {
        const AiryValue a = airy_eval(langer_x(b, tau));
        return std::polar(1.0, z * b) * (a.a / a.a_plus);
    });

    const double bp = out.b_plus, half = 0.5 * bp;
    const double rate = z + 2.0 * std::sqrt(2.0) * std::sqrt(bp) + 1.0;
    const OscQuadRule qp = OscQuadRule::make(0.0, bp, rate, 0.5 * kPi, 16);
    const auto [vp, ep] = panel_sum(qp, [&](double b) {
        const double cut = 1.0 - smoothstep((b - half) / half);
        if (cut == 0.0) return cplx(0.0);
        const AiryValue a = airy_eval(langer_x(b, tau));
        return cut * std::polar(1.0, z * b) * e_minus * (a.a_minus / a.a_plus);
    });

    out.value = vn + vp + e_plus * cplx(0.0, 1.0) / z;
    out.error = en + ep;
    out.nodes = static_cast<long>(qn.nodes.size() + qp.nodes.size());
    return out;
}

std::vector<double> default_lambda_grid() {
    std::vector<double> g;
    for (int i = 10; i <= 95; ++i) g.push_back(0.01 * i);
    return g;
}

LambdaScan lambda_scan(double tau, const std::vector<double>& z_grid) {
    std::vector<LambdaValue> v;
    v.reserve(z_grid.size());
    for (double z : z_grid) v.push_back(lambda_integral(z, tau));
    return lambda_scan_from_values(z_grid, v);
}

LambdaScan lambda_scan_from_values(const std::vector<double>& z_grid, const std::vector<LambdaValue>& values) {
    if (z_grid.size() < 2) throw std::invalid_argument("lambda_scan: grid too small");
    if (values.size() != z_grid.size()) throw std::invalid_argument("lambda_scan: size mismatch");
    LambdaScan s;
    s.z = z_grid;
    s.modulus.reserve(z_grid.size());
    for (const auto& v : values) s.modulus.push_back(std::abs(v.value));
    const double peak = *std::max_element(s.modulus.begin(), s.modulus.end());
    if (!(peak > 0.0)) throw std::runtime_error("lambda_scan: vanishing integral");
    const double thr = peak / 3.0;
    size_t best_lo = 0, best_len = 0;
    for (size_t i = 0; i < s.z.size();) {
        if (s.modulus[i] < thr) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < s.z.size() && s.modulus[j] >= thr) ++j;
        if (s.z[j - 1] - s.z[i] > (best_len ? s.z[best_lo + best_len - 1] - s.z[best_lo] : -1.0)) {
            best_lo = i;
            best_len = j - i;
        }
        i = j;
    }
    s.z1 = s.z[best_lo];
    s.z2 = s.z[best_lo + best_len - 1];
    s.c = *std::min_element(s.modulus.begin() + best_lo, s.modulus.begin() + best_lo + best_len);
    return s;
}

double interval_overlap(double a1, double a2, double b1, double b2) {
    const double inter = std::max(0.0, std::min(a2, b2) - std::max(a1, b1));
    const double uni = std::max(a2, b2) - std::min(a1, b1);
    return uni > 0.0 ? inter / uni : 1.0;
}

AragoConfig AragoConfig::from_scan(int d, const LambdaScan& scan, AragoFlow flow) {
    if (!(scan.z2 > scan.z1)) throw std::domain_error("AragoConfig: degenerate plateau");
    AragoConfig c;
    c.d = d;
    c.flow = flow;
    c.z1 = scan.z1;
    c.z2 = scan.z2;
    c.gamma = 0.25 * (scan.z1 + scan.z2);
    c.eps = (scan.z2 - scan.z1) / (4.0 * (scan.z1 + scan.z2));
    return c;
}

AragoPoint AragoConfig::point(double h) const {
    AragoPoint p;
    p.h = h;
    p.y0 = gamma * std::cbrt(h);
    if (!(p.y0 < 0.5 * kPi)) throw std::domain_error("AragoConfig: gamma h^{1/3} must be below pi/2");
    p.s = 1.0 / std::sin(p.y0);
    const double psi0 = std::sqrt(p.s * p.s - 1.0);
    const double e = eps;
    const std::array<double, 4> u{std::pow(1.0 - e, 3), std::pow(1.0 - 0.5 * e, 3), std::pow(1.0 + 0.5 * e, 3),
                                  std::pow(1.0 + e, 3)};
    if (flow == AragoFlow::wave) {
        p.t = 2.0 * (p.y0 + psi0);
        p.window = FrequencyWindow::plateau(h, u, profile);
    } else {
        p.t = h * (p.y0 + psi0);
        p.window = FrequencyWindow::plateau(h * h, u, profile);
    }
    return p;
}

void AragoConfig::validate() const {
    if (d < 3 || d > 5) throw std::domain_error("AragoConfig: dimension must be 3, 4 or 5");
    if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("AragoConfig: eps must lie in (0, 1/2)");
    if (h_list.size() < 3) throw std::domain_error("AragoConfig: at least three h values are needed");
    if (z2 > z1) {
        const double lo = 2.0 * gamma * (1.0 - eps), hi = 2.0 * gamma * (1.0 + eps);
        if (lo < z1 - 1e-12 || hi > z2 + 1e-12) {
            std::ostringstream os;
            os << "AragoConfig: 2 gamma (h tau)^{1/3} spans [" << lo << ", " << hi << "], outside [" << z1 << ", "
               << z2 << "]";
            throw std::domain_error(os.str());
        }
    }
    for (double h : h_list) {
        if (!(h > 0.0 && h < 1.0)) throw std::domain_error("AragoConfig: h must lie in (0, 1)");
        point(h);
    }
}

SlopeFit fit_power_law(const std::vector<double>& h, const std::vector<double>& amp) {
    if (h.size() != amp.size()) throw std::invalid_argument("fit_power_law: sample sizes differ");
    if (h.size() < 3) throw std::invalid_argument("fit_power_law: at least three samples are needed");
    SlopeFit f;
    for (size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0.0 && amp[i] > 0.0)) throw std::domain_error("fit_power_law: samples must be positive");
        f.log_h.push_back(std::log(h[i]));
        f.log_amp.push_back(std::log(amp[i]));
    }
    const double n = static_cast<double>(h.size());
    const double mx = std::accumulate(f.log_h.begin(), f.log_h.end(), 0.0) / n;
    const double my = std::accumulate(f.log_amp.begin(), f.log_amp.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < h.size(); ++i) {
        sxx += (f.log_h[i] - mx) * (f.log_h[i] - mx);
        sxy += (f.log_h[i] - mx) * (f.log_amp[i] - my);
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (size_t i = 0; i < h.size(); ++i)
        f.max_residual = std::max(f.max_residual, std::abs(f.log_amp[i] - f.intercept - f.slope * f.log_h[i]));
    return f;
}

AragoRecord measure_arago_point(const AragoConfig& cfg, double h) {
    AragoRecord rec;
    rec.point = cfg.point(h);
    const Geometry g{cfg.d, ExteriorPoint::north(cfg.d, rec.point.s), ExteriorPoint::south(cfg.d, rec.point.s)};
    const KernelValue kv = (cfg.flow == AragoFlow::wave)
                               ? wave_kernel(g, rec.point.window, FieldPart::total, {rec.point.t}, cfg.quad).front()
                               : schrodinger_kernel(g, rec.point.window, FieldPart::total, {rec.point.t}, cfg.quad).front();
    rec.amplitude = kv.value;
    rec.quad_err = kv.quad_err;
    rec.nodes = kv.nodes;
    rec.modes_used = kv.modes_used;
    rec.tail_bound = kv.tail_bound;
    return rec;
}

AragoMeasurement measure_arago(const AragoConfig& cfg) {
    cfg.validate();
    AragoMeasurement m;
    std::vector<double> hs, amps;
    for (double h : cfg.h_list) {
        m.records.push_back(measure_arago_point(cfg, h));
        hs.push_back(cfg.flow == AragoFlow::wave ? h : h * h);
        amps.push_back(std::abs(m.records.back().amplitude));
    }
    m.fit = fit_power_law(hs, amps);
    return m;
}

double arago_target_slope(int d, AragoFlow flow) {
    if (flow == AragoFlow::wave) return -(2.0 * d - 1.0) / 3.0;
    return -(2.0 * d - 3.0) / 6.0;
}

cplx arago_predict(const AragoConfig& cfg, double h, int nodes) {
    const AragoPoint p = cfg.point(h);
    const int d = cfg.d;
    const double psi0 = std::sqrt(p.s * p.s - 1.0);
    const double sigma0 = std::pow(std::cos(p.y0), 0.5 * (d - 2)) * std::cbrt(2.0);
    const bool wave = cfg.flow == AragoFlow::wave;
    const auto [lo, hi] = wave ? p.window.wave_support() : p.window.schrodinger_support();
    const double path = 2.0 * (p.y0 + psi0);
    const double rate = wave ? std::abs(p.t - path) : std::max(std::abs(2.0 * p.t * lo - path), std::abs(2.0 * p.t * hi - path));
    const OscQuadRule q = OscQuadRule::make(lo, hi, rate, 0.5 * kPi, std::max(1, nodes / 15));
    const double y0 = wave ? p.y0 : cfg.gamma * std::cbrt(h);
    const auto [v, err] = panel_sum(q, [&](double tau) {
        const double chi = wave ? p.window.chi_wave(tau) : p.window.chi_schrodinger(tau);
        if (chi == 0.0) return cplx(0.0);
        const double z = 2.0 * y0 * std::cbrt(tau);
        const cplx lam = lambda_integral(z, tau).value;
        const double ph = (wave ? p.t * tau : p.t * tau * tau) - path * tau;
        const double amp = chi * std::pow(tau, (d - 2) + 1.0 / 3.0) * std::pow(psi0, -(d - 1.0)) * sigma0;
        return std::polar(amp, ph) * lam;
    });
    (void)err;
    return v / kPi;
}

} // namespace arago
