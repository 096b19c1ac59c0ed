#include "arago/timeflow.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace arago {

namespace {

struct ReferenceRule {
    std::vector<double> x, wk, wg; // on [-1, 1]
};

const ReferenceRule& reference_rule() {
    static const ReferenceRule rule = [] {
        using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
        using G = boost::math::quadrature::gauss<double, 7>;
        const auto& ka = GK::abscissa();
        const auto& kw = GK::weights();
        const auto& ga = G::abscissa();
        const auto& gw = G::weights();
        auto gauss_weight = [&](double x) {
            for (size_t j = 0; j < ga.size(); ++j)
                if (std::abs(ga[j] - x) < 1e-14) return gw[j];
            return 0.0;
        };
        ReferenceRule r;
        for (size_t i = ka.size(); i-- > 1;) {
            r.x.push_back(-ka[i]);
            r.wk.push_back(kw[i]);
            r.wg.push_back(gauss_weight(ka[i]));
        }
        for (size_t i = 0; i < ka.size(); ++i) {
            r.x.push_back(ka[i]);
            r.wk.push_back(kw[i]);
            r.wg.push_back(gauss_weight(ka[i]));
        }
        return r;
    }();
    return rule;
}

double step_profile(WindowProfile p, double x) {
    if (p == WindowProfile::cosine_taper) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return 0.5 * (1.0 - std::cos(kPi * x));
    }
    return smoothstep(x);
}

cplx density_field(const Geometry& g, FieldPart part, double tau, const ModeSumConfig& cfg, int& modes, double& tail) {
    cplx G = 0.0;
    if (part != FieldPart::free) {
        const ModeSum rs = reflected_sum(g.d, tau, g.target.r, g.source.r, cos_angle(g.source, g.target), cfg);
        G += rs.value;
        modes = std::max(modes, rs.modes_used);
        tail = std::max(tail, rs.tail_bound);
    }
    if (part != FieldPart::reflected) G += free_green(g.d, tau, distance(g.source, g.target));
    return G;
}

void check_budget(long nodes, long budget) {
    if (nodes > budget) {
        std::ostringstream os;
        os << "oscillatory quadrature needs " << nodes << " nodes, budget is " << budget;
        throw BudgetExhausted(os.str());
    }
}

} // namespace

double smoothstep(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

FrequencyWindow FrequencyWindow::centered(double h, double w, WindowProfile p) {
    return plateau(h, {1.0 - w, 1.0 - 0.5 * w, 1.0 + 0.5 * w, 1.0 + w}, p);
}

FrequencyWindow FrequencyWindow::plateau(double h, std::array<double, 4> b, WindowProfile p) {
    if (!(h > 0.0 && h < 1.0)) throw std::domain_error("FrequencyWindow: h must lie in (0, 1)");
    if (!(b[0] > 0.0 && b[0] < b[1] && b[1] <= b[2] && b[2] < b[3]))
        throw std::domain_error("FrequencyWindow: breakpoints must be increasing and positive");
    FrequencyWindow w;
    w.h = h;
    w.profile = p;
    w.u = b;
    return w;
}

double FrequencyWindow::profile_value(double v) const {
    if (v <= u[0] || v >= u[3]) return 0.0;
    if (v < u[1]) return step_profile(profile, (v - u[0]) / (u[1] - u[0]));
    if (v > u[2]) return step_profile(profile, (u[3] - v) / (u[3] - u[2]));
    return 1.0;
}

std::pair<double, double> FrequencyWindow::schrodinger_support() const {
    return {std::sqrt(u[0] / h), std::sqrt(u[3] / h)};
}

OscQuadRule OscQuadRule::make(double a, double b, double rate, double panel_phase, int min_panels) {
    if (!(b > a)) throw std::domain_error("OscQuadRule: empty interval");
    const ReferenceRule& ref = reference_rule();
    const double need = (b - a) * std::max(rate, 0.0) / panel_phase;
    const long n = std::max<long>(min_panels, static_cast<long>(std::ceil(need)));
    OscQuadRule q;
    q.edges.resize(static_cast<size_t>(n) + 1);
    for (long i = 0; i <= n; ++i) q.edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    const size_t k = ref.x.size();
    q.nodes.reserve(static_cast<size_t>(n) * k);
    q.wk.reserve(static_cast<size_t>(n) * k);
    q.wg.reserve(static_cast<size_t>(n) * k);
    for (long i = 0; i < n; ++i) {
        const double c = 0.5 * (q.edges[i] + q.edges[i + 1]), hw = 0.5 * (q.edges[i + 1] - q.edges[i]);
        for (size_t j = 0; j < k; ++j) {
            q.nodes.push_back(c + hw * ref.x[j]);
            q.wk.push_back(hw * ref.wk[j]);
            q.wg.push_back(hw * ref.wg[j]);
        }
    }
    q.phase_resolution = (b - a) / static_cast<double>(n) * rate / static_cast<double>(k);
    return q;
}

double density_rate(const Geometry& g) { return g.source.r + g.target.r + kPi; }

SpectralSamples sample_density(const Geometry& g, const FrequencyWindow& w, Flow flow, FieldPart part, double max_rate,
                               const QuadOptions& opts) {
    const auto [lo, hi] = (flow == Flow::wave) ? w.wave_support() : w.schrodinger_support();
    SpectralSamples s;
    s.rule = OscQuadRule::make(lo, hi, max_rate, opts.panel_phase, opts.min_panels);
    check_budget(static_cast<long>(s.rule.nodes.size()), opts.node_budget);
    s.density.resize(s.rule.nodes.size());
    for (size_t i = 0; i < s.rule.nodes.size(); ++i) {
        const double tau = s.rule.nodes[i];
        const double chi = (flow == Flow::wave) ? w.chi_wave(tau) : w.chi_schrodinger(tau);
        if (chi == 0.0) {
            s.density[i] = 0.0;
            continue;
        }
        const cplx G = density_field(g, part, tau, opts.modes, s.modes_used, s.tail_bound);
        s.density[i] = chi * 2.0 * tau * G.imag();
    }
    return s;
}

namespace {

std::vector<KernelValue> kernel_from_samples(const SpectralSamples& s, Flow flow, const std::vector<double>& times) {
    const size_t per = reference_rule().x.size();
    std::vector<KernelValue> out;
    out.reserve(times.size());
    for (double t : times) {
        KernelValue kv;
        kv.t = t;
        cplx sum = 0.0;
        double err = 0.0;
        for (size_t p = 0; p * per < s.rule.nodes.size(); ++p) {
            cplx k = 0.0, gsum = 0.0;
            for (size_t j = p * per; j < (p + 1) * per; ++j) {
                const double tau = s.rule.nodes[j];
                const double ph = (flow == Flow::wave) ? t * tau : t * tau * tau;
                const cplx f = std::polar(s.density[j], ph);
                k += s.rule.wk[j] * f;
                gsum += s.rule.wg[j] * f;
            }
            sum += k;
            err += std::abs(k - gsum);
        }
        kv.value = sum / kPi;
        kv.quad_err = err / kPi;
        kv.nodes = static_cast<long>(s.rule.nodes.size());
        kv.modes_used = s.modes_used;
        kv.tail_bound = s.tail_bound;
        out.push_back(kv);
    }
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

std::vector<KernelValue> wave_kernel(const Geometry& g, const FrequencyWindow& w, FieldPart part,
                                     const std::vector<double>& times, const QuadOptions& opts) {
    const double rate = max_abs(times) + density_rate(g);
    const SpectralSamples s = sample_density(g, w, Flow::wave, part, rate, opts);
    return kernel_from_samples(s, Flow::wave, times);
}

std::vector<KernelValue> schrodinger_kernel(const Geometry& g, const FrequencyWindow& w, FieldPart part,
                                            const std::vector<double>& times, const QuadOptions& opts) {
    for (double t : times)
        if (t == 0.0) throw std::domain_error("schrodinger_kernel: t must be nonzero");
    const double rate = 2.0 * max_abs(times) * w.schrodinger_support().second + density_rate(g);
    const SpectralSamples s = sample_density(g, w, Flow::schrodinger, part, rate, opts);
    return kernel_from_samples(s, Flow::schrodinger, times);
}

KernelValue wave_reflected(int d, const FrequencyWindow& w, const ExteriorPoint& source, const ExteriorPoint& target,
                           double t, const QuadOptions& opts) {
    return wave_kernel({d, source, target}, w, FieldPart::reflected, {t}, opts).front();
}

KernelValue wave_free(int d, const FrequencyWindow& w, const ExteriorPoint& source, const ExteriorPoint& target, double t,
                      const QuadOptions& opts) {
    return wave_kernel({d, source, target}, w, FieldPart::free, {t}, opts).front();
}

KernelValue schrodinger_windowed(int d, const FrequencyWindow& w, const ExteriorPoint& source,
                                 const ExteriorPoint& target, double t, FieldPart part, const QuadOptions& opts) {
    return schrodinger_kernel({d, source, target}, w, part, {t}, opts).front();
}

KanaiValue schrodinger_kanai(const Geometry& g, const FrequencyWindow& w, FieldPart part, double t,
                             const QuadOptions& opts) {
    if (!(t > 0.0)) throw std::domain_error("schrodinger_kanai: t must be positive");
    const double geo = exterior_geodesic(g.source.r, g.target.r, cos_angle(g.source, g.target));
    const double t_cap = geo + 150.0;
    const SpectralSamples s = sample_density(g, w, Flow::schrodinger, part, t_cap + density_rate(g), opts);

    // H(T) = (1/pi) int sin(T tau)/tau chi rho d tau = Im(e^{i T tc} B(T)), B band-limited
    const auto [tau_lo, tau_top] = w.schrodinger_support();
    const double tc = 0.5 * (tau_lo + tau_top);
    std::vector<double> wd, dk;
    for (size_t i = 0; i < s.density.size(); ++i) {
        if (s.density[i] == 0.0) continue;
        wd.push_back(s.rule.wk[i] * s.density[i] / s.rule.nodes[i] / kPi);
        dk.push_back(s.rule.nodes[i] - tc);
    }
    auto B = [&](double T) {
        cplx acc = 0.0;
        for (size_t i = 0; i < wd.size(); ++i) acc += std::polar(wd[i], T * dk[i]);
        return acc;
    };

    const double dT = 0.05;
    double peak = 0.0;
    std::vector<double> scan;
    for (double T = 0.0; T <= t_cap; T += dT) {
        const double v = T * std::abs(B(T));
        scan.push_back(v);
        peak = std::max(peak, v);
    }
    double t_max = dT;
    for (size_t i = 0; i < scan.size(); ++i)
        if (scan[i] > 1e-7 * peak) t_max = (static_cast<double>(i) + 1.0) * dT;
    t_max = std::min(t_cap, t_max + 2.0);

    // Chebyshev interpolation of B on chunks of length kChunk
    constexpr double kChunk = 4.0;
    constexpr int kCheb = 40;
    std::array<double, kCheb> cx{}, cw{};
    for (int j = 0; j < kCheb; ++j) {
        const double th = (2.0 * j + 1.0) * kPi / (2.0 * kCheb);
        cx[j] = std::cos(th);
        cw[j] = ((j % 2 == 0) ? 1.0 : -1.0) * std::sin(th);
    }
    const int chunks = static_cast<int>(std::ceil(t_max / kChunk));
    std::vector<std::array<cplx, kCheb>> cv(static_cast<size_t>(chunks));
    for (int c = 0; c < chunks; ++c)
        for (int j = 0; j < kCheb; ++j) cv[c][j] = B(kChunk * (c + 0.5 + 0.5 * cx[j]));
    auto H = [&](double T) {
        const int c = std::min(chunks - 1, static_cast<int>(T / kChunk));
        const double x = (T - kChunk * (c + 0.5)) / (0.5 * kChunk);
        cplx num = 0.0;
        double den = 0.0;
        for (int j = 0; j < kCheb; ++j) {
            const double dx = x - cx[j];
            if (dx == 0.0) return (std::polar(1.0, T * tc) * cv[c][j]).imag();
            const double q = cw[j] / dx;
            num += q * cv[c][j];
            den += q;
        }
        return (std::polar(1.0, T * tc) * num / den).imag();
    };

    const double rate = t_max / (2.0 * t) + tau_top;
    const OscQuadRule rule = OscQuadRule::make(0.0, t_max, rate, kPi, opts.min_panels);
    check_budget(static_cast<long>(rule.nodes.size()), opts.node_budget);
    const size_t per = reference_rule().x.size();
    cplx sum = 0.0;
    double err = 0.0;
    for (size_t p = 0; p * per < rule.nodes.size(); ++p) {
        cplx k = 0.0, gs = 0.0;
        for (size_t j = p * per; j < (p + 1) * per; ++j) {
            const double T = rule.nodes[j];
            const cplx f = T * std::polar(H(T), -T * T / (4.0 * t));
            k += rule.wk[j] * f;
            gs += rule.wg[j] * f;
        }
        sum += k;
        err += std::abs(k - gs);
    }
    const cplx pre = std::polar(1.0 / std::sqrt(kPi * t), 0.25 * kPi) * cplx(0.0, 0.5 / t);
    KanaiValue kv;
    kv.value = pre * sum;
    kv.quad_err = std::abs(pre) * err;
    kv.t_max = t_max;
    kv.t_nodes = static_cast<long>(rule.nodes.size());
    return kv;
}

std::pair<double, double> time_window_hint(const ExteriorPoint& source, const ExteriorPoint& target, double c0) {
    const double t_min = (source.r - 1.0) + (target.r - 1.0);
    return {t_min, t_min + c0};
}

} // namespace arago
