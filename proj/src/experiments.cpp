#include "arago/experiments.hpp"
#include "arago/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace arago {

using nlohmann::json;

namespace {

const std::map<std::string, Experiment>& experiment_names() {
    static const std::map<std::string, Experiment> m{
        {"green_check", Experiment::green_check},
        {"wave_dispersion_3d", Experiment::wave_dispersion_3d},
        {"schrodinger_dispersion_3d", Experiment::schrodinger_dispersion_3d},
        {"arago_sweep", Experiment::arago_sweep},
        {"lambda_scan", Experiment::lambda_scan},
        {"specfun_table", Experiment::specfun_table},
        {"cfie_compare", Experiment::cfie_compare},
    };
    return m;
}

template <class T>
T get_number(const json& j, const std::string& key, T lo, T hi) {
    if (!j.is_number()) throw ConfigError("config: '" + key + "' must be a number");
    const T v = j.get<T>();
    if (!(v >= lo && v <= hi)) {
        std::ostringstream os;
        os << "config: '" << key << "' = " << v << " outside [" << lo << ", " << hi << "]";
        throw ConfigError(os.str());
    }
    return v;
}

void reject_unknown(const json& j, const std::vector<std::string>& known, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError("config: unknown key '" + where + it.key() + "'");
}

double relerr(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

CheckRow make_check(std::string name, std::string args, double value, double tol) {
    return {std::move(name), std::move(args), value, tol, value <= tol};
}

std::string args_of(std::initializer_list<std::pair<const char*, double>> kv) {
    std::string s;
    for (const auto& [k, v] : kv) {
        if (!s.empty()) s += ' ';
        s += k;
        s += '=';
        s += format_number(v);
    }
    return s;
}

ExteriorPoint random_exterior(std::mt19937_64& rng, int d, double rmin, double rmax) {
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_real_distribution<double> ur(rmin, rmax);
    std::vector<double> c(static_cast<size_t>(d));
    double n = 0.0;
    while (n < 1e-3) {
        n = 0.0;
        for (auto& x : c) {
            x = n01(rng);
            n += x * x;
        }
        n = std::sqrt(n);
    }
    const double r = ur(rng);
    for (auto& x : c) x *= r / n;
    return ExteriorPoint::from_cartesian(d, c);
}

double angle_between(const ExteriorPoint& a, const ExteriorPoint& b) {
    return std::acos(std::clamp(cos_angle(a, b), -1.0, 1.0));
}

KernelRow kernel_row(int d, double h, double gamma, const ExteriorPoint& src, const ExteriorPoint& tgt, const KernelValue& k) {
    KernelRow r;
    r.d = d;
    r.h = h;
    r.gamma = gamma;
    r.s = src.r;
    r.r = tgt.r;
    r.theta = angle_between(src, tgt);
    r.t = k.t;
    r.value = k.value;
    r.modes_used = k.modes_used;
    r.nodes_used = k.nodes;
    r.tail_bound = k.tail_bound;
    r.quad_err = k.quad_err;
    return r;
}

Table kernel_table(const std::vector<KernelRow>& rows) {
    Table t;
    t.header = kernel_header();
    for (const auto& r : rows) t.rows.push_back(kernel_cells(r));
    return t;
}

json ratio_summary(const std::vector<double>& keys, const std::vector<double>& maxima, const char* key_name) {
    json per = json::array();
    for (size_t i = 0; i < keys.size(); ++i) per.push_back({{key_name, keys[i]}, {"max_scaled", maxima[i]}});
    const auto [mn, mx] = std::minmax_element(maxima.begin(), maxima.end());
    return {{"per_value", per}, {"variation_factor", *mn > 0.0 ? *mx / *mn : INFINITY}};
}

} // namespace

QuadOptions ExperimentConfig::quad_options() const {
    QuadOptions q;
    q.panel_phase = panel_phase;
    q.min_panels = min_panels;
    q.node_budget = static_cast<long>(static_cast<double>(node_budget) * budget_scale);
    q.modes.tail_tolerance = tail_tolerance;
    q.modes.M_max = static_cast<int>(20000 * std::max(1.0, budget_scale));
    return q;
}

std::string experiment_name(Experiment e) {
    for (const auto& [k, v] : experiment_names())
        if (v == e) return k;
    return "unknown";
}

ExperimentConfig default_config(Experiment e) {
    ExperimentConfig c;
    c.experiment = e;
    switch (e) {
    case Experiment::wave_dispersion_3d:
        c.h_list = {1.0 / 20, 1.0 / 40, 1.0 / 80};
        break;
    case Experiment::arago_sweep:
        c.dimension = 4;
        c.h_list = {1.0 / 40, 1.0 / 56, 1.0 / 80, 1.0 / 113, 1.0 / 160};
        break;
    default:
        break;
    }
    return c;
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(j,
                   {"experiment", "dimension", "flow", "h_list", "gamma", "geometry", "lambda", "window", "tolerances",
                    "taus", "cfie_pairs", "seed", "output", "budget_scale", "version"},
                   "");
    if (!j.contains("experiment") || !j["experiment"].is_string()) throw ConfigError("config: 'experiment' is required");
    const auto it = experiment_names().find(j["experiment"].get<std::string>());
    if (it == experiment_names().end()) throw ConfigError("config: unknown experiment '" + j["experiment"].get<std::string>() + "'");
    ExperimentConfig c = default_config(it->second);

    if (j.contains("dimension")) c.dimension = get_number<int>(j["dimension"], "dimension", 3, 5);
    if (j.contains("flow")) {
        const std::string f = j["flow"].is_string() ? j["flow"].get<std::string>() : "";
        if (f == "wave") c.flow = AragoFlow::wave;
        else if (f == "schrodinger") c.flow = AragoFlow::schrodinger;
        else throw ConfigError("config: 'flow' must be \"wave\" or \"schrodinger\"");
    }
    if (j.contains("h_list")) {
        if (!j["h_list"].is_array()) throw ConfigError("config: 'h_list' must be an array");
        c.h_list.clear();
        for (const auto& v : j["h_list"]) c.h_list.push_back(get_number<double>(v, "h_list[]", 1e-6, 0.999));
    }
    if (j.contains("gamma")) c.gamma = j["gamma"].is_null() ? 0.0 : get_number<double>(j["gamma"], "gamma", 0.0, 1.5);
    if (j.contains("geometry")) {
        const json& g = j["geometry"];
        if (!g.is_object()) throw ConfigError("config: 'geometry' must be an object");
        reject_unknown(g, {"random_pairs", "seed", "c0", "t_octave_start", "t_octave_points"}, "geometry.");
        if (g.contains("random_pairs")) c.geometry.random_pairs = get_number<int>(g["random_pairs"], "geometry.random_pairs", 0, 1000);
        if (g.contains("seed")) c.geometry.seed = get_number<std::uint64_t>(g["seed"], "geometry.seed", 0, UINT64_MAX);
        if (g.contains("c0")) c.geometry.c0 = get_number<double>(g["c0"], "geometry.c0", 0.1, 100.0);
        if (g.contains("t_octave_start"))
            c.geometry.t_octave_start = get_number<double>(g["t_octave_start"], "geometry.t_octave_start", 1e-3, 100.0);
        if (g.contains("t_octave_points"))
            c.geometry.t_octave_points = get_number<int>(g["t_octave_points"], "geometry.t_octave_points", 2, 100);
    }
    if (j.contains("lambda")) {
        const json& l = j["lambda"];
        if (!l.is_object()) throw ConfigError("config: 'lambda' must be an object");
        reject_unknown(l, {"tau", "tau_check", "z_min", "z_max", "z_step"}, "lambda.");
        if (l.contains("tau")) c.lambda.tau = get_number<double>(l["tau"], "lambda.tau", 10.0, 1e6);
        if (l.contains("tau_check")) c.lambda.tau_check = get_number<double>(l["tau_check"], "lambda.tau_check", 0.0, 1e6);
        if (l.contains("z_min")) c.lambda.z_min = get_number<double>(l["z_min"], "lambda.z_min", 1e-3, 10.0);
        if (l.contains("z_max")) c.lambda.z_max = get_number<double>(l["z_max"], "lambda.z_max", 1e-3, 10.0);
        if (l.contains("z_step")) c.lambda.z_step = get_number<double>(l["z_step"], "lambda.z_step", 1e-4, 1.0);
        if (!(c.lambda.z_max > c.lambda.z_min)) throw ConfigError("config: 'lambda.z_max' must exceed 'lambda.z_min'");
    }
    if (j.contains("window")) {
        const json& w = j["window"];
        if (!w.is_object()) throw ConfigError("config: 'window' must be an object");
        reject_unknown(w, {"profile", "width", "schrodinger_h"}, "window.");
        if (w.contains("profile")) {
            const std::string p = w["profile"].is_string() ? w["profile"].get<std::string>() : "";
            if (p == "smooth_bump") c.profile = WindowProfile::smooth_bump;
            else if (p == "cosine_taper") c.profile = WindowProfile::cosine_taper;
            else throw ConfigError("config: 'window.profile' must be \"smooth_bump\" or \"cosine_taper\"");
        }
        if (w.contains("width")) c.window_width = get_number<double>(w["width"], "window.width", 0.01, 0.9);
        if (w.contains("schrodinger_h")) c.schrodinger_h = get_number<double>(w["schrodinger_h"], "window.schrodinger_h", 1e-6, 0.999);
    }
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        if (!t.is_object()) throw ConfigError("config: 'tolerances' must be an object");
        reject_unknown(t, {"tail", "panel_phase", "min_panels", "node_budget"}, "tolerances.");
        if (t.contains("tail")) c.tail_tolerance = get_number<double>(t["tail"], "tolerances.tail", 1e-16, 1e-2);
        if (t.contains("panel_phase")) c.panel_phase = get_number<double>(t["panel_phase"], "tolerances.panel_phase", 0.05, 4.0);
        if (t.contains("min_panels")) c.min_panels = get_number<int>(t["min_panels"], "tolerances.min_panels", 1, 100000);
        if (t.contains("node_budget")) c.node_budget = get_number<long>(t["node_budget"], "tolerances.node_budget", 100, 2000000000L);
    }
    if (j.contains("taus")) {
        if (!j["taus"].is_array()) throw ConfigError("config: 'taus' must be an array");
        c.taus.clear();
        for (const auto& v : j["taus"]) c.taus.push_back(get_number<double>(v, "taus[]", 1e-3, 4.0));
    }
    if (j.contains("cfie_pairs")) c.cfie_pairs = get_number<int>(j["cfie_pairs"], "cfie_pairs", 1, 1000);
    if (j.contains("seed")) c.seed = get_number<std::uint64_t>(j["seed"], "seed", 0, UINT64_MAX);
    if (j.contains("output")) {
        if (!j["output"].is_string()) throw ConfigError("config: 'output' must be a string");
        c.output = j["output"].get<std::string>();
    }
    if (j.contains("budget_scale")) c.budget_scale = get_number<double>(j["budget_scale"], "budget_scale", 1e-3, 1e3);

    const bool needs_h = c.experiment == Experiment::wave_dispersion_3d || c.experiment == Experiment::arago_sweep;
    if (needs_h && c.h_list.size() < 3) throw ConfigError("config: 'h_list' needs at least three values");
    if ((c.experiment == Experiment::wave_dispersion_3d || c.experiment == Experiment::schrodinger_dispersion_3d ||
         c.experiment == Experiment::cfie_compare) &&
        c.dimension != 3)
        throw ConfigError("config: this experiment is three-dimensional");
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = experiment_name(c.experiment);
    j["dimension"] = c.dimension;
    j["flow"] = c.flow == AragoFlow::wave ? "wave" : "schrodinger";
    j["h_list"] = c.h_list;
    j["gamma"] = c.gamma;
    j["geometry"] = {{"random_pairs", c.geometry.random_pairs},
                     {"seed", c.geometry.seed},
                     {"c0", c.geometry.c0},
                     {"t_octave_start", c.geometry.t_octave_start},
                     {"t_octave_points", c.geometry.t_octave_points}};
    j["lambda"] = {{"tau", c.lambda.tau},
                   {"tau_check", c.lambda.tau_check},
                   {"z_min", c.lambda.z_min},
                   {"z_max", c.lambda.z_max},
                   {"z_step", c.lambda.z_step}};
    j["window"] = {{"profile", c.profile == WindowProfile::smooth_bump ? "smooth_bump" : "cosine_taper"},
                   {"width", c.window_width},
                   {"schrodinger_h", c.schrodinger_h}};
    j["tolerances"] = {{"tail", c.tail_tolerance},
                       {"panel_phase", c.panel_phase},
                       {"min_panels", c.min_panels},
                       {"node_budget", c.node_budget}};
    j["taus"] = c.taus;
    j["cfie_pairs"] = c.cfie_pairs;
    j["seed"] = c.seed;
    j["output"] = c.output;
    j["budget_scale"] = c.budget_scale;
    return j;
}

// ------------------------------------------------------------------ CSV

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const Table& t) {
    auto cell = [](const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + "\"";
    };
    std::string out;
    auto line = [&](const std::vector<std::string>& row) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += cell(row[i]);
        }
        out += "\r\n";
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

Table parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        if (ch == '"') {
            quoted = true;
            any = true;
        } else if (ch == ',') {
            row.push_back(field);
            field.clear();
            any = true;
        } else if (ch == '\r' || ch == '\n') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(field);
                rows.push_back(row);
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += ch;
            any = true;
        }
    }
    if (quoted) throw std::runtime_error("parse_csv: unterminated quoted field");
    if (any || !field.empty()) {
        row.push_back(field);
        rows.push_back(row);
    }
    Table t;
    if (rows.empty()) return t;
    t.header = rows.front();
    t.rows.assign(rows.begin() + 1, rows.end());
    for (const auto& r : t.rows)
        if (r.size() != t.header.size()) throw std::runtime_error("parse_csv: ragged row");
    return t;
}

std::vector<std::string> kernel_header() {
    return {"d", "h", "gamma", "s", "r", "theta", "t", "re", "im", "abs", "modes_used", "nodes_used", "tail_bound", "quad_err"};
}

std::vector<std::string> kernel_cells(const KernelRow& r) {
    return {std::to_string(r.d),           format_number(r.h),          format_number(r.gamma),
            format_number(r.s),            format_number(r.r),          format_number(r.theta),
            format_number(r.t),            format_number(r.value.real()), format_number(r.value.imag()),
            format_number(std::abs(r.value)), std::to_string(r.modes_used), std::to_string(r.nodes_used),
            format_number(r.tail_bound),   format_number(r.quad_err)};
}

SlopeFit fit_csv(const Table& t) {
    const auto col = [&](const std::string& name) {
        const auto it = std::find(t.header.begin(), t.header.end(), name);
        if (it == t.header.end()) throw std::invalid_argument("fit_csv: missing column '" + name + "'");
        return static_cast<size_t>(it - t.header.begin());
    };
    const size_t ih = col("h"), ia = col("abs");
    if (t.rows.size() < 3) throw std::invalid_argument("fit_csv: at least three rows are needed");
    std::vector<double> h, a;
    for (const auto& r : t.rows) {
        h.push_back(std::stod(r[ih]));
        a.push_back(std::stod(r[ia]));
    }
    return fit_power_law(h, a);
}

// --------------------------------------------------------------- checks

Table check_table(const std::vector<CheckRow>& rows) {
    Table t;
    t.header = {"check", "args", "value", "tolerance", "pass"};
    for (const auto& r : rows)
        t.rows.push_back({r.name, r.args, format_number(r.value), format_number(r.tolerance), r.pass ? "true" : "false"});
    return t;
}

std::vector<CheckRow> green_checks() {
    std::vector<CheckRow> out;
    for (int d = 3; d <= 5; ++d) {
        for (double tau : {0.5, 5.0, 30.0}) {
            const double r = 3.0, s = 2.0, c = std::cos(kPi / 4.0);
            const ModeSum m = free_mode_sum(d, tau, r, s, c);
            const cplx g = free_green(d, tau, std::sqrt(r * r + s * s - 2.0 * r * s * c));
            out.push_back(make_check("addition_theorem", args_of({{"d", d}, {"tau", tau}}), relerr(m.value, g), 1e-8));
        }
    }
    for (int d = 3; d <= 5; ++d) {
        for (double tau : {1.0, 5.0, 20.0}) {
            const ExteriorPoint src = ExteriorPoint::from_polar(d, 2.0, 0.3);
            double worst = 0.0, scale = 0.0;
            for (int k = 0; k < 32; ++k) {
                std::vector<double> om(static_cast<size_t>(d - 1), 0.0);
                om[0] = std::cos(1.0 * k);
                om[1 % (d - 1)] += std::sin(1.0 * k);
                const ExteriorPoint q = ExteriorPoint::from_polar(d, 1.0, -1.5 + 3.0 * k / 31.0, om);
                const GreenValue g = exact_green(d, tau, src, q);
                worst = std::max(worst, std::abs(g.value));
                scale = std::max(scale, std::abs(g.free_part));
            }
            out.push_back(make_check("dirichlet_trace", args_of({{"d", d}, {"tau", tau}}), worst / scale, 1e-7));
        }
    }
    for (int d = 3; d <= 5; ++d) {
        std::vector<double> oa(static_cast<size_t>(d - 1), 0.0), ob(static_cast<size_t>(d - 1), 1.0);
        oa[0] = 1.0;
        const ExteriorPoint a = ExteriorPoint::from_polar(d, 1.7, 0.2, oa);
        const ExteriorPoint b = ExteriorPoint::from_polar(d, 2.9, -0.9, ob);
        for (double tau : {0.7, 7.0}) {
            const cplx g1 = exact_green(d, tau, a, b).value, g2 = exact_green(d, tau, b, a).value;
            out.push_back(make_check("reciprocity", args_of({{"d", d}, {"tau", tau}}), relerr(g1, g2), 1e-10));
        }
    }
    for (int d = 3; d <= 4; ++d) {
        const double tau = 5.0;
        const ExteriorPoint src = ExteriorPoint::from_polar(d, 2.0, 0.3);
        std::vector<double> p(static_cast<size_t>(d), 0.4);
        p[d - 1] = -0.7;
        p[0] = 1.5;
        const FieldSampler f = [&](const std::vector<double>& x) {
            return exact_green(d, tau, src, ExteriorPoint::from_cartesian(d, x)).value;
        };
        std::vector<double> res;
        for (double step : {2e-3, 1e-3, 5e-4}) {
            res.push_back(helmholtz_residual(d, tau, f, p, step));
            out.push_back(make_check("helmholtz_residual", args_of({{"d", d}, {"tau", tau}, {"step", step}}), res.back(), 1e-4));
        }
        for (size_t i = 1; i < res.size(); ++i) {
            const double order = std::log2(res[i - 1] / res[i]);
            out.push_back(make_check("helmholtz_order_deviation", args_of({{"d", d}, {"halving", static_cast<double>(i)}}),
                                     std::abs(order - 2.0), 0.25));
        }
    }
    return out;
}

std::vector<CheckRow> specfun_checks() {
    std::vector<CheckRow> out;
    const cplx w0(0.0, 1.0 / (2.0 * kPi));
    const cplx ep = std::polar(1.0, kPi / 3.0);
    double wr = 0.0, cr = 0.0;
    for (double z = -30.0; z <= 20.0 + 1e-9; z += 0.125) {
        const AiryValue a = airy_eval(z);
        const cplx w = a.da_plus * a.a_minus - a.a_plus * a.da_minus;
        wr = std::max(wr, std::abs(w - w0) / (std::abs(a.da_plus * a.a_minus) + std::abs(a.a_plus * a.da_minus)));
        const cplx conn = ep * a.a_plus + std::conj(ep) * a.a_minus;
        cr = std::max(cr, std::abs(a.a - conn) / (std::abs(a.a_plus) + std::abs(a.a_minus)));
    }
    out.push_back(make_check("airy_wronskian", "z in [-30, 20]", wr, 1e-10));
    out.push_back(make_check("airy_connection", "z in [-30, 20]", cr, 1e-10));

    double bw = 0.0;
    for (double nu : {0.5, 1.0, 1.5, 10.0, 10.5, 50.5, 100.0, 200.5})
        for (double x : {0.1, 1.0, 10.0, 100.0, 1000.0, 10000.0}) {
            const BesselJYScaled a = bessel_jy_scaled(nu, x), b = bessel_jy_scaled(nu + 1.0, x);
            // J_{nu+1} Y_nu - J_nu Y_{nu+1} = 2/(pi x)
            const double w = b.j * a.y * std::exp(b.lj + a.ly) - a.j * b.y * std::exp(a.lj + b.ly);
            bw = std::max(bw, std::abs(w * kPi * x / 2.0 - 1.0));
        }
    out.push_back(make_check("bessel_wronskian", "nu <= 200.5, x <= 1e4", bw, 1e-9));

    for (double nu : {50.0, 100.0, 200.0}) {
        double eh = 0.0, ej = 0.0;
        for (double rho = 0.5; rho <= 2.0 + 1e-12; rho += 0.01) {
            const HankelValue u = hankel_uniform(nu, rho);
            const HankelValue d = bessel(nu, nu * rho);
            eh = std::max(eh, relerr(u.h1, d.h1));
            if (rho < 1.0) ej = std::max(ej, std::abs(u.j - d.j) / std::abs(d.j));
        }
        out.push_back(make_check("uniform_hankel_h1", args_of({{"nu", nu}}), eh, 1e-3));
        out.push_back(make_check("uniform_hankel_j_below_turning", args_of({{"nu", nu}}), ej, 1e-3));
    }

    double zr = 0.0;
    for (double rho = 0.2; rho <= 5.0 + 1e-12; rho += 0.01) {
        const double z = zeta_tilde(rho), dz = zeta_tilde_d1(rho);
        zr = std::max(zr, std::abs(-z * dz * dz + 1.0 / (rho * rho) - 1.0));
    }
    out.push_back(make_check("zeta_ode_residual", "rho in [0.2, 5]", zr, 1e-9));
    out.push_back(make_check("zeta_at_one", "rho = 1", std::abs(zeta_tilde(1.0)), 1e-15));
    const double fd = (zeta_tilde(1.0 + 1e-5) - zeta_tilde(1.0 - 1e-5)) / 2e-5;
    out.push_back(make_check("zeta_limit_slope", "rho -> 1", std::abs(-fd - std::cbrt(2.0)), 1e-6));
    return out;
}

// ------------------------------------------------------------- geometry

std::vector<std::pair<ExteriorPoint, ExteriorPoint>> dispersion_pairs(const GeometrySpec& g) {
    std::vector<std::pair<ExteriorPoint, ExteriorPoint>> p;
    auto pol = [](double r, double y, double ph) { return ExteriorPoint::from_polar(3, r, y, {std::cos(ph), std::sin(ph)}); };
    p.emplace_back(ExteriorPoint::north(3, 2.0), ExteriorPoint::south(3, 2.0));
    p.emplace_back(ExteriorPoint::north(3, 1.01), ExteriorPoint::south(3, 1.01));
    p.emplace_back(pol(1.01, 0.0, 0.0), pol(1.01, 0.0, 0.5 * kPi));
    p.emplace_back(pol(1.01, 0.3, 0.0), pol(1.05, -0.4, 0.8));
    p.emplace_back(ExteriorPoint::north(3, 1.01), ExteriorPoint::south(3, 3.0));
    p.emplace_back(pol(1.5, 0.5, 0.0), pol(1.5, 0.5, 1.0));
    std::mt19937_64 rng(g.seed);
    for (int i = 0; i < g.random_pairs; ++i) {
        const ExteriorPoint a = random_exterior(rng, 3, 1.02, 3.0);
        const ExteriorPoint b = random_exterior(rng, 3, 1.02, 3.0);
        p.emplace_back(a, b);
    }
    return p;
}

std::vector<DispersionTriple> dispersion_grid(const GeometrySpec& g) {
    std::vector<DispersionTriple> out;
    int idx = 0;
    for (const auto& [a, b] : dispersion_pairs(g)) {
        const double geo = exterior_geodesic(a.r, b.r, cos_angle(a, b));
        const auto [lo, hi] = time_window_hint(a, b, g.c0);
        for (double dt : {-0.25, 0.0, 0.5}) {
            const double t = std::clamp(geo + dt, std::max(lo, 0.05), hi);
            out.push_back({a, b, t, "pair" + std::to_string(idx)});
        }
        ++idx;
    }
    return out;
}

// ----------------------------------------------------------- experiments

namespace {

RunResult run_wave_dispersion(const ExperimentConfig& c, int threads) {
    const auto pairs = dispersion_pairs(c.geometry);
    const auto grid = dispersion_grid(c.geometry);
    const QuadOptions q = c.quad_options();
    struct Job {
        double h;
        size_t pair;
    };
    std::vector<Job> jobs;
    for (double h : c.h_list)
        for (size_t p = 0; p < pairs.size(); ++p) jobs.push_back({h, p});
    const auto results = parallel_map<std::vector<KernelRow>>(jobs.size(), threads, [&](size_t i) {
        const Job& jb = jobs[i];
        const auto& [a, b] = pairs[jb.pair];
        std::vector<double> times;
        for (size_t k = 0; k < 3; ++k) times.push_back(grid[3 * jb.pair + k].t);
        const FrequencyWindow w = FrequencyWindow::centered(jb.h, c.window_width, c.profile);
        const auto ks = wave_kernel({3, a, b}, w, FieldPart::total, times, q);
        std::vector<KernelRow> rows;
        for (const auto& k : ks) rows.push_back(kernel_row(3, jb.h, 0.0, a, b, k));
        return rows;
    });
    std::vector<KernelRow> rows;
    std::vector<double> maxima;
    for (size_t hi = 0; hi < c.h_list.size(); ++hi) {
        double m = 0.0;
        for (size_t p = 0; p < pairs.size(); ++p)
            for (const auto& r : results[hi * pairs.size() + p]) {
                m = std::max(m, r.h * r.h * r.t * std::abs(r.value));
                rows.push_back(r);
            }
        maxima.push_back(m);
    }
    RunResult out;
    out.table = kernel_table(rows);
    out.summary = ratio_summary(c.h_list, maxima, "h");
    out.summary["grid_size"] = grid.size();
    out.summary["scaling"] = "h^2 t |K|";
    return out;
}

RunResult run_schrodinger_dispersion(const ExperimentConfig& c, int threads) {
    const auto pairs = dispersion_pairs(c.geometry);
    const QuadOptions q = c.quad_options();
    std::vector<double> times;
    for (int k = 0; k < c.geometry.t_octave_points; ++k)
        times.push_back(c.geometry.t_octave_start * std::pow(2.0, static_cast<double>(k) / (c.geometry.t_octave_points - 1)));
    const FrequencyWindow w = FrequencyWindow::centered(c.schrodinger_h, c.window_width, c.profile);
    const auto results = parallel_map<std::vector<KernelRow>>(pairs.size(), threads, [&](size_t p) {
        const auto& [a, b] = pairs[p];
        const auto ks = schrodinger_kernel({3, a, b}, w, FieldPart::total, times, q);
        std::vector<KernelRow> rows;
        for (const auto& k : ks) rows.push_back(kernel_row(3, c.schrodinger_h, 0.0, a, b, k));
        return rows;
    });
    std::vector<KernelRow> rows;
    std::vector<double> maxima(times.size(), 0.0);
    for (const auto& rs : results)
        for (size_t k = 0; k < rs.size(); ++k) {
            maxima[k] = std::max(maxima[k], std::pow(rs[k].t, 1.5) * std::abs(rs[k].value));
            rows.push_back(rs[k]);
        }
    RunResult out;
    out.table = kernel_table(rows);
    out.summary = ratio_summary(times, maxima, "t");
    out.summary["scaling"] = "t^{3/2} |K|";
    return out;
}

std::vector<double> lambda_grid(const LambdaSpec& l) {
    std::vector<double> z;
    const int n = static_cast<int>(std::floor((l.z_max - l.z_min) / l.z_step + 1e-9));
    for (int i = 0; i <= n; ++i) z.push_back(l.z_min + l.z_step * i);
    return z;
}

json scan_json(const LambdaScan& s, double tau) { return {{"tau", tau}, {"z1", s.z1}, {"z2", s.z2}, {"c", s.c}}; }

RunResult run_lambda_scan(const ExperimentConfig& c, int threads) {
    const auto grid = lambda_grid(c.lambda);
    std::vector<double> taus{c.lambda.tau};
    if (c.lambda.tau_check > 0.0) taus.push_back(c.lambda.tau_check);
    RunResult out;
    out.table.header = {"tau", "z", "re", "im", "abs", "error", "nodes"};
    std::vector<LambdaScan> scans;
    for (double tau : taus) {
        const auto vals = parallel_map<LambdaValue>(grid.size(), threads, [&](size_t i) { return lambda_integral(grid[i], tau); });
        LambdaScan s = lambda_scan_from_values(grid, vals);
        for (size_t i = 0; i < grid.size(); ++i)
            out.table.rows.push_back({format_number(tau), format_number(grid[i]), format_number(vals[i].value.real()),
                                      format_number(vals[i].value.imag()), format_number(std::abs(vals[i].value)),
                                      format_number(vals[i].error), std::to_string(vals[i].nodes)});
        scans.push_back(s);
    }
    out.summary = scan_json(scans[0], taus[0]);
    if (scans.size() > 1) {
        out.summary["check"] = scan_json(scans[1], taus[1]);
        out.summary["overlap"] = interval_overlap(scans[0].z1, scans[0].z2, scans[1].z1, scans[1].z2);
    }
    return out;
}

RunResult run_arago(const ExperimentConfig& c, int threads) {
    LambdaScan scan = lambda_scan(c.lambda.tau, lambda_grid(c.lambda));
    AragoConfig ac = AragoConfig::from_scan(c.dimension, scan, c.flow);
    if (c.gamma > 0.0) ac.gamma = c.gamma;
    ac.h_list = c.h_list;
    ac.profile = c.profile;
    ac.quad = c.quad_options();
    ac.validate();
    const auto recs = parallel_map<AragoRecord>(c.h_list.size(), threads, [&](size_t i) {
        return measure_arago_point(ac, c.h_list[i]);
    });
    std::vector<double> hs, amps, pred;
    std::vector<KernelRow> rows;
    for (const auto& r : recs) {
        const double heff = c.flow == AragoFlow::wave ? r.point.h : r.point.h * r.point.h;
        hs.push_back(heff);
        amps.push_back(std::abs(r.amplitude));
        pred.push_back(std::abs(arago_predict(ac, r.point.h)));
        KernelRow k;
        k.d = c.dimension;
        k.h = heff;
        k.gamma = ac.gamma;
        k.s = r.point.s;
        k.r = r.point.s;
        k.theta = kPi;
        k.t = r.point.t;
        k.value = r.amplitude;
        k.modes_used = r.modes_used;
        k.nodes_used = r.nodes;
        k.tail_bound = r.tail_bound;
        k.quad_err = r.quad_err;
        rows.push_back(k);
    }
    const SlopeFit fit = fit_power_law(hs, amps);
    const SlopeFit pfit = fit_power_law(hs, pred);
    const double kappa = amps.front() / pred.front();
    double kdev = 0.0;
    for (size_t i = 0; i < hs.size(); ++i) kdev = std::max(kdev, std::abs(kappa * pred[i] / amps[i] - 1.0));
    RunResult out;
    out.table = kernel_table(rows);
    out.summary = {{"d", c.dimension},
                   {"flow", c.flow == AragoFlow::wave ? "wave" : "schrodinger"},
                   {"gamma", ac.gamma},
                   {"eps", ac.eps},
                   {"slope", fit.slope},
                   {"slope_target", arago_target_slope(c.dimension, c.flow)},
                   {"max_residual", fit.max_residual},
                   {"predicted_slope", pfit.slope},
                   {"kappa", kappa},
                   {"kappa_max_deviation", kdev},
                   {"z1", scan.z1},
                   {"z2", scan.z2},
                   {"c", scan.c}};
    return out;
}

RunResult run_cfie(const ExperimentConfig& c, int threads) {
    std::mt19937_64 rng(c.seed);
    std::vector<std::pair<ExteriorPoint, ExteriorPoint>> pairs;
    for (int i = 0; i < c.cfie_pairs; ++i) {
        const ExteriorPoint a = random_exterior(rng, 3, 1.5, 4.0);
        const ExteriorPoint b = random_exterior(rng, 3, 1.5, 4.0);
        pairs.emplace_back(a, b);
    }
    struct Row {
        cplx layer, mode;
    };
    const size_t n = pairs.size() * c.taus.size();
    const auto res = parallel_map<Row>(n, threads, [&](size_t i) {
        const double tau = c.taus[i / pairs.size()];
        const auto& [a, b] = pairs[i % pairs.size()];
        return Row{layer_green(tau, a, b).value, exact_green(3, tau, a, b).value};
    });
    RunResult out;
    out.table.header = {"tau", "s", "r", "theta", "re_layer", "im_layer", "re_mode", "im_mode", "rel_err"};
    double worst = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double tau = c.taus[i / pairs.size()];
        const auto& [a, b] = pairs[i % pairs.size()];
        const double e = relerr(res[i].layer, res[i].mode);
        worst = std::max(worst, e);
        out.table.rows.push_back({format_number(tau), format_number(a.r), format_number(b.r), format_number(angle_between(a, b)),
                                  format_number(res[i].layer.real()), format_number(res[i].layer.imag()),
                                  format_number(res[i].mode.real()), format_number(res[i].mode.imag()), format_number(e)});
    }
    out.summary = {{"max_rel_err", worst}, {"pairs", pairs.size()}, {"taus", c.taus}};
    return out;
}

RunResult run_checks(const std::vector<CheckRow>& rows) {
    RunResult out;
    out.table = check_table(rows);
    bool all = true;
    json fails = json::array();
    for (const auto& r : rows) {
        all = all && r.pass;
        if (!r.pass) fails.push_back(r.name + " " + r.args);
    }
    out.summary = {{"checks", rows.size()}, {"all_pass", all}, {"failures", fails}};
    return out;
}

} // namespace

RunResult run_experiment(const ExperimentConfig& cfg, int threads) {
    RunResult r;
    switch (cfg.experiment) {
    case Experiment::green_check: r = run_checks(green_checks()); break;
    case Experiment::specfun_table: r = run_checks(specfun_checks()); break;
    case Experiment::wave_dispersion_3d: r = run_wave_dispersion(cfg, threads); break;
    case Experiment::schrodinger_dispersion_3d: r = run_schrodinger_dispersion(cfg, threads); break;
    case Experiment::arago_sweep: r = run_arago(cfg, threads); break;
    case Experiment::lambda_scan: r = run_lambda_scan(cfg, threads); break;
    case Experiment::cfie_compare: r = run_cfie(cfg, threads); break;
    }
    r.summary["experiment"] = experiment_name(cfg.experiment);
    r.summary["config"] = config_to_json(cfg);
    r.summary["version"] = kVersion;
    return r;
}

} // namespace arago
