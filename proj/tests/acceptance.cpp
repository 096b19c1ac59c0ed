// Acceptance run: one PASS/FAIL line per criterion.
#include "arago/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

using namespace arago;
using nlohmann::json;

namespace {

int worker_threads() {
    if (const char* env = std::getenv("ARAGO_LAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os.precision(1);
    os << std::fixed << secs << " s of " << budget_s << " s";
    const bool ok = o.pass && secs <= budget_s;
    if (o.pass && !ok) o.detail += "; over time budget";
    if (!ok) ++failures;
    std::printf("%s criterion %d: %s | %s | %s\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), os.str().c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

json arago_summary(int d, AragoFlow flow, int threads) {
    ExperimentConfig c = default_config(Experiment::arago_sweep);
    c.dimension = d;
    c.flow = flow;
    return run_experiment(c, threads).summary;
}

// Same sweep restricted to the reflected part of the Green function.
double reflected_slope(int d) {
    AragoConfig c = AragoConfig::from_scan(d, lambda_scan(1000.0, default_lambda_grid()));
    std::vector<double> amps;
    for (double h : c.h_list) {
        const AragoPoint p = c.point(h);
        const Geometry g{d, ExteriorPoint::north(d, p.s), ExteriorPoint::south(d, p.s)};
        amps.push_back(std::abs(wave_kernel(g, p.window, FieldPart::reflected, {p.t}, c.quad).front().value));
    }
    return fit_power_law(c.h_list, amps).slope;
}

} // namespace

int main() {
    const int threads = worker_threads();
    std::printf("%s, %d worker thread(s)\n", kVersion, threads);

    criterion(1, "Arago-spot loss, wave, d = 4 slope -7/3 +- 0.15 with d = 3 control -5/3 +- 0.15", 600.0, [&] {
        const json s4 = arago_summary(4, AragoFlow::wave, threads);
        const json s3 = arago_summary(3, AragoFlow::wave, threads);
        const double k4 = s4["slope"], k3 = s3["slope"];
        const bool ok = std::abs(k4 + 7.0 / 3.0) <= 0.15 && std::abs(k3 + 5.0 / 3.0) <= 0.15;
        std::string d = fmt("d=4 slope %.4f", k4) + fmt(", d=3 slope %.4f", k3) + fmt(", gamma %.4f", s4["gamma"]);
        d += fmt(", predicted d=4 %.4f", s4["predicted_slope"]);
        d += fmt("; reflected part alone (information): d=4 %.4f", reflected_slope(4));
        d += fmt(", d=3 %.4f", reflected_slope(3));
        return Outcome{ok, d};
    });

    criterion(2, "Arago-spot loss, Schrodinger, d = 4 slope -5/6 +- 0.15", 600.0, [&] {
        const json s = arago_summary(4, AragoFlow::schrodinger, threads);
        const double k = s["slope"];
        return Outcome{std::abs(k + 5.0 / 6.0) <= 0.15,
                       fmt("slope %.4f", k) + fmt(", predicted %.4f", s["predicted_slope"])};
    });

    criterion(3, "3D dispersion boundedness, wave and Schrodinger factors <= 4", 600.0, [&] {
        const json w = run_experiment(default_config(Experiment::wave_dispersion_3d), threads).summary;
        const json s = run_experiment(default_config(Experiment::schrodinger_dispersion_3d), threads).summary;
        const double fw = w["variation_factor"], fs = s["variation_factor"];
        return Outcome{fw <= 4.0 && fs <= 4.0 && w["grid_size"] == 30,
                       fmt("wave factor %.3f over 30 triples", fw) + fmt(", Schrodinger factor %.3f over one octave", fs)};
    });

    criterion(4, "Green-function exactness suite", 120.0, [&] {
        const auto rows = green_checks();
        double worst = 0.0;
        std::string fails;
        for (const auto& r : rows) {
            worst = std::max(worst, r.value / r.tolerance);
            if (!r.pass) fails += " " + r.name + "(" + r.args + ")";
        }
        return Outcome{fails.empty(), std::to_string(rows.size()) + " checks" + fmt(", worst value/tolerance %.2e", worst) +
                                          (fails.empty() ? "" : ", failed:" + fails)};
    });

    criterion(5, "layer potential vs mode sum, tau in {0.5, 1, 2}, ten pairs, relative error <= 1e-6", 120.0, [&] {
        const json s = run_experiment(default_config(Experiment::cfie_compare), threads).summary;
        const double e = s["max_rel_err"];
        return Outcome{e <= 1e-6 && s["pairs"] == 10, fmt("max relative error %.2e", e)};
    });

    criterion(6, "special-function identity suite", 60.0, [&] {
        const auto rows = specfun_checks();
        double worst = 0.0;
        std::string fails;
        for (const auto& r : rows) {
            worst = std::max(worst, r.value / r.tolerance);
            if (!r.pass) fails += " " + r.name + "(" + r.args + ")";
        }
        return Outcome{fails.empty(), std::to_string(rows.size()) + " checks" + fmt(", worst value/tolerance %.2e", worst) +
                                          (fails.empty() ? "" : ", failed:" + fails)};
    });

    criterion(7, "Lambda plateau at tau = 1e3 inside (0, 1), c > 0, overlap >= 80% with tau = 4e3", 120.0, [&] {
        const json s = run_experiment(default_config(Experiment::lambda_scan), threads).summary;
        const double z1 = s["z1"], z2 = s["z2"], c = s["c"], ov = s["overlap"];
        const bool ok = z1 > 0.0 && z2 < 1.0 && z2 > z1 && c > 0.0 && ov >= 0.8;
        return Outcome{ok, fmt("[%.2f", z1) + fmt(", %.2f]", z2) + fmt(", c %.4f", c) +
                               fmt(", check [%.2f", s["check"]["z1"]) + fmt(", %.2f]", s["check"]["z2"]) +
                               fmt(", overlap %.3f", ov)};
    });

    criterion(8, "Kanai subordination vs direct Schrodinger quadrature at 1/h = 20, relative 1e-3", 180.0, [&] {
        const FrequencyWindow w = FrequencyWindow::centered(0.05);
        const Geometry geos[] = {
            {3, ExteriorPoint::north(3, 2.0), ExteriorPoint::south(3, 2.0)},
            {3, ExteriorPoint::from_polar(3, 1.5, 0.4), ExteriorPoint::from_polar(3, 2.5, -0.2, {0.0, 1.0})},
            {3, ExteriorPoint::north(3, 1.1), ExteriorPoint::from_polar(3, 3.0, 0.0)},
        };
        double worst = 0.0;
        for (const auto& g : geos)
            for (double t : {0.1, 0.3}) {
                const cplx direct = schrodinger_kernel(g, w, FieldPart::total, {t}).front().value;
                const cplx kanai = schrodinger_kanai(g, w, FieldPart::total, t).value;
                worst = std::max(worst, std::abs(kanai - direct) / std::abs(direct));
            }
        return Outcome{worst <= 1e-3, fmt("worst relative difference %.2e over 3 geometries x 2 times", worst)};
    });

    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
