#pragma once

#include "arago/green.hpp"

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

namespace arago {

// Raised when a quadrature rule would exceed QuadOptions::node_budget.
struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class WindowProfile { smooth_bump, cosine_taper };

// chi(u) rises on [u0, u1], equals 1 on [u1, u2], falls on [u2, u3].
// The argument is u = h tau for waves and u = h tau^2 for Schrodinger.
struct FrequencyWindow {
    double h = 0.05;
    WindowProfile profile = WindowProfile::smooth_bump;
    std::array<double, 4> u{0.75, 0.875, 1.125, 1.25};

    static FrequencyWindow centered(double h, double w = 0.25, WindowProfile p = WindowProfile::smooth_bump);
    static FrequencyWindow plateau(double h, std::array<double, 4> breakpoints,
                                   WindowProfile p = WindowProfile::smooth_bump);

    double profile_value(double u) const;
    double chi_wave(double tau) const { return profile_value(h * tau); }
    double chi_schrodinger(double tau) const { return profile_value(h * tau * tau); }

    std::pair<double, double> wave_support() const { return {u[0] / h, u[3] / h}; }
    std::pair<double, double> schrodinger_support() const;
    double half_width() const { return 0.5 * (u[3] - u[0]); }
};

// exp(-1/x) based smooth step with S(x) + S(1-x) = 1.
double smoothstep(double x);

struct OscQuadRule {
    std::vector<double> edges;
    std::vector<double> nodes;
    std::vector<double> wk; // Kronrod weights
    std::vector<double> wg; // embedded Gauss weights, zero off the Gauss nodes
    double phase_resolution = 0.0;

    static OscQuadRule make(double a, double b, double rate, double panel_phase, int min_panels);
};

enum class FieldPart { reflected, free, total };
enum class Flow { wave, schrodinger };

struct Geometry {
    int d = 3;
    ExteriorPoint source;
    ExteriorPoint target;
};

struct QuadOptions {
    double panel_phase = 0.5 * kPi;
    int min_panels = 48;
    long node_budget = 1000000;
    ModeSumConfig modes{};
};

struct KernelValue {
    double t = 0.0;
    cplx value;
    double quad_err = 0.0;
    long nodes = 0;
    int modes_used = 0;
    double tail_bound = 0.0;
};

// Windowed spectral density chi * 2 tau Im G on a quadrature rule.
struct SpectralSamples {
    OscQuadRule rule;
    std::vector<double> density; // chi(.) * 2 tau Im G(tau), per node
    int modes_used = 0;
    double tail_bound = 0.0;
};

// Highest phase rate of the density itself, from the longest path.
double density_rate(const Geometry& g);

SpectralSamples sample_density(const Geometry& g, const FrequencyWindow& w, Flow flow, FieldPart part, double max_rate,
                               const QuadOptions& opts = {});

// (1/pi) int e^{i t tau} chi(h tau) 2 tau Im G(tau) d tau for each t.
std::vector<KernelValue> wave_kernel(const Geometry& g, const FrequencyWindow& w, FieldPart part,
                                     const std::vector<double>& times, const QuadOptions& opts = {});
// (1/pi) int e^{i t tau^2} chi(h tau^2) 2 tau Im G(tau) d tau for each t.
std::vector<KernelValue> schrodinger_kernel(const Geometry& g, const FrequencyWindow& w, FieldPart part,
                                            const std::vector<double>& times, const QuadOptions& opts = {});

KernelValue wave_reflected(int d, const FrequencyWindow& w, const ExteriorPoint& source, const ExteriorPoint& target,
                           double t, const QuadOptions& opts = {});
KernelValue wave_free(int d, const FrequencyWindow& w, const ExteriorPoint& source, const ExteriorPoint& target, double t,
                      const QuadOptions& opts = {});
KernelValue schrodinger_windowed(int d, const FrequencyWindow& w, const ExteriorPoint& source,
                                 const ExteriorPoint& target, double t, FieldPart part = FieldPart::total,
                                 const QuadOptions& opts = {});

// Schrodinger kernel rebuilt from the windowed wave kernel sin(T sqrt(-Delta))/sqrt(-Delta).
struct KanaiValue {
    cplx value;
    double t_max = 0.0;
    long t_nodes = 0;
    double quad_err = 0.0;
};
KanaiValue schrodinger_kanai(const Geometry& g, const FrequencyWindow& w, FieldPart part, double t,
                             const QuadOptions& opts = {});

std::pair<double, double> time_window_hint(const ExteriorPoint& source, const ExteriorPoint& target, double c0 = 5.0);

} // namespace arago
