#pragma once

#include "arago/phase.hpp"
#include "arago/specfun.hpp"

#include <functional>
#include <vector>

namespace arago {

// Per-mode radial Green coefficient. free_part + reflected_part = total.
struct RadialModeKernel {
    int d = 3;
    int m = 0;
    double nu = 0.0;
    double tau = 0.0;
    double r = 1.0, s = 1.0;
    cplx free_part, reflected_part, total;
    // Set when the mode underflows; bound then caps |total|.
    bool negligible = false;
    double bound = 0.0;
};

enum class ModeSumMethod { fixed_M, adaptive };

struct ModeSumConfig {
    int M = 0; // 0 selects the default truncation
    double tail_tolerance = 1e-13;
    ModeSumMethod method = ModeSumMethod::adaptive;
    int M_max = 20000;
    bool include_reflection = true;
};

struct ModeSum {
    cplx value;
    int modes_used = 0;
    double tail_bound = 0.0;
};

struct GreenValue {
    cplx value;
    cplx free_part;
    cplx reflected_part;
    int modes_used = 0;
    double tail_bound = 0.0;
};

// Shared constant of every radial kernel, G = c (rs)^{-(d-2)/2} [...].
cplx green_mode_constant();

RadialModeKernel radial_mode(int d, int m, double tau, double r, double s);

// Outgoing fundamental solution as a function of distance.
cplx free_green(int d, double tau, double dist);

int default_truncation(double tau, double r, double s, double tol);

// Reflected series sum_m Z_m(cos theta) * reflected_part_m.
ModeSum reflected_sum(int d, double tau, double r, double s, double cos_theta, const ModeSumConfig& cfg = {});

// Incoming series, used as the addition-theorem oracle (r != s).
ModeSum free_mode_sum(int d, double tau, double r, double s, double cos_theta, const ModeSumConfig& cfg = {});

GreenValue exact_green(int d, double tau, const ExteriorPoint& source, const ExteriorPoint& target,
                       const ModeSumConfig& cfg = {});

struct ModeRecord {
    int m;
    double nu;
    double abs_free;
    double abs_reflected;
    double tail_bound;
};
std::vector<ModeRecord> mode_table(int d, double tau, double r, double s, double cos_theta, int M);

using FieldSampler = std::function<cplx(const std::vector<double>&)>;

// |(Delta_h + tau^2) u| / (tau^2 |u|) with the 2d+1 point stencil.
double helmholtz_residual(int d, double tau, const FieldSampler& field, const std::vector<double>& point, double step);

} // namespace arago
