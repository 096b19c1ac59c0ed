#pragma once

#include "arago/timeflow.hpp"

#include <vector>

namespace arago {

struct LambdaValue {
    cplx value;
    double error = 0.0;
    double b_minus = 0.0; // integration runs over [-b_minus, b_plus]
    double b_plus = 0.0;
    long nodes = 0;
};

// Lambda(z, tau) = int e^{i z beta} A(x)/A_plus(x) d beta, x = tau^{2/3} zeta_0(1 - tau^{-2/3} beta).
// The non-decaying part e^{i pi/3} on beta > 0 is integrated in closed form as an Abel limit.
LambdaValue lambda_integral(double z, double tau, double b_cap = 200.0);

struct LambdaScan {
    double z1 = 0.0, z2 = 0.0, c = 0.0;
    std::vector<double> z;
    std::vector<double> modulus;
};

// Widest run of grid points with |Lambda| >= max|Lambda|/3.
LambdaScan lambda_scan(double tau, const std::vector<double>& z_grid);
LambdaScan lambda_scan_from_values(const std::vector<double>& z_grid, const std::vector<LambdaValue>& values);
std::vector<double> default_lambda_grid();
// |A intersect B| / |A union B| for two closed intervals.
double interval_overlap(double a1, double a2, double b1, double b2);

enum class AragoFlow { wave, schrodinger };

struct AragoPoint {
    double h = 0.0;      // list entry; the Schrodinger window scale is h^2
    double y0 = 0.0;
    double s = 0.0;
    double t = 0.0;
    FrequencyWindow window;
};

struct AragoConfig {
    int d = 4;
    double gamma = 0.1;
    double eps = 0.1;
    double z1 = 0.0, z2 = 0.0;
    std::vector<double> h_list{1.0 / 40, 1.0 / 56, 1.0 / 80, 1.0 / 113, 1.0 / 160};
    AragoFlow flow = AragoFlow::wave;
    WindowProfile profile = WindowProfile::smooth_bump;
    QuadOptions quad{};

    // gamma = (z1 + z2)/4 and eps = (z2 - z1)/(4 (z1 + z2)).
    static AragoConfig from_scan(int d, const LambdaScan& scan, AragoFlow flow = AragoFlow::wave);

    AragoPoint point(double h) const;
    // Throws std::domain_error when the admissibility conditions fail.
    void validate() const;
};

struct SlopeFit {
    std::vector<double> log_h, log_amp;
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};

SlopeFit fit_power_law(const std::vector<double>& h, const std::vector<double>& amp);

struct AragoRecord {
    AragoPoint point;
    cplx amplitude;
    double quad_err = 0.0;
    long nodes = 0;
    int modes_used = 0;
    double tail_bound = 0.0;
};

struct AragoMeasurement {
    std::vector<AragoRecord> records;
    SlopeFit fit;
};

// Exact windowed kernel at (Q_N(s), Q_S(s), t) for each h, then a log-log fit.
AragoMeasurement measure_arago(const AragoConfig& cfg);
AragoRecord measure_arago_point(const AragoConfig& cfg, double h);

double arago_target_slope(int d, AragoFlow flow);

// Leading-order amplitude with unit normalisation constant.
cplx arago_predict(const AragoConfig& cfg, double h, int nodes = 96);

} // namespace arago
