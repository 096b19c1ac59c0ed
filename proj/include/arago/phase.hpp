#pragma once

#include <array>
#include <utility>
#include <vector>

namespace arago {

// Point of R^d \ B(0,1). The last Cartesian axis is the polar axis, so
// y = pi/2 - phi is the latitude and Q_N(s) = s e_d.
struct ExteriorPoint {
    int d = 3;
    std::array<double, 5> cart{};
    double r = 1.0;
    double y = 0.0;

    double x() const { return r - 1.0; }

    static ExteriorPoint from_cartesian(int d, const std::vector<double>& c);
    // omega: unit vector in the first d-1 coordinates; defaults to e_1.
    static ExteriorPoint from_polar(int d, double r, double y, const std::vector<double>& omega = {});
    static ExteriorPoint north(int d, double s);
    static ExteriorPoint south(int d, double s);

    std::vector<double> cartesian() const;
};

double distance(const ExteriorPoint& a, const ExteriorPoint& b);
double cos_angle(const ExteriorPoint& a, const ExteriorPoint& b);

struct SourceGeometry {
    double s = 0.0;
    double y0 = 0.0;
    double psi0 = 0.0;
    double arago_time = 0.0;
    double contour_latitude = 0.0;
};

double dist_phase_phi(double x, double y, double s);
double psi_boundary(double y, double s);
SourceGeometry apparent_contour(double s);

// Langer variable and its first two derivatives.
double zeta_tilde(double rho);
double zeta_tilde_d1(double rho);
double zeta_tilde_d2(double rho);
// (4 zeta/(1 - rho^2))^{1/4}, continuous through rho = 1.
double langer_prefactor(double rho);

// (theta, zeta) = (y alpha, alpha^{2/3} zeta_tilde((1+x)/alpha)).
std::pair<double, double> eikonal_pair(double x, double y, double alpha);
// Residuals of the two eikonal equations from central differences.
std::array<double, 2> eikonal_residual(double x, double y, double alpha, double step = 1e-5);

// gamma(rho) from the transport equation, integrated from rho = 1.
double transport_symbol_gamma(double rho, int d, double tol = 1e-10);
double transport_symbol_gamma_exact(double rho, int d);
double transport_a0(double x, double y, double alpha, int d);

struct TravelTimes {
    double t1;
    double t2;
};
TravelTimes travel_times(double r, double s, double rho);

// Half-sum of the two critical values of -y alpha - phi(x, y, Q_N(s)).
double critical_value_gamma(double x, double alpha, double s);

// Length of the shortest path from a to b avoiding the unit ball.
double exterior_geodesic(double r, double s, double cos_theta);

} // namespace arago
