#pragma once

#include "arago/phase.hpp"
#include "arago/specfun.hpp"

#include <array>
#include <functional>
#include <vector>

namespace arago {

// Layer operators on the unit sphere of R^3 with E(x, tau) = e^{i tau |x|}/(4 pi |x|):
//   S phi(y) = 2 int E(y - y') phi(y') ds,  K phi(y) = 2 int dE(y - y')/dnu(y') phi(y') ds.
struct LayerEigen {
    int m = 0;
    double tau = 0.0;
    cplx s_eig;
    cplx k_eig;
};

// Eigenvalues from the pole integral over chord length r in [0, 2].
LayerEigen layer_eigen(int m, double tau);
// 2 i tau j_m h_m and i tau^2 (j_m h_m)' from spherical Bessel functions.
LayerEigen layer_eigen_closed(int m, double tau);

using SphereFunction = std::function<cplx(const std::array<double, 3>&)>;

// Gauss-Legendre in cos(colatitude) times trapezoid in longitude.
struct SphereGrid {
    std::vector<double> x, w; // cos(theta) nodes and weights
    int nphi = 0;

    static SphereGrid for_degree(int L);
    static SphereGrid make(int ntheta, int nphi);
    size_t size() const { return x.size() * static_cast<size_t>(nphi); }
    std::array<double, 3> node(size_t i, int j) const;
    double weight(size_t i) const;
};

// Orthonormal complex harmonics Y_l^k, index l*l + l + k.
struct SurfaceDensity {
    int L = 0;
    std::vector<cplx> coeff;

    explicit SurfaceDensity(int L = 0) : L(L), coeff(static_cast<size_t>(L + 1) * (L + 1)) {}
    static size_t index(int l, int k) { return static_cast<size_t>(l * l + l + k); }
    cplx& at(int l, int k) { return coeff[index(l, k)]; }
    const cplx& at(int l, int k) const { return coeff[index(l, k)]; }

    cplx evaluate(const std::array<double, 3>& unit) const;
    std::vector<cplx> synthesize(const SphereGrid& g) const; // row-major (theta, phi)
    double norm() const;
};

std::vector<cplx> sample(const SphereGrid& g, const SphereFunction& f);
SurfaceDensity analyze(const SphereGrid& g, const std::vector<cplx>& values, int L);
SurfaceDensity sh_transform(int L, const SphereFunction& f);

// Solves phi + K phi - i S phi = 2 g0 degree by degree.
SurfaceDensity cfie_solve(double tau, const SurfaceDensity& g0);
// ||(I + K - i S) phi - 2 g0|| / ||g0||.
double cfie_residual(double tau, const SurfaceDensity& phi, const SurfaceDensity& g0);

// Trace of E(. - Q0, tau) on the sphere.
SurfaceDensity point_source_trace(double tau, const ExteriorPoint& source, int L);
int default_layer_degree(double tau, double source_radius);

// u(x) = int (dE/dnu - i E)(x - y) phi(y) ds(y) by surface quadrature.
cplx scattered_field(double tau, const SurfaceDensity& phi, const ExteriorPoint& target);

struct ModalField {
    cplx value;
    cplx radial_derivative;
};
// Same potential from the spherical-harmonic expansion.
ModalField scattered_field_modal(double tau, const SurfaceDensity& phi, const ExteriorPoint& target);

struct LayerGreen {
    cplx value;     // R = E(Q - Q0) - u(Q)
    cplx scattered; // u(Q)
    int degree = 0;
};
LayerGreen layer_green(double tau, const ExteriorPoint& source, const ExteriorPoint& target, int L = 0);

} // namespace arago
