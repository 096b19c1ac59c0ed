#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arago {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// A complex number stored as mant * exp(lg); used where Bessel growth
// would leave the double range.
struct Scaled {
    cplx mant{0.0, 0.0};
    double lg = 0.0;

    cplx value() const;
    double log_abs() const;
};

// ---------------------------------------------------------------- Airy

enum class AiryRegime { series, modified_bessel, negative_asymptotic, positive_asymptotic };

std::string to_string(AiryRegime r);

// A = Ai, A_plus(z) = Ai(exp(-2i pi/3) z), A_minus(z) = Ai(exp(2i pi/3) z).
struct AiryValue {
    double argument = 0.0;
    cplx a, a_plus, a_minus;
    cplx da, da_plus, da_minus;
    AiryRegime regime = AiryRegime::series;
};

// Real Airy pair with derivatives.
struct AiryReal {
    double ai, dai, bi, dbi;
    AiryRegime regime;
};

class AiryOverflow : public std::overflow_error {
public:
    explicit AiryOverflow(double exponent);
    double exponent() const { return exponent_; }

private:
    double exponent_;
};

// Largest z for which Bi(z) stays representable.
double airy_overflow_threshold();

AiryReal airy_real(double z);
AiryValue airy_eval(double z);

struct AiryDerived {
    double sigma = 0.0;           // |A_plus(z)|
    std::optional<double> mu;     // A_plus = sigma exp(-i mu), z <= 0 only
    cplx phi_plus;                // A_plus' / A_plus
};

AiryDerived airy_derived(double z);
// Throws std::domain_error for z > 0.
double airy_mu(double z);

// ------------------------------------------------------------- Bessel

enum class HankelMethod { closed_form_half_integer, recurrence, uniform_asymptotic, small_argument, large_argument };

std::string to_string(HankelMethod m);

struct HankelValue {
    double order = 0.0;
    double argument = 0.0;
    double j = 0.0, y = 0.0;     // J_nu, Y_nu
    double dj = 0.0, dy = 0.0;   // derivatives in the argument
    cplx h1;                     // J + iY
    HankelMethod method = HankelMethod::recurrence;
    double error_estimate = 0.0; // relative
};

// J, Y and derivatives with separate log scales: J = j*exp(lj), Y = y*exp(ly).
struct BesselJYScaled {
    double j, dj, lj;
    double y, dy, ly;
};

// Any real order nu >= 0, x > 0.
BesselJYScaled bessel_jy_scaled(double nu, double x);

// Orders m+1/2, m+1, m+3/2 only (the families met for d = 3, 4, 5).
HankelValue bessel(double nu, double z);

// Finite Rayleigh sum for half-integer order nu = n + 1/2.
HankelValue bessel_half_integer_closed(int n, double z);

// Leading Langer-Olver form, nu >= 20, rho in [0.3, 3].
HankelValue hankel_uniform(double nu, double rho);

// Modified Bessel I_nu, K_nu and derivatives, x >= 2.
struct BesselIK {
    double i, di, k, dk;
};
BesselIK bessel_ik(double nu, double x);

// H^(1)_{nu0+m}(x), m = 0..M, by upward recurrence.
std::vector<Scaled> hankel_sequence(double nu0, double x, int M);

// J_{nu0+m}(x), m = 0..M, by downward recurrence normalised with Y.
std::vector<Scaled> bessel_j_sequence(double nu0, double x, int M);

// ---------------------------------------------------------- Polynomials

double legendre_p(int m, double x);
double gegenbauer_c(int m, double lambda, double x);

// Reproducing kernel of degree-m harmonics on S^{d-1} at cos(theta) = x.
double zonal(int d, int m, double x);
std::vector<double> zonal_sequence(int d, double x, int M);

double sphere_area(int d);
double harmonic_dimension(int d, int m);

} // namespace arago
