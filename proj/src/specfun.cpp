#include "arago/specfun.hpp"
#include "arago/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace arago {

namespace {

constexpr double kEps = 1e-16;
constexpr double kFpmin = 1e-300;
constexpr double kBig = 1e250;
const double kLogBig = std::log(kBig);
constexpr double kSqrt3 = 1.73205080756887729352744634150587237;

// Taylor coefficients of 1/Gamma(1+z) about z = 0.
constexpr double kRgamma[] = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
};

// gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
    double odd = 0.0, even = 0.0, p = 1.0;
    const int n = static_cast<int>(std::size(kRgamma));
    for (int j = 0; j < n; ++j) {
        if (j % 2 == 0)
            even += kRgamma[j] * p;
        else
            odd += kRgamma[j] * p / mu; // p = mu^j, odd part divided by mu
        p *= mu;
    }
    if (mu == 0.0) {
        odd = kRgamma[1];
    }
    gam1 = -odd;
    gam2 = even;
    gampl = gam2 - mu * gam1;
    gammi = gam2 + mu * gam1;
}

struct Cf1 {
    double h;
    int isign;
};

// Continued fraction for J'_nu / J_nu, in extended precision since the
// iteration count grows like x.
Cf1 bessel_cf1(double nu, double x) {
    using ld = long double;
    const ld xi = 1.0L / x, xi2 = 2.0L * xi;
    const ld fpmin = 1e-300L;
    const int maxit = 20000 + static_cast<int>(4.0 * x);
    int isign = 1;
    ld h = nu * xi;
    if (h < fpmin) h = fpmin;
    ld d = 0.0L, c = h;
    for (int i = 1; i <= maxit; ++i) {
        const ld b = xi2 * (static_cast<ld>(nu) + i);
        d = b - d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b - 1.0L / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0L / d;
        const ld del = c * d;
        h *= del;
        if (d < 0.0L) isign = -isign;
        if (std::fabs(del - 1.0L) <= 1e-19L) return {static_cast<double>(h), isign};
    }
    throw std::runtime_error("bessel: continued fraction CF1 did not converge");
}

// H^(1)_nu(x) for x large against nu^2.
cplx hankel_large_argument(double nu, double x) {
    const double mu4 = 4.0 * nu * nu;
    const double omega = x - 0.5 * kPi * nu - 0.25 * kPi;
    cplx sum = 1.0, ik = 1.0;
    double a = 1.0, prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        a *= (mu4 - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
        ik *= cplx(0.0, 1.0);
        const double t = std::abs(a);
        if (t > prev && k > 2) break;
        sum += ik * a;
        prev = t;
        if (t < 1e-17) break;
    }
    return std::sqrt(2.0 / (kPi * x)) * std::polar(1.0, omega) * sum;
}

} // namespace

cplx Scaled::value() const { return mant * std::exp(lg); }

double Scaled::log_abs() const { return std::log(std::abs(mant)) + lg; }

// ---------------------------------------------------------------- Bessel

BesselJYScaled bessel_jy_scaled(double nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel: argument must be positive");
    if (!(nu >= 0.0)) throw std::domain_error("bessel: order must be non-negative");

    const int nl = (x < 2.0) ? static_cast<int>(nu + 0.5) : std::max(0, static_cast<int>(nu - x + 1.5));
    const double xmu = nu - nl, xmu2 = xmu * xmu;
    const double xi = 1.0 / x, xi2 = 2.0 * xi, w = xi2 / kPi;

    const Cf1 cf = bessel_cf1(nu, x);
    double rjl = cf.isign, rjpl = cf.h * rjl;
    const double rjl1 = rjl, rjp1 = rjpl;
    double fact = nu * xi, lscale = 0.0;
    for (int l = nl; l >= 1; --l) {
        const double rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if (std::abs(rjl) > kBig) {
            rjl /= kBig;
            rjpl /= kBig;
            lscale += kLogBig;
        }
    }
    if (rjl == 0.0) rjl = kEps;
    const double f = rjpl / rjl;

    double rjmu, rymu, rymup, ry1;
    if (x < 2.0) {
        const double x2 = 0.5 * x, pimu = kPi * xmu;
        const double fct = (std::abs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = xmu * d;
        const double fct2 = (std::abs(e) < kEps) ? 1.0 : std::sinh(e) / e;
        double gam1, gam2, gampl, gammi;
        temme_gammas(xmu, gam1, gam2, gampl, gammi);
        double ff = 2.0 / kPi * fct * (gam1 * std::cosh(e) + gam2 * fct2 * d);
        e = std::exp(e);
        double p = e / (gampl * kPi);
        double q = 1.0 / (e * kPi * gammi);
        const double pimu2 = 0.5 * pimu;
        const double fct3 = (std::abs(pimu2) < kEps) ? 1.0 : std::sin(pimu2) / pimu2;
        const double r = kPi * pimu2 * fct3 * fct3;
        double c = 1.0;
        d = -x2 * x2;
        double sum = ff + r * q, sum1 = p;
        int i = 1;
        for (; i <= 10000; ++i) {
            ff = (i * ff + p + q) / (i * static_cast<double>(i) - xmu2);
            c *= d / i;
            p /= (i - xmu);
            q /= (i + xmu);
            const double del = c * (ff + r * q);
            sum += del;
            const double del1 = c * p - i * del;
            sum1 += del1;
            if (std::abs(del) < (1.0 + std::abs(sum)) * kEps) break;
        }
        if (i > 10000) throw std::runtime_error("bessel: Temme series did not converge");
        rymu = -sum;
        ry1 = -sum1 * xi2;
        rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        double a = 0.25 - xmu2, p = -0.5 * xi, q = 1.0;
        const double br = 2.0 * x;
        double bi = 2.0;
        double fct = a * xi / (p * p + q * q);
        double cr = br + q * fct, ci = bi + p * fct;
        double den = br * br + bi * bi;
        double dr = br / den, di = -bi / den;
        double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
        double temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        int i = 2;
        for (; i <= 100000; ++i) {
            a += 2 * (i - 1);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if (std::abs(dr) + std::abs(di) < kFpmin) dr = kFpmin;
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if (std::abs(cr) + std::abs(ci) < kFpmin) cr = kFpmin;
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (std::abs(dlr - 1.0) + std::abs(dli) <= kEps) break;
        }
        if (i > 100000) throw std::runtime_error("bessel: continued fraction CF2 did not converge");
        const double gam = (p - f) / q;
        rjmu = std::sqrt(w / ((p - f) * gam + q));
        rjmu = std::copysign(rjmu, rjl);
        rymu = rjmu * gam;
        rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    BesselJYScaled out{};
    const double ratio = rjmu / rjl;
    out.j = rjl1 * ratio;
    out.dj = rjp1 * ratio;
    out.lj = -lscale;

    double ly = 0.0;
    for (int i = 1; i <= nl; ++i) {
        const double rytemp = (xmu + i) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
        if (std::abs(ry1) > kBig) {
            ry1 /= kBig;
            rymu /= kBig;
            ly += kLogBig;
        }
    }
    out.y = rymu;
    out.dy = nu * xi * rymu - ry1;
    out.ly = ly;
    return out;
}

std::string to_string(HankelMethod m) {
    switch (m) {
    case HankelMethod::closed_form_half_integer: return "closed_form_half_integer";
    case HankelMethod::recurrence: return "recurrence";
    case HankelMethod::uniform_asymptotic: return "uniform_asymptotic";
    case HankelMethod::small_argument: return "small_argument";
    case HankelMethod::large_argument: return "large_argument";
    }
    return "unknown";
}

HankelValue bessel_half_integer_closed(int n, double z) {
    if (n < 0) throw std::domain_error("bessel: negative index");
    if (!(z > 0.0)) throw std::domain_error("bessel: argument must be positive");
    // h_n(z) = (-i)^{n+1} e^{iz}/z sum_k i^k (n+k)! / (k! (n-k)! (2z)^k)
    auto sum_for = [z](int m) {
        cplx s = 0.0, ik = 1.0;
        double c = 1.0;
        for (int k = 0; k <= m; ++k) {
            if (k > 0) c *= static_cast<double>(m + k) * (m - k + 1) / (k * 2.0 * z);
            s += ik * c;
            ik *= cplx(0.0, 1.0);
        }
        cplx pre = std::pow(cplx(0.0, -1.0), m + 1) * std::exp(cplx(0.0, z)) / z;
        return pre * s;
    };
    const cplx hn = sum_for(n);
    const cplx hn1 = sum_for(n + 1);
    const double nu = n + 0.5;
    const double scale = std::sqrt(2.0 * z / kPi);
    const cplx H = scale * hn;
    const cplx H1 = scale * hn1;
    const cplx dH = (nu / z) * H - H1;
    HankelValue v;
    v.order = nu;
    v.argument = z;
    v.j = H.real();
    v.y = H.imag();
    v.dj = dH.real();
    v.dy = dH.imag();
    v.h1 = H;
    v.method = HankelMethod::closed_form_half_integer;
    v.error_estimate = 1e-14;
    return v;
}

HankelValue bessel(double nu, double z) {
    const double two_nu = 2.0 * nu;
    const double k = std::round(two_nu);
    if (!(std::abs(two_nu - k) < 1e-12) || k < 1.0)
        throw std::invalid_argument("bessel: order must be m+1/2, m+1 or m+3/2");
    if (!(z > 0.0)) throw std::domain_error("bessel: argument must be positive");
    const bool half = static_cast<long long>(k) % 2 == 1;
    if (half && nu <= z && nu * nu <= 20.0 * z) return bessel_half_integer_closed(static_cast<int>(nu - 0.5), z);

    const BesselJYScaled s = bessel_jy_scaled(nu, z);
    HankelValue v;
    v.order = nu;
    v.argument = z;
    const double ej = std::exp(s.lj), ey = std::exp(s.ly);
    v.j = s.j * ej;
    v.dj = s.dj * ej;
    v.y = s.y * ey;
    v.dy = s.dy * ey;
    v.h1 = cplx(v.j, v.y);
    v.method = (z < 2.0) ? HankelMethod::small_argument : HankelMethod::recurrence;
    v.error_estimate = 1e-13;
    return v;
}

BesselIK bessel_ik(double nu, double x) {
    if (!(x >= 2.0)) throw std::domain_error("bessel_ik: x >= 2 required");
    if (!(nu >= 0.0)) throw std::domain_error("bessel_ik: order must be non-negative");
    const int nl = static_cast<int>(nu + 0.5);
    const double xmu = nu - nl, xmu2 = xmu * xmu;
    const double xi = 1.0 / x, xi2 = 2.0 * xi;
    double h = nu * xi;
    if (h < kFpmin) h = kFpmin;
    double b = xi2 * nu, d = 0.0, c = h;
    int i = 1;
    for (; i <= 100000; ++i) {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) break;
    }
    if (i > 100000) throw std::runtime_error("bessel_ik: CF1 did not converge");
    double ril = kFpmin, ripl = h * ril;
    const double ril1 = ril, rip1 = ripl;
    double fact = nu * xi;
    for (int l = nl; l >= 1; --l) {
        const double ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    const double f = ripl / ril;

    b = 2.0 * (1.0 + x);
    d = 1.0 / b;
    double delh = d;
    h = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - xmu2;
    double q = a1;
    c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (i = 2; i <= 100000; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) <= kEps) break;
    }
    if (i > 100000) throw std::runtime_error("bessel_ik: CF2 did not converge");
    h = a1 * h;
    double rkmu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    double rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    const double rkmup = xmu * xi * rkmu - rk1;
    const double rimu = xi / (f * rkmu - rkmup);
    BesselIK out{};
    out.i = (rimu * ril1) / ril;
    out.di = (rimu * rip1) / ril;
    for (i = 1; i <= nl; ++i) {
        const double rktemp = (xmu + i) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    out.k = rkmu;
    out.dk = nu * xi * rkmu - rk1;
    return out;
}

// Moves the magnitude of each mantissa into lg so products of entries cannot overflow.
static void normalize(std::vector<Scaled>& v) {
    for (auto& e : v) {
        const double a = std::abs(e.mant);
        if (a > 0.0 && std::isfinite(a)) {
            e.mant /= a;
            e.lg += std::log(a);
        }
    }
}

std::vector<Scaled> hankel_sequence(double nu0, double x, int M) {
    if (!(x > 0.0)) throw std::domain_error("hankel_sequence: argument must be positive");
    std::vector<Scaled> out(static_cast<size_t>(M) + 1);
    cplx h0, h1;
    if (x >= 30.0 && nu0 <= 4.0) {
        h0 = hankel_large_argument(nu0, x);
        h1 = hankel_large_argument(nu0 + 1.0, x);
    } else {
        const BesselJYScaled a = bessel_jy_scaled(nu0, x);
        const BesselJYScaled b = bessel_jy_scaled(nu0 + 1.0, x);
        h0 = cplx(a.j * std::exp(a.lj), a.y * std::exp(a.ly));
        h1 = cplx(b.j * std::exp(b.lj), b.y * std::exp(b.ly));
    }
    double lg = 0.0;
    out[0] = {h0, 0.0};
    if (M >= 1) out[1] = {h1, 0.0};
    const double xi2 = 2.0 / x;
    for (int m = 1; m < M; ++m) {
        const cplx h2 = (nu0 + m) * xi2 * h1 - h0;
        h0 = h1;
        h1 = h2;
        if (std::abs(h1) > kBig) {
            h0 /= kBig;
            h1 /= kBig;
            lg += kLogBig;
        }
        out[static_cast<size_t>(m) + 1] = {h1, lg};
    }
    normalize(out);
    return out;
}

std::vector<Scaled> bessel_j_sequence(double nu0, double x, int M) {
    if (!(x > 0.0)) throw std::domain_error("bessel_j_sequence: argument must be positive");
    const double nuM = nu0 + M;
    const Cf1 cf = bessel_cf1(nuM, x);
    std::vector<double> mant(static_cast<size_t>(M) + 2), lgs(static_cast<size_t>(M) + 2);
    // unnormalised u_k, u_{M+1}/u_M = J_{nu+1}/J_nu = nu/x - J'/J
    double uk = 1.0, ukp1 = nuM / x - cf.h;
    double lg = 0.0;
    mant[M] = uk;
    lgs[M] = 0.0;
    mant[M + 1] = ukp1;
    lgs[M + 1] = 0.0;
    const double xi2 = 2.0 / x;
    for (int k = M; k >= 1; --k) {
        const double ukm1 = (nu0 + k) * xi2 * uk - ukp1;
        ukp1 = uk;
        uk = ukm1;
        if (std::abs(uk) > kBig) {
            uk /= kBig;
            ukp1 /= kBig;
            lg += kLogBig;
        }
        mant[k - 1] = uk;
        lgs[k - 1] = lg;
    }
    // J_{nu+1} Y_nu - J_nu Y_{nu+1} = 2/(pi x)
    const BesselJYScaled y0 = bessel_jy_scaled(nu0, x);
    const BesselJYScaled y1 = bessel_jy_scaled(nu0 + 1.0, x);
    const double lg1 = lgs[1] + y0.ly, lg0 = lgs[0] + y1.ly;
    const double lmax = std::max(lg1, lg0);
    const double D = mant[1] * y0.y * std::exp(lg1 - lmax) - mant[0] * y1.y * std::exp(lg0 - lmax);
    const double logc = std::log(2.0 / (kPi * x)) - lmax - std::log(std::abs(D));
    const double sgn = (D < 0.0) ? -1.0 : 1.0;
    std::vector<Scaled> out(static_cast<size_t>(M) + 1);
    for (int k = 0; k <= M; ++k) out[k] = {cplx(sgn * mant[k], 0.0), lgs[k] + logc};
    normalize(out);
    return out;
}

// ---------------------------------------------------------------- Airy

AiryOverflow::AiryOverflow(double exponent)
    : std::overflow_error("airy: A_plus/A_minus overflow, exponent " + std::to_string(exponent)), exponent_(exponent) {}

double airy_overflow_threshold() { return std::pow(1.5 * 700.0, 2.0 / 3.0); }

std::string to_string(AiryRegime r) {
    switch (r) {
    case AiryRegime::series: return "series";
    case AiryRegime::modified_bessel: return "modified_bessel";
    case AiryRegime::negative_asymptotic: return "negative_asymptotic";
    case AiryRegime::positive_asymptotic: return "positive_asymptotic";
    }
    return "unknown";
}

namespace {

constexpr long double kAi0 = 0.355028053887817239260063186004183176397979174199177573L;
constexpr long double kDAi0 = 0.258819403792806798405183560189203963479091138354934582L;

AiryReal airy_series(double zd) {
    const long double z = zd, z3 = z * z * z;
    long double t = 1.0L, f = 1.0L;
    long double u = z, g = z;
    long double p = z * z / 2.0L, fp = p;
    long double q = 1.0L, gp = 1.0L;
    for (int k = 1; k < 400; ++k) {
        t *= z3 / ((3.0L * k - 1.0L) * (3.0L * k));
        u *= z3 / ((3.0L * k) * (3.0L * k + 1.0L));
        if (k >= 2) p *= z3 / ((3.0L * k - 3.0L) * (3.0L * k - 1.0L));
        q *= z3 / ((3.0L * k - 2.0L) * (3.0L * k));
        f += t;
        g += u;
        if (k >= 2) fp += p;
        gp += q;
        const long double tiny = 1e-22L;
        if (k > 3 && std::fabs(t) <= tiny * std::fabs(f) + 1e-300L && std::fabs(u) <= tiny * (std::fabs(g) + 1e-300L) &&
            std::fabs(p) <= tiny * (std::fabs(fp) + 1e-300L) && std::fabs(q) <= tiny * std::fabs(gp))
            break;
    }
    const long double s3 = 1.732050807568877293527446341505872367L;
    AiryReal r{};
    r.ai = static_cast<double>(kAi0 * f - kDAi0 * g);
    r.bi = static_cast<double>(s3 * (kAi0 * f + kDAi0 * g));
    r.dai = static_cast<double>(kAi0 * fp - kDAi0 * gp);
    r.dbi = static_cast<double>(s3 * (kAi0 * fp + kDAi0 * gp));
    r.regime = AiryRegime::series;
    return r;
}

// Coefficients u_k, v_k of the large-argument Airy expansions.
struct AiryCoeffs {
    std::vector<double> u, v;
    AiryCoeffs() {
        u.push_back(1.0);
        v.push_back(1.0);
        for (int k = 1; k < 60; ++k) {
            const double uk = u.back() * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
            u.push_back(uk);
            v.push_back(-uk * (6.0 * k + 1.0) / (6.0 * k - 1.0));
        }
    }
};

const AiryCoeffs& airy_coeffs() {
    static const AiryCoeffs c;
    return c;
}

AiryReal airy_negative_asymptotic(double z) {
    const auto& c = airy_coeffs();
    const double x = -z, xi = 2.0 / 3.0 * x * std::sqrt(x), theta = xi - 0.25 * kPi;
    double P = 0.0, Q = 0.0, Ve = 0.0, Vo = 0.0;
    double pw = 1.0, prev = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < c.u.size(); ++k) {
        const double tu = c.u[k] * pw, tv = c.v[k] * pw;
        const double mag = std::max(std::abs(tu), std::abs(tv));
        if (mag > prev) break;
        const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            P += sgn * tu;
            Ve += sgn * tv;
        } else {
            Q += sgn * tu;
            Vo += sgn * tv;
        }
        if (mag < 1e-17) break;
        prev = mag;
        pw /= xi;
    }
    const double pre = 1.0 / std::sqrt(kPi);
    const double x4 = std::sqrt(std::sqrt(x));
    const cplx e = std::polar(1.0, -theta);
    const cplx w = pre / x4 * e * cplx(P, Q);
    const cplx dw = pre * x4 * e * cplx(-Vo, Ve);
    return {w.real(), dw.real(), w.imag(), dw.imag(), AiryRegime::negative_asymptotic};
}

AiryReal airy_positive_asymptotic(double z) {
    const auto& c = airy_coeffs();
    const double xi = 2.0 / 3.0 * z * std::sqrt(z);
    double sa = 0.0, sb = 0.0, sva = 0.0, svb = 0.0;
    double pw = 1.0, prev = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < c.u.size(); ++k) {
        const double tu = c.u[k] * pw, tv = c.v[k] * pw;
        const double mag = std::max(std::abs(tu), std::abs(tv));
        if (mag > prev) break;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        sa += sgn * tu;
        sva += sgn * tv;
        sb += tu;
        svb += tv;
        if (mag < 1e-17) break;
        prev = mag;
        pw /= xi;
    }
    const double pre = 1.0 / std::sqrt(kPi);
    const double z4 = std::sqrt(std::sqrt(z));
    const double em = std::exp(-xi), ep = std::exp(xi);
    AiryReal r{};
    r.ai = 0.5 * pre * em / z4 * sa;
    r.dai = -0.5 * pre * z4 * em * sva;
    r.bi = pre * ep / z4 * sb;
    r.dbi = pre * z4 * ep * svb;
    r.regime = AiryRegime::positive_asymptotic;
    return r;
}

AiryReal airy_modified_bessel(double z) {
    const double xi = 2.0 / 3.0 * z * std::sqrt(z);
    const BesselIK a = bessel_ik(1.0 / 3.0, xi);
    const BesselIK b = bessel_ik(2.0 / 3.0, xi);
    const double s = std::sqrt(z / 3.0);
    const double sin60 = 0.5 * kSqrt3;
    AiryReal r{};
    r.ai = s * a.k / kPi;
    r.dai = -z / (kPi * kSqrt3) * b.k;
    r.bi = s * (2.0 * a.i + 2.0 / kPi * sin60 * a.k);
    r.dbi = z / kSqrt3 * (2.0 * b.i + 2.0 / kPi * sin60 * b.k);
    r.regime = AiryRegime::modified_bessel;
    return r;
}

} // namespace

AiryReal airy_real(double z) {
    if (!std::isfinite(z)) throw std::domain_error("airy: argument must be finite");
    if (z > airy_overflow_threshold()) throw AiryOverflow(2.0 / 3.0 * z * std::sqrt(z));
    if (z < -8.0) return airy_negative_asymptotic(z);
    if (z <= 5.0) return airy_series(z);
    if (z < 10.0) return airy_modified_bessel(z);
    return airy_positive_asymptotic(z);
}

AiryValue airy_eval(double z) {
    const AiryReal r = airy_real(z);
    const cplx em = std::polar(0.5, -kPi / 3.0), ep = std::polar(0.5, kPi / 3.0);
    AiryValue v;
    v.argument = z;
    v.a = r.ai;
    v.da = r.dai;
    v.a_plus = em * cplx(r.ai, r.bi);
    v.da_plus = em * cplx(r.dai, r.dbi);
    v.a_minus = ep * cplx(r.ai, -r.bi);
    v.da_minus = ep * cplx(r.dai, -r.dbi);
    v.regime = r.regime;
    return v;
}

double airy_mu(double z) {
    if (z > 0.0) throw std::domain_error("airy_mu: defined for z <= 0 only");
    const AiryValue v = airy_eval(z);
    const double arg = std::arg(v.a_plus);
    const double x = -z;
    const double est = 2.0 / 3.0 * x * std::sqrt(x) + kPi / 12.0 * std::min(1.0, x);
    const double k = std::round((est + arg) / (2.0 * kPi));
    return -arg + 2.0 * kPi * k;
}

AiryDerived airy_derived(double z) {
    const AiryValue v = airy_eval(z);
    AiryDerived out;
    out.sigma = std::abs(v.a_plus);
    out.phi_plus = v.da_plus / v.a_plus;
    if (z <= 0.0) out.mu = airy_mu(z);
    return out;
}

// ------------------------------------------------------- Uniform expansion

namespace {

double langer_b0(double rho, double zeta) {
    if (std::abs(rho - 1.0) < 0.05) return 0.02;
    if (zeta > 0.0) {
        const double q = 1.0 - rho * rho;
        return -5.0 / (48.0 * zeta * zeta) + (5.0 / (24.0 * q * std::sqrt(q)) - 1.0 / (8.0 * std::sqrt(q))) / std::sqrt(zeta);
    }
    const double q = rho * rho - 1.0;
    return -5.0 / (48.0 * zeta * zeta) + (5.0 / (24.0 * q * std::sqrt(q)) + 1.0 / (8.0 * std::sqrt(q))) / std::sqrt(-zeta);
}

} // namespace

HankelValue hankel_uniform(double nu, double rho) {
    if (!(nu >= 20.0)) throw std::domain_error("hankel_uniform: order must be >= 20");
    if (!(rho >= 0.3 && rho <= 3.0)) throw std::domain_error("hankel_uniform: rho outside [0.3, 3]");
    const double zeta = zeta_tilde(rho);
    const double p = langer_prefactor(rho);
    const double n13 = std::cbrt(nu);
    const double x = n13 * n13 * zeta;
    const AiryValue a = airy_eval(x);
    const AiryReal r = airy_real(x);
    HankelValue v;
    v.order = nu;
    v.argument = nu * rho;
    v.j = p / n13 * r.ai;
    v.y = -p / n13 * r.bi;
    v.dj = -2.0 / (rho * p) * r.dai / (n13 * n13);
    v.dy = 2.0 / (rho * p) * r.dbi / (n13 * n13);
    v.h1 = cplx(v.j, v.y);
    v.method = HankelMethod::uniform_asymptotic;
    const double b0 = std::abs(langer_b0(rho, zeta));
    v.error_estimate = b0 / (nu * n13) * std::abs(a.da_minus / a.a_minus);
    return v;
}

// ---------------------------------------------------------- Polynomials

double legendre_p(int m, double x) {
    if (m < 0) throw std::domain_error("legendre_p: negative degree");
    if (m == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int n = 2; n <= m; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double gegenbauer_c(int m, double lambda, double x) {
    if (m < 0) throw std::domain_error("gegenbauer_c: negative degree");
    if (m == 0) return 1.0;
    double c0 = 1.0, c1 = 2.0 * lambda * x;
    for (int n = 2; n <= m; ++n) {
        const double c2 = (2.0 * x * (n + lambda - 1.0) * c1 - (n + 2.0 * lambda - 2.0) * c0) / n;
        c0 = c1;
        c1 = c2;
    }
    return c1;
}

double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

double harmonic_dimension(int d, int m) {
    // (2m+d-2)/(d-2) * binom(m+d-3, m)
    double b = 1.0;
    for (int k = 1; k <= m; ++k) b *= static_cast<double>(k + d - 3) / k;
    return (2.0 * m + d - 2.0) / (d - 2.0) * b;
}

namespace {
void check_zonal_args(int d, double x) {
    if (d < 3 || d > 5) throw std::domain_error("zonal: dimension must be 3, 4 or 5");
    if (!(std::abs(x) <= 1.0 + 1e-14)) throw std::domain_error("zonal: |cos theta| must be <= 1");
}
} // namespace

double zonal(int d, int m, double x) {
    check_zonal_args(d, x);
    if (m < 0) throw std::domain_error("zonal: negative degree");
    if (d == 3) return (2.0 * m + 1.0) / (4.0 * kPi) * legendre_p(m, x);
    const double lambda = 0.5 * (d - 2);
    return (m + lambda) / lambda * gegenbauer_c(m, lambda, x) / sphere_area(d);
}

std::vector<double> zonal_sequence(int d, double x, int M) {
    check_zonal_args(d, x);
    std::vector<double> out(static_cast<size_t>(M) + 1);
    const double lambda = 0.5 * (d - 2);
    const double area = sphere_area(d);
    double c0 = 1.0, c1 = 2.0 * lambda * x;
    for (int m = 0; m <= M; ++m) {
        double c;
        if (m == 0)
            c = c0;
        else if (m == 1)
            c = c1;
        else {
            c = (2.0 * x * (m + lambda - 1.0) * c1 - (m + 2.0 * lambda - 2.0) * c0) / m;
            c0 = c1;
            c1 = c;
        }
        out[m] = (m + lambda) / lambda * c / area;
    }
    return out;
}

} // namespace arago
