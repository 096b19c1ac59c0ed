"""Reference values for the unit tests, computed with mpmath at 40 digits.

Run `python3 gen_oracles.py` and paste the printed tables into the tests.
"""
import mpmath as mp

mp.mp.dps = 40


def c(z):
    z = mp.mpc(z)
    return "{%s, %s}" % (mp.nstr(z.real, 17, min_fixed=-3, max_fixed=3), mp.nstr(z.imag, 17, min_fixed=-3, max_fixed=3))


def r(x):
    return mp.nstr(mp.mpf(x), 17, min_fixed=-3, max_fixed=3)


def airy_pm(z):
    w = mp.exp(-2j * mp.pi / 3)
    ap = mp.airyai(w * z)
    am = mp.airyai(z / w)
    dap = w * mp.airyai(w * z, derivative=1)
    dam = mp.airyai(z / w, derivative=1) / w
    return ap, am, dap, dam


def zeta_olver(rho):
    rho = mp.mpf(rho)
    if rho == 1:
        return mp.mpf(0)
    if rho < 1:
        s = mp.sqrt(1 - rho**2)
        return (mp.mpf(3) / 2 * (mp.log((1 + s) / rho) - s)) ** (mp.mpf(2) / 3)
    s = mp.sqrt(rho**2 - 1)
    return -((mp.mpf(3) / 2 * (s - mp.asec(rho))) ** (mp.mpf(2) / 3))


def zonal(d, m, x):
    lam = mp.mpf(d - 2) / 2
    area = 2 * mp.pi ** (mp.mpf(d) / 2) / mp.gamma(mp.mpf(d) / 2)
    dim = mp.binomial(m + d - 1, d - 1) - mp.binomial(m + d - 3, d - 1) if m >= 2 else (1 if m == 0 else d)
    return dim * mp.gegenbauer(m, lam, x) / mp.gegenbauer(m, lam, 1) / area


def free_green(d, tau, rho):
    nu = mp.mpf(d - 2) / 2
    return 1j / 4 * (tau / (2 * mp.pi * rho)) ** nu * mp.hankel1(nu, tau * rho)


def exact_green(d, tau, r_, s_, x, M=80):
    nu0 = mp.mpf(d - 2) / 2
    cst = 1j * mp.pi / 2
    refl = mp.mpc(0)
    for m in range(M + 1):
        nu = m + nu0
        q = mp.besselj(nu, tau) / mp.hankel1(nu, tau)
        refl += zonal(d, m, x) * q * mp.hankel1(nu, tau * r_) * mp.hankel1(nu, tau * s_)
    refl *= cst * (r_ * s_) ** (-nu0)
    rho = mp.sqrt(r_**2 + s_**2 - 2 * r_ * s_ * x)
    return free_green(d, tau, rho) - refl


def sph_jh(m, x):
    j = mp.sqrt(mp.pi / (2 * x)) * mp.besselj(m + mp.mpf(1) / 2, x)
    h = mp.sqrt(mp.pi / (2 * x)) * mp.hankel1(m + mp.mpf(1) / 2, x)
    return j, h


def main():
    print("// Airy: z, Ai, A+, A-, A+', A-'")
    for z in [-12.5, -3.0, -0.7, 0.0, 0.4, 2.0, 6.0, 15.0]:
        ap, am, dap, dam = airy_pm(z)
        print("{%s, %s, %s, %s, %s, %s}," % (r(z), r(mp.airyai(z)), c(ap), c(am), c(dap), c(dam)))
    ap, am, dap, dam = airy_pm(mp.mpf("1.3"))
    print("// Wronskian A+'A- - A+A-' at z = 1.3:", c(dap * am - ap * dam), " i/(2 pi) =", r(1 / (2 * mp.pi)))

    print("// Bessel: nu, x, J, Y, J', Y'")
    for nu, x in [(0.5, 0.3), (1.0, 2.5), (1.5, 10.0), (10.0, 3.0), (20.5, 25.0), (50.0, 40.0), (101.0, 150.0), (2.5, 1000.0)]:
        nu, x = mp.mpf(nu), mp.mpf(x)
        print("{%s, %s, %s, %s, %s, %s}," % (r(nu), r(x), r(mp.besselj(nu, x)), r(mp.bessely(nu, x)),
                                             r(mp.besselj(nu, x, 1)), r(mp.bessely(nu, x, 1))))

    print("// log|J| deep in the evanescent region: nu, x, log J")
    for nu, x in [(200.0, 20.0), (1000.5, 100.0)]:
        print("{%s, %s, %s}," % (r(nu), r(x), r(mp.log(mp.besselj(nu, x)))))

    print("// zeta_tilde: rho, value, derivative")
    for rho in [0.2, 0.5, 0.9, 0.99, 1.01, 1.5, 3.0]:
        z = zeta_olver(rho)
        dz = mp.diff(zeta_olver, rho)
        print("{%s, %s, %s}," % (r(rho), r(z), r(dz)))

    print("// Legendre P_m(x) and zonal(d, m, x)")
    for m, x in [(5, 0.3), (40, -0.77), (200, 0.999)]:
        print("{%d, %s, %s}," % (m, r(x), r(mp.legendre(m, x))))
    for d, m, x in [(3, 7, 0.2), (4, 7, 0.2), (5, 12, -0.6)]:
        print("{%d, %d, %s, %s}," % (d, m, r(x), r(zonal(d, m, mp.mpf(x)))))

    print("// free_green: d, tau, rho, value")
    for d in (3, 4, 5):
        for tau, rho in [(2.0, 1.5), (0.3, 4.0), (40.0, 0.7)]:
            print("{%d, %s, %s, %s}," % (d, r(tau), r(rho), c(free_green(d, mp.mpf(tau), mp.mpf(rho)))))

    print("// exact_green: d, tau, r, s, cos, value")
    for d in (3, 4, 5):
        for tau, r_, s_, x in [(3.0, 2.0, 1.5, -0.11508098899676866), (0.5, 1.2, 3.0, 0.6), (8.0, 1.05, 2.0, -1.0)]:
            val = exact_green(d, mp.mpf(tau), mp.mpf(r_), mp.mpf(s_), mp.mpf(x), M=int(40 + 3 * tau * 2))
            print("{%d, %s, %s, %s, %s, %s}," % (d, r(tau), r(r_), r(s_), r(x), c(val)))

    print("// layer eigenvalues: m, tau, S = 2 i tau j h, K = i tau^2 (j h)'")
    for m, tau in [(0, 1.0), (3, 2.0), (10, 5.0), (25, 3.0)]:
        tau = mp.mpf(tau)
        j, h = sph_jh(m, tau)
        dj = mp.diff(lambda x: sph_jh(m, x)[0], tau)
        dh = mp.diff(lambda x: sph_jh(m, x)[1], tau)
        print("{%d, %s, %s, %s}," % (m, r(tau), c(2j * tau * j * h), c(1j * tau**2 * (dj * h + j * dh))))


if __name__ == "__main__":
    main()
