"""Reference values for the special-function tests.

Every value is computed with mpmath at high working precision, independently of
the C++ evaluation paths: Mittag-Leffler values come from the defining power
series summed with enough digits to absorb the alternating-sign cancellation,
integrals from mpmath's tanh-sinh quadrature. Run with `python3 gen_specfun_oracles.py`
and paste the printed block into tests/specfun_oracle_values.hpp.
"""
import mpmath as mp


def ml_series(alpha, beta, z):
    alpha, beta, z = mp.mpf(alpha), mp.mpf(beta), mp.mpf(z)
    if z == 0:
        return 1 / mp.gamma(beta)
    growth = float(abs(z)) ** (1.0 / float(alpha))
    with mp.workdps(40 + int(growth / 2.0)):
        total = mp.mpf(0)
        n = 0
        small = 0
        while True:
            term = z**n / mp.gamma(alpha * n + beta)
            total += term
            if abs(term) < mp.mpf(10) ** (-45) and n > growth / float(alpha):
                small += 1
                if small > 5:
                    break
            n += 1
        return +total


def e_theta(alpha, theta, t):
    alpha, theta, t = mp.mpf(alpha), mp.mpf(theta), mp.mpf(t)
    c = theta * mp.gamma(alpha)
    return t ** (alpha - 1) * mp.gamma(alpha) * ml_series(alpha, alpha, -c * t**alpha)


def main():
    mp.mp.dps = 30
    print("// Mittag-Leffler reference values {alpha, beta, z, value}")
    alphas = ["0.5", "0.55", "0.6", "0.75", "0.9", "0.99"]
    zs = ["-50", "-20", "-9", "-4.5", "-1", "-0.3", "0.7", "2.5", "5"]
    for a in alphas:
        for beta in (a, "1"):
            for z in zs:
                v = ml_series(a, beta, z)
                print(f"{{{a}, {beta}, {z}, {mp.nstr(v, 20)}}},")
    print("// E_{0.6,1}(-2.5)", mp.nstr(ml_series("0.6", "1", "-2.5"), 20))

    # E_theta(0.3) for alpha=0.6, theta=1.7
    print("// E_theta(0.3; 0.6, 1.7)", mp.nstr(e_theta("0.6", "1.7", "0.3"), 20))

    # int_a^b theta E_theta(u-s) ds, alpha=0.6, theta=1.7, u=1, a=0.2, b=0.7 by quadrature
    a_, th = mp.mpf("0.6"), mp.mpf("1.7")
    val = mp.quad(lambda s: th * e_theta(a_, th, 1 - s), [0.2, 0.7])
    print("// int theta E_theta", mp.nstr(val, 20))

    # weakly singular integral: int_0^1 s^-0.3 (1-s)^-0.4 cos(s) ds
    val = mp.quad(lambda s: s ** mp.mpf("-0.3") * (1 - s) ** mp.mpf("-0.4") * mp.cos(s), [0, 0.5, 1])
    print("// weakly singular cos", mp.nstr(val, 20))

    # e_t integral: int_0^tau E_theta(r)^2 dr for alpha=0.6, theta=1.7, tau=0.5
    # r = tau v^(1/(2 alpha - 1)) removes the r^(2 alpha - 2) singularity, which
    # plain tanh-sinh on r only resolves to ~1e-7 here.
    p_ = 2 * a_ - 1
    tau = mp.mpf("0.5")
    psi_ = lambda r: e_theta(a_, th, r) * r ** (1 - a_)
    val = tau**p_ / p_ * mp.quad(lambda v: psi_(tau * v ** (1 / p_)) ** 2, [0, 0.01, 0.1, 1])
    print("// int_0^0.5 E_theta^2 (0.6,1.7)", mp.nstr(val, 20))

    # sigma2_Y by double quadrature of the stochastic-Fubini form, alpha=0.6, theta=5.9, t=0.1
    mp.mp.dps = 20
    a2, th2, t, d = mp.mpf("0.6"), mp.mpf("5.9"), mp.mpf("0.1"), mp.mpf(30) / 365
    inner = lambda s: mp.quad(lambda u: e_theta(a2, th2, u - s), [t, t + d])
    val = mp.quad(lambda s: inner(s) ** 2, [0, t])
    print("// sigma2_Y(0.6, 5.9, 0.1, 30/365)", mp.nstr(val, 16))

    # sigma2_M by double quadrature, alpha=0.614, t=0.2
    mp.mp.dps = 30
    a3, t3 = mp.mpf("0.614"), mp.mpf("0.2")
    inner = lambda s: mp.quad(lambda u: (u - s) ** (a3 - 1), [t3, t3 + d])
    val = mp.quad(lambda s: inner(s) ** 2, [0, t3])
    print("// sigma2_M(0.614, 0.2, 30/365)", mp.nstr(val, 20))

    # Black-Scholes block: mu=0, sigma2=0.04, K=1
    F = mp.e ** mp.mpf("0.02")
    s = mp.sqrt(mp.mpf("0.04"))
    dp = (mp.log(F) + s * s / 2) / s
    dm = dp - s
    print("// BS(0, 0.04, 1)", mp.nstr(F * mp.ncdf(dp) - mp.ncdf(dm), 20))

    # implied vol for F=K=T=1 and price 0.07966
    f = lambda sig: 2 * mp.ncdf(sig / 2) - 1 - mp.mpf("0.07966")
    print("// implied vol(0.07966)", mp.nstr(mp.findroot(f, 0.2), 20))


if __name__ == "__main__":
    main()
