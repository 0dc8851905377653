"""Independent high-precision values frozen in the test suite.

Uses mpmath (not a package dependency) with closed-form potentials written
out from scratch, tanh-sinh quadrature for periods and findroot for the
landmarks, so none of the package numerics are involved.
"""

import mpmath as mp

mp.mp.dps = 30


def elasticity():
    um, up = mp.mpf(4), mp.mpf(5)
    s2 = (mp.sqrt(up) - mp.sqrt(um)) / (up - um)
    sig = mp.sqrt
    phi = lambda u: -(sig(u) - sig(um) - s2 * (u - um))  # noqa: E731
    Phi = lambda u: mp.quad(phi, [up, u])  # noqa: E731
    E_max = Phi(um)
    u_s = mp.findroot(lambda u: Phi(u) - E_max, 5.5)
    a_plus = s2 - 1 / (2 * mp.sqrt(up))
    a_minus = s2 - 1 / (2 * mp.sqrt(um))
    c = mp.mpf("0.004")
    lam = (-c + mp.sqrt(c * c - 4 * a_minus)) / 2
    print("elasticity sigma=sqrt(u), 4 -> 5")
    print("  s^2      ", s2)
    print("  E_max    ", E_max)
    print("  u_s      ", u_s)
    print("  c*       ", 2 * mp.sqrt(a_plus))
    print("  phi'(u+-) ", a_plus, a_minus)
    print("  lambda+  ", lam, "(c = 0.004)")

    def T(E):
        u1 = mp.findroot(lambda u: Phi(u) - E, (um + mp.mpf("1e-30"), up), solver="anderson")
        u2 = mp.findroot(lambda u: Phi(u) - E, (up, u_s), solver="anderson")

        def f(u):
            g = E - Phi(u)
            return 0 if g <= 0 else 1 / mp.sqrt(2 * g)

        return 2 * mp.quad(f, [u1, up, u2])

    for k in range(2, 7):
        print(f"  T(k={k})   ", mp.nstr(T(E_max * (1 - mp.mpf(10) ** -k)), 15))
    for frac in ("0.05", "0.35", "0.65", "0.95"):
        print(f"  T({frac})  ", mp.nstr(T(E_max * mp.mpf(frac)), 15))


def qhd():
    g, rm, rp = mp.mpf("1.4"), mp.mpf("1.5"), mp.mpf(1)
    m2 = (rm**g - rp**g) / (1 / rp - 1 / rm)
    rho_m = rm
    psi = lambda x: -(2 / mp.e**x) * ((mp.e**x) ** g - rho_m**g + m2 * (mp.e**-x - 1 / rho_m))  # noqa: E731
    # the spiral sits at x = 0 (rho = 1); the potential is measured from there
    Phi = lambda x: mp.quad(psi, [0, x])  # noqa: E731
    E_max = Phi(mp.log(rm))
    x_s = mp.findroot(lambda x: Phi(x) - E_max, -0.18)
    print("QHD gamma=1.4, rho 1.5 -> 1")
    print("  m^2      ", m2)
    print("  m        ", -mp.sqrt(m2))
    print("  E_max    ", E_max)
    print("  x_s      ", x_s)


def boussinesq():
    s = mp.mpf(2)
    # phi(u)/u = 0 reduces to u^2 - 3 s u + 2 s^2 - 2 = 0
    up = (3 * s - mp.sqrt(s * s + 8)) / 2
    Phi = lambda u: u**3 / 6 - s * u * u / 2 - u + s * mp.log(s / (s - u))  # noqa: E731
    u_s = mp.findroot(lambda u: Phi(u) - Phi(0), 1.7)
    print("Boussinesq s=2")
    print("  u+       ", up)
    print("  raw Phi(u+)", Phi(up))
    print("  u_s      ", u_s)
    print("  alpha    ", ((up - s) ** 3 + s) / (up - s) ** 2)


if __name__ == "__main__":
    elasticity()
    qhd()
    boussinesq()
