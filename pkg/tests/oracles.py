"""Independent reference computations used to freeze expected test values.

Run ``python tests/oracles.py`` to regenerate the numbers. Nothing here
imports growthorder.
"""

import mpmath as mp
from scipy.integrate import solve_ivp

mp.mp.dps = 50


def ode_value(c0, i, p, t_end):
    sol = solve_ivp(lambda t, c: i * c ** p, (0, t_end), [c0], method="DOP853",
                    rtol=1e-13, atol=1e-20 * c0)
    return sol.y[0, -1]


def closed_form(c0, i, p, t):
    c0, i, p, t = (mp.mpf(str(v)) for v in (c0, i, p, t))
    q = 1 - p
    return (c0 ** q + q * i * t) ** (1 / q)


def main():
    for p in (0.99, 0.95):
        for c0 in (1, 1e3, 1e6, 1e9):
            print(f"factor p={p} c0={c0:g}: {float(ode_value(c0, 0.05, p, 100) / c0)!r}")
    for p in ("0.99", "0.98", "0.97", "0.96", "0.95"):
        rate = mp.findroot(lambda i: closed_form(1e9, i, p, 10) - 2e9, 0.1)
        print(f"required rate p={p}: {mp.nstr(rate, 15)}")
    t2 = mp.findroot(lambda t: closed_form(1e9, "0.1987", "0.95", t) - 2e9, 10)
    print(f"doubling p=0.95 c0=1e9 i=0.1987: {mp.nstr(t2, 12)}")
    t_hit = mp.findroot(lambda t: closed_form(1e9, "0.05", "1.05", t) - 6e10, 25)
    print(f"time to 60e9 at p=1.05: {mp.nstr(t_hit, 14)}")
    t_star = (mp.mpf(10) ** 9) ** mp.mpf("-0.05") / mp.mpf("0.0025")
    print(f"blow-up p=1.05 c0=1e9 i=0.05: {mp.nstr(t_star, 14)}")


if __name__ == "__main__":
    main()
