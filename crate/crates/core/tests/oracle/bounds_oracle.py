"""High-precision reference values for the closed-form distance bounds.

Run with `python3 bounds_oracle.py`; the printed table is frozen into
`tests/bounds_oracle.rs`. Formulas are evaluated directly (no cancellation
guards) at 50 significant digits.
"""
from mpmath import mp, mpf, exp, sqrt

mp.dps = 50


def beta(j0, j1, tau, m, Q):
    a = mpf(tau) * j0 / m
    b = mpf(tau) * j1 / m
    return exp(a) * ((Q * exp(-b) + exp(b * Q)) / (Q + 1)) - 1


def gammas(be, zeta, q, Q):
    zq = mpf(zeta) ** q
    u = 1 + be
    w = (1 + Q * be) * zq
    root = sqrt((u - w) ** 2 + 4 * Q * be ** 2 * zq)
    return (u + w + root) / 2, (u + w - root) / 2


def coefficients(be, zeta, q, Q, gp, gm):
    zq = mpf(zeta) ** q
    u = 1 + be
    ap = (Q * be * zq * (gp + be) + u * (u - gm)) / (gp - gm)
    am = (Q * be * zq * (gm + be) + u * (u - gp)) / (gm - gp)
    return ap, am


def exact(j0, j1, tau, m, Q, q, zeta):
    be = beta(j0, j1, tau, m, Q)
    gp, gm = gammas(be, zeta, q, Q)
    ap, am = coefficients(be, zeta, q, Q, gp, gm)
    return ap * gp ** (m - 1) + am * gm ** (m - 1) - exp(mpf(j0) * tau)


def strong(j0, j1, tau, m, Q):
    b = mpf(tau) * j1 / m
    return exp(mpf(j0) * tau) * (((Q * exp(-b) + exp(b * Q)) / (Q + 1)) ** m - 1)


def first_order(j0, j1, tau, m, Q, q, zeta):
    zq = mpf(zeta) ** q
    t = mpf(tau)
    return Q * exp(t * j0) * (t**2 * j1**2 / 2 + (t * j0 + t**2 * j0**2) * zq / (1 - zq)) / m


def show(name, x):
    print(f"{name} = {mp.nstr(x, 30)}")


if __name__ == "__main__":
    one, lam = mpf(1), mpf("0.1")
    be = beta(one, lam, one, 10, 3)
    show("beta(j0=1, j1=0.1, tau=1, M=10, Q=3)", be)
    gp, gm = gammas(be, mpf("0.5"), 2, 3)
    show("gamma_plus(zeta=0.5, q=2, Q=3)", gp)
    show("gamma_minus(zeta=0.5, q=2, Q=3)", gm)
    ap, am = coefficients(be, mpf("0.5"), 2, 3, gp, gm)
    show("a_plus", ap)
    show("a_minus", am)
    cases = [
        (1, "0.1", 1, 20, 15, 8, "0.5"),
        (1, "0.1", 1, 20, 15, 1, "0.5"),
        (1, "0.1", 1, 1, 15, 8, "0.5"),
        (1, "0.1", 1, 4096, 15, 8, "0.5"),
        (1, "0.1", 1, 4096, 15, 1, "0.5"),
        (1, "1", 1, 60, 15, 1, "0.5"),
        (1, "0.1", 1, 7, 15, 8, "0.95"),
        (1, "0.1", 1, 32, 3, 2, "0.0"),
        (2, "0.3", "0.5", 5, 3, 2, "0.3"),
        (1, "0.1", 1, 3, 3, 1, "0.999"),
    ]
    for j0, j1, tau, m, Q, q, z in cases:
        j0, j1, tau, z = mpf(j0), mpf(j1), mpf(tau), mpf(z)
        tag = f"j0={j0} j1={j1} tau={tau} M={m} Q={Q} q={q} zeta={z}"
        show(f"exact[{tag}]", exact(j0, j1, tau, m, Q, q, z))
        show(f"first[{tag}]", first_order(j0, j1, tau, m, Q, q, z))
        show(f"strong[{tag}]", strong(j0, j1, tau, m, Q))
