"""Independent reference computations: finite differences in (xi, zeta = conj xi)."""

from math import factorial

import numpy as np

HALF_WIDTH = 5
STEP = 0.005


def stencil(d, m=HALF_WIDTH, h=STEP):
    """Central weights w_j on offsets j*h (j = -m..m) for the d-th derivative."""
    j = np.arange(-m, m + 1, dtype=float)
    p = np.arange(2 * m + 1)
    V = (j[None, :] * h) ** p[:, None] / np.array([factorial(int(q)) for q in p])[:, None]
    rhs = np.zeros(2 * m + 1)
    rhs[d] = 1.0
    return j * h, np.linalg.solve(V, rhs)


def fd_coefficient(F, xi, zeta, a, b, h=None):
    """d^a_xi d^b_zeta F / (a! b!) by tensor central differences.

    Without an explicit step, halves h from 0.04 and keeps the estimate whose
    neighbour agrees best (truncation and round-off balance).
    """
    if h is None:
        steps = STEP * 8 / 2 ** np.arange(7)
        est = [fd_coefficient(F, xi, zeta, a, b, hh) for hh in steps]
        gaps = [np.max(np.abs(est[i + 1] - est[i])) for i in range(len(est) - 1)]
        return est[int(np.argmin(gaps)) + 1]
    oa, wa = stencil(a, h=h)
    ob, wb = stencil(b, h=h)
    acc = 0.0
    for s, u in zip(oa, wa):
        if u == 0:
            continue
        for t, v in zip(ob, wb):
            if v == 0:
                continue
            acc = acc + u * v * np.asarray(F(xi + s, zeta + t))
    return acc / (factorial(a) * factorial(b))


def _poly(coeffs, x):
    return np.polynomial.polynomial.polyval(x, coeffs)


def seed_funcs(seed):
    """f(xi), its derivative, and the conjugated seed g(zeta), g'(zeta)."""
    comps = seed.components
    ders = [np.polynomial.polynomial.polyder(c) if len(c) > 1 else np.zeros(1) for c in comps]

    def f(x):
        return np.array([_poly(c, x) for c in comps])

    def df(x):
        return np.array([_poly(c, x) for c in ders])

    def g(z):
        return np.array([_poly(np.conj(c), z) for c in comps])

    def dg(z):
        return np.array([_poly(np.conj(c), z) for c in ders])

    return f, df, g, dg


def projectors_direct(seed):
    """P_0 and P_1 as functions of independent (xi, zeta)."""
    f, df, g, dg = seed_funcs(seed)

    def p0(x, z):
        u, v = f(x), g(z)
        return np.outer(u, v) / (v @ u)

    def p1(x, z):
        u, v, du, dv = f(x), g(z), df(x), dg(z)
        n = v @ u
        f1 = du - u * (v @ du) / n
        f1d = dv - v * (dv @ u) / n
        return np.outer(f1, f1d) / (f1d @ f1)

    return p0, p1
