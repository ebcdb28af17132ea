"""Adaptive tensor Gauss-Legendre quadrature over the Riemann sphere.

The sphere is covered by two stereographic charts: the unit disc |xi| <= 1
and its image under xi -> 1/xi.  Each chart is integrated in polar
coordinates over [0, 1] x [0, 2 pi] by refining the cells whose low/high
order Gauss-Legendre estimates disagree most.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import QuadratureError

LOW, HIGH = 7, 14
MAX_CELLS = 40000
MAX_ROUNDS = 40


def _eval_cells(density, cells, n):
    """Tensor rule of size n on every cell; returns (ncells, ncomp)."""
    x, w = np.polynomial.legendre.leggauss(n)
    r0, r1, t0, t1 = cells.T
    hr, ht = (r1 - r0) / 2, (t1 - t0) / 2
    r = (r0 + r1)[:, None] / 2 + hr[:, None] * x[None, :]
    t = (t0 + t1)[:, None] / 2 + ht[:, None] * x[None, :]
    pts = r[:, :, None] * np.exp(1j * t[:, None, :])
    vals = np.asarray(density(pts.ravel()), dtype=float)
    wts = (w[:, None] * w[None, :])[None] * (hr * ht)[:, None, None] * r[:, :, None]
    vals = vals.reshape(pts.shape + (-1,))
    return np.einsum("cij,cijk->ck", wts, vals)


def _split(cells):
    r0, r1, t0, t1 = cells.T
    rm, tm = (r0 + r1) / 2, (t0 + t1) / 2
    out = [
        np.stack([r0, rm, t0, tm], axis=1),
        np.stack([r0, rm, tm, t1], axis=1),
        np.stack([rm, r1, t0, tm], axis=1),
        np.stack([rm, r1, tm, t1], axis=1),
    ]
    return np.concatenate(out)


def adaptive_polar(density, tol, r_range=(0.0, 1.0), n_r=2, n_t=4):
    """Integrate ``density(xi) dxi1 dxi2`` over an annulus r_range in polar cells.

    ``density`` maps a 1-D complex array of points to an array of shape
    ``(npts,)`` or ``(npts, ncomp)``.  Returns ``(values, errors)`` arrays of
    length ncomp.
    """
    rs = np.linspace(r_range[0], r_range[1], n_r + 1)
    ts = np.linspace(0.0, 2 * math.pi, n_t + 1)
    cells = np.array([[rs[i], rs[i + 1], ts[j], ts[j + 1]] for i in range(n_r) for j in range(n_t)])
    done_cells, done_val, done_err = [], [], []
    active = cells
    for _ in range(MAX_ROUNDS):
        hi = _eval_cells(density, active, HIGH)
        lo = _eval_cells(density, active, LOW)
        err = np.abs(hi - lo)
        cell_err = err.max(axis=1)
        all_err = np.concatenate(done_err + [err]) if done_err else err
        if all_err.sum(axis=0).max() <= tol:
            done_cells.append(active)
            done_val.append(hi)
            done_err.append(err)
            break
        ncells = sum(len(c) for c in done_cells) + len(active)
        refine = cell_err > tol / (4 * ncells)
        if not refine.any():
            refine[np.argmax(cell_err)] = True
        done_cells.append(active[~refine])
        done_val.append(hi[~refine])
        done_err.append(err[~refine])
        if ncells + 3 * refine.sum() > MAX_CELLS:
            done_cells.append(active[refine])
            done_val.append(hi[refine])
            done_err.append(err[refine])
            value, error = _reduce(done_cells, done_val, done_err)
            raise QuadratureError("cell budget exhausted", value, error)
        active = _split(active[refine])
    else:
        done_cells.append(active)
        done_val.append(hi)
        done_err.append(err)
        value, error = _reduce(done_cells, done_val, done_err)
        raise QuadratureError("no convergence within the refinement budget", value, error)
    return _reduce(done_cells, done_val, done_err)


def _reduce(cells, vals, errs):
    """Order-independent sum: sort cells by corner, then exact fsum per component."""
    cells = np.concatenate(cells)
    vals = np.concatenate(vals)
    errs = np.concatenate(errs)
    order = np.lexsort((cells[:, 2], cells[:, 0]))
    vals, errs = vals[order], errs[order]
    value = np.array([math.fsum(vals[:, k]) for k in range(vals.shape[1])])
    error = np.array([math.fsum(errs[:, k]) for k in range(errs.shape[1])])
    return value, error


def sphere_integral(integrand, tol=1e-10, outer=None):
    """Integral over the Riemann sphere of ``integrand(xi) dxi1 dxi2``.

    ``outer``, if given, is the density already expressed in the chart
    eta = 1/xi (useful when the integrand is a 2-form computed natively in
    that chart); otherwise the inner integrand is pulled back with the
    measure factor |eta|^-4.  Vector-valued integrands return arrays.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if outer is None:

        def outer(eta):
            v = np.asarray(integrand(1.0 / eta))
            m = np.abs(eta) ** -4.0
            return v * m.reshape(m.shape + (1,) * (v.ndim - 1))

    scalar = None
    parts = []
    for f in (integrand, outer):
        def density(p, f=f):
            nonlocal scalar
            v = np.asarray(f(p), dtype=float)
            scalar = v.ndim == 1
            return v

        try:
            parts.append(adaptive_polar(density, tol / 2))
        except QuadratureError as exc:
            done = [v for v, _ in parts]
            value = exc.value + (done[0] if done else 0)
            raise QuadratureError(str(exc), _squeeze(value, scalar), _squeeze(exc.error, scalar)) from None
    value = parts[0][0] + parts[1][0]
    error = parts[0][1] + parts[1][1]
    return _squeeze(value, scalar), _squeeze(error, scalar)


def _squeeze(a, scalar):
    a = np.asarray(a)
    return float(a[0]) if scalar and a.size == 1 else a
