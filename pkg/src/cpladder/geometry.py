"""Metric, curvatures and global invariants of the surfaces X_k, written through projectors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateMetricError, IntegerSnapError
from .jets import jet_reciprocal
from .ladder import build_ladder, pivot_entry, pivot_index
from .quadrature import adaptive_polar, sphere_integral
from .surfaces import x_k_gy

QUAD_TOL = 1e-8
SNAP_TOL = 1e-4
INTEGRAL_ORDER = 3


@dataclass(frozen=True)
class MetricSample:
    point: np.ndarray
    rung: int
    g12: np.ndarray
    g12_entry: np.ndarray
    J: np.ndarray
    Jbar: np.ndarray
    J_entry: np.ndarray
    Jbar_entry: np.ndarray


@dataclass(frozen=True)
class CurvatureSample:
    point: np.ndarray
    rung: int
    g12: np.ndarray
    gauss_K: np.ndarray
    mean_H: np.ndarray
    H_norm_sq: np.ndarray
    christoffel_111: np.ndarray
    christoffel_222: np.ndarray
    second_form_coeffs: tuple


@dataclass(frozen=True)
class GlobalInvariants:
    rung: int
    willmore: float
    charge: float
    euler: float
    euler_gauss_bonnet: float
    quadrature_error: dict = field(default_factory=dict)

    @property
    def charge_int(self):
        return _snap(self.charge, "topological charge")

    @property
    def euler_int(self):
        return _snap(self.euler, "Euler-Poincare characteristic")


def _snap(x, what, tol=SNAP_TOL):
    n = round(x)
    if abs(x - n) > tol:
        raise IntegerSnapError(f"{what} {x!r} is not within {tol} of an integer")
    return int(n)


def _surface_parts(ladder, k):
    X = x_k_gy(ladder, k).matrix
    return X, X.derive("xi"), X.derive("xibar")


def metric_jet(ladder, k):
    """g12 = -tr(dX dbar X)/2 as a jet (order drops by one)."""
    _, dX, dbX = _surface_parts(ladder, k)
    return (dX @ dbX).trace() * -0.5


def metric_at(ladder, k):
    """Induced metric and holomorphic currents of X_k at the ladder's base points.

    ``g12_entry`` is the pivoted projector-entry route
    ([dbar P dP P]_cc + [dP dbar P P]_cc) / (2 P_cc).
    """
    P = ladder[k].matrix
    X, dX, dbX = _surface_parts(ladder, k)
    g = (dX @ dbX).trace().value * -0.5
    J = (dX @ dX).trace().value * -0.5
    Jbar = (dbX @ dbX).trace().value * -0.5
    d, db = P.derive("xi"), P.derive("xibar")
    P1 = P.truncate(d.order)
    c = pivot_index(P)
    pcc = pivot_entry(P, c).value
    g_entry = 0.5 * (pivot_entry(db @ d @ P1, c).value + pivot_entry(d @ db @ P1, c).value) / pcc
    J_entry = pivot_entry(d @ d @ P1, c).value / pcc
    Jbar_entry = pivot_entry(db @ db @ P1, c).value / pcc
    return MetricSample(P.base, k, g.real, g_entry.real, J, Jbar, J_entry, Jbar_entry)


def curvature_at(ladder, k):
    P = ladder[k].matrix
    if P.order < 3:
        raise ValueError("curvature needs jet order >= 3")
    X, dX, dbX = _surface_parts(ladder, k)
    g = (dX @ dbX).trace() * -0.5
    if np.any(g.value.real < 1e-12):
        raise DegenerateMetricError(f"metric of X_{k} degenerates (g12 < 1e-12)")
    inv_g = jet_reciprocal(g)
    gam1 = g.derive("xi") * inv_g
    gam2 = g.derive("xibar") * inv_g
    ddlog = gam1.derive("xibar")
    K = -(ddlog.value / g.value).real
    ddX = dX.derive("xibar")
    H = ddX * (inv_g * 2.0)
    Hv = H.value
    Hsq = (np.trace(Hv @ Hv, axis1=-2, axis2=-1) * -0.5).real
    d2X, db2X = dX.derive("xi"), dbX.derive("xibar")
    o = d2X.order
    second = (
        (d2X - dX.truncate(o) * gam1.truncate(o)).value,
        (ddX * 2.0).value,
        (db2X - dbX.truncate(o) * gam2.truncate(o)).value,
    )
    return CurvatureSample(
        P.base, k, g.value.real, K, Hv, Hsq, gam1.value, gam2.value, second
    )


def charge_density(ladder, k):
    """-(1/pi) tr(P [dP, dbar P]) at the base points."""
    P = ladder[k].matrix
    d, db = P.derive("xi"), P.derive("xibar")
    t = (P.truncate(d.order) @ (d @ db - db @ d)).trace().value
    return -(t.real) / math.pi


def densities(seed, points, rungs, order=INTEGRAL_ORDER):
    """Willmore, charge, Euler and Gauss-Bonnet densities per rung.

    Returns shape ``(npts, 4 * len(rungs))``; each is a 2-form density with
    respect to dxi1 dxi2, so it transforms trivially between charts.
    """
    points = np.asarray(points, dtype=complex)
    ladder = build_ladder(seed, points, order)
    cols = []
    for k in rungs:
        cs = curvature_at(ladder, k)
        g = metric_jet(ladder, k)
        ddlog = (g.derive("xi") * jet_reciprocal(g)).derive("xibar").value.real
        cols += [
            0.25 * cs.H_norm_sq * cs.g12,
            charge_density(ladder, k),
            -ddlog / math.pi,
            cs.gauss_K * cs.g12 / math.pi,
        ]
    return np.stack(cols, axis=-1)


def global_invariants_all(seed, rungs=None, tol=QUAD_TOL, order=INTEGRAL_ORDER):
    """W, Q, Delta (and the Gauss-Bonnet Delta) for several rungs in one quadrature."""
    rungs = list(range(seed.dim)) if rungs is None else list(rungs)
    inverted = seed.inverted()
    value, error = sphere_integral(
        lambda p: densities(seed, p, rungs, order),
        tol,
        outer=lambda p: densities(inverted, p, rungs, order),
    )
    value, error = np.atleast_1d(value), np.atleast_1d(error)
    out = []
    for i, k in enumerate(rungs):
        v, e = value[4 * i : 4 * i + 4], error[4 * i : 4 * i + 4]
        out.append(
            GlobalInvariants(
                rung=k,
                willmore=float(v[0]),
                charge=float(v[1]),
                euler=float(v[2]),
                euler_gauss_bonnet=float(v[3]),
                quadrature_error={
                    "willmore": float(e[0]),
                    "charge": float(e[1]),
                    "euler": float(e[2]),
                    "euler_gauss_bonnet": float(e[3]),
                },
            )
        )
    return out


def global_invariants(seed, k, tol=QUAD_TOL, order=INTEGRAL_ORDER):
    return global_invariants_all(seed, [k], tol, order)[0]


def annulus_willmore(seed, k, tol=QUAD_TOL, r_inner=0.5, order=INTEGRAL_ORDER):
    """Willmore density integrated over r_inner <= |xi| <= 1 in both charts.

    The inverted chart covers the same annulus as 1 <= |eta| <= 1/r_inner.
    """
    inverted = seed.inverted()
    a, _ = adaptive_polar(lambda p: densities(seed, p, [k], order)[:, 0], tol, (r_inner, 1.0))
    b, _ = adaptive_polar(lambda p: densities(inverted, p, [k], order)[:, 0], tol, (1.0, 1.0 / r_inner))
    return float(a[0]), float(b[0])
