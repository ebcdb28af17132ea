"""Rank-1 projector ladder: Gram-Schmidt construction and the invariant Pi+/- recurrences."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSeedError,
    DivisionByZeroAtBasePoint,
    InvalidProjectorError,
    LadderEndError,
    ZeroVectorError,
)
from .jets import DEFAULT_ORDER, Jet, MatrixJet, jet_reciprocal
from .seeds import normalize_common_factor, seed_vector_jet

EPS_END = 1e-12


@dataclass(frozen=True)
class Projector:
    """Hermitian idempotent matrix jet of rank one, tagged with its rung."""

    matrix: MatrixJet
    rung: int | None = None

    @property
    def dim(self):
        return self.matrix.dim

    @property
    def order(self):
        return self.matrix.order

    @property
    def value(self):
        return self.matrix.value

    def truncate(self, order):
        return Projector(self.matrix.truncate(order), self.rung)

    def defects(self):
        """Max violations of P P = P (all coefficients), P^dag = P and tr P = 1."""
        P = self.matrix
        return {
            "idempotency": (P @ P - P).max_abs(),
            "hermiticity": (P.adjoint() - P).max_abs(),
            "unit_trace": float(np.max(np.abs(P.trace().value - 1.0))),
        }


def _as_column(f):
    if isinstance(f, MatrixJet):
        return f
    return MatrixJet.from_entries([[fj] for fj in f])


def commutator(A, B):
    return A @ B - B @ A


def _norm_sq(f):
    return (f.adjoint() @ f).entry(0, 0)


def projector_from_vector(f, rung=None):
    """f f^dag / (f^dag f) in jet arithmetic; ``f`` is a column jet or a list of jets."""
    f = _as_column(f)
    norm = _norm_sq(f)
    scale = np.max(np.abs(f.coeffs) ** 2, axis=(0, -2, -1)) * f.shape[0]
    if np.any(norm.value.real <= 1e-26 * scale) or np.any(scale == 0):
        raise ZeroVectorError("vector vanishes at the base point")
    return Projector((f @ f.adjoint()) * jet_reciprocal(norm), rung)


def _p_step(f, which):
    f = _as_column(f)
    P = projector_from_vector(f).matrix
    df = f.derive(which)
    return df - P.truncate(df.order) @ df


def p_plus(f):
    """(I - P) d f: the classical creation step on homogeneous vectors."""
    return _p_step(f, "xi")


def p_minus(f):
    """(I - P) dbar f."""
    return _p_step(f, "xibar")


def build_ladder(seed, base, order=DEFAULT_ORDER, normalize=True):
    """Projectors P_0 .. P_{N-1} generated by the holomorphic seed at ``base``.

    For a holomorphic seed, N-fold application of ``p_plus`` spans the same
    flag as f, df, d^2 f, ...; each f_k is therefore computed as the part of
    d^k f orthogonal to the previous rungs, which keeps full jet order on
    every rung.
    """
    if normalize:
        seed = normalize_common_factor(seed)
    n = seed.dim
    f = seed_vector_jet(seed, base, order + n - 1)
    ladder = []
    dk = f
    for k in range(n):
        v = dk.truncate(order)
        for P in ladder:
            v = v - P.matrix @ v
        ref = np.sum(np.abs(dk.value) ** 2, axis=(-2, -1))
        got = np.sum(np.abs(v.value) ** 2, axis=(-2, -1))
        if np.any(got <= 1e-20 * np.maximum(ref, 1e-300)):
            raise DegenerateSeedError(f"ladder collapses at rung {k}", rung=k)
        try:
            ladder.append(projector_from_vector(v, rung=k))
        except (ZeroVectorError, DivisionByZeroAtBasePoint):
            raise DegenerateSeedError(f"ladder collapses at rung {k}", rung=k) from None
        if k < n - 1:
            dk = dk.derive("xi")
    return ladder


def _pi_parts(P, forward):
    M = P.matrix
    d = M.derive("xi" if forward else "xibar")
    db = M.derive("xibar" if forward else "xi")
    return M.truncate(d.order), d, db


def _pi(P, forward, eps_end):
    M, d, db = _pi_parts(P, forward)
    num = d @ M @ db
    den = num.trace()
    scale = np.abs((d @ db).trace().value)
    if np.any(np.abs(den.value) <= eps_end * scale) or np.any(scale == 0):
        raise LadderEndError(
            "indeterminate 0/0: Pi%s applied at the end of the ladder" % ("+" if forward else "-")
        )
    rung = None if P.rung is None else P.rung + (1 if forward else -1)
    return Projector(num * jet_reciprocal(den), rung)


def pi_plus(P, eps_end=EPS_END):
    """d P . P . dbar P / tr(d P . P . dbar P)."""
    return _pi(P, True, eps_end)


def pi_minus(P, eps_end=EPS_END):
    """dbar P . P . d P / tr(dbar P . P . d P)."""
    return _pi(P, False, eps_end)


def pi_forms(P, forward=True, eps_end=EPS_END):
    """All three algebraically equal forms of Pi+ (or Pi-) as matrix jets."""
    M, d, db = _pi_parts(P, forward)
    den = (d @ M @ db).trace()
    if np.any(np.abs(den.value) <= eps_end * np.abs((d @ db).trace().value)):
        raise LadderEndError("indeterminate 0/0 at the end of the ladder")
    inv = jet_reciprocal(den)
    eye = np.eye(M.dim)
    return [
        (d @ M @ db) * inv,
        ((eye - M) @ d @ db) * inv,
        (d @ db @ (eye - M)) * inv,
    ]


def pi_form_deviation(P, forward=True):
    forms = pi_forms(P, forward)
    return max((a - b).max_abs() for i, a in enumerate(forms) for b in forms[i + 1 :])


def pivot_index(P):
    """Index of the largest diagonal entry of the base value, per batch point."""
    diag = np.abs(np.diagonal(P.value, axis1=-2, axis2=-1))
    if np.any(np.max(diag, axis=-1) < 1e-12):
        raise InvalidProjectorError("all diagonal entries vanish")
    return np.argmax(diag, axis=-1)


def extract_vector(P):
    """Column of P at the largest diagonal pivot; reproduces P via projector_from_vector."""
    M = P.matrix if isinstance(P, Projector) else P
    c = pivot_index(M)
    idx = np.broadcast_to(c[None, ..., None, None], M.coeffs.shape[:-1] + (1,))
    return MatrixJet(np.take_along_axis(M.coeffs, idx, axis=-1), M.base, M.order)


def pivot_entry(M, c):
    """Entry (c, c) of a matrix jet with a per-point pivot ``c``."""
    diag = np.diagonal(M.coeffs, axis1=-2, axis2=-1)
    idx = np.broadcast_to(np.asarray(c)[None, ..., None], diag.shape[:-1] + (1,))
    return Jet(np.take_along_axis(diag, idx, axis=-1)[..., 0], M.base, M.order)


def el_residual(P):
    """d[dbar P, P] + dbar[d P, P]; vanishes for solutions of the field equations."""
    M = P.matrix if isinstance(P, Projector) else P
    if M.order < 2:
        raise ValueError("E-L residual needs jet order >= 2")
    d, db = M.derive("xi"), M.derive("xibar")
    M1 = M.truncate(d.order)
    return commutator(db, M1).derive("xi") + commutator(d, M1).derive("xibar")


def ladder_from_pi_plus(P0, steps):
    """P_0, Pi+(P_0), Pi+^2(P_0), ... (``steps`` applications)."""
    out = [P0]
    for _ in range(steps):
        out.append(pi_plus(out[-1]))
    return out


def p_plus_ladder(seed, base, order=DEFAULT_ORDER):
    """Projectors from repeated ``p_plus`` on the seed (loses one order per rung)."""
    n = seed.dim
    f = seed_vector_jet(seed, base, order + n - 1)
    out = []
    for k in range(n):
        out.append(projector_from_vector(f, rung=k).truncate(order))
        if k < n - 1:
            f = p_plus(f)
    return out
