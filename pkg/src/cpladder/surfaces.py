"""Immersion functions X_k in su(N): three construction routes and the chi recurrences."""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import InconsistentSurfaceError, LadderEndError, RungError
from .jets import MatrixJet
from .ladder import EPS_END, Projector, pi_minus, pi_plus
from .spectral import _check_pole, _check_rung, _lower_sum_and_current, dphi_dlambda, phi_k_inverse

PROJECTOR_TOL = 1e-8


@dataclass(frozen=True)
class Surface:
    matrix: MatrixJet
    rung: int
    dim: int
    standard: bool = True  # False for the top rung k = N-1

    @property
    def value(self):
        return self.matrix.value

    def defects(self):
        X = self.matrix
        tr2 = (X @ X).trace().value
        return {
            "anti_hermiticity": (X.adjoint() + X).max_abs(),
            "tracelessness": float(np.max(np.abs(X.trace().value))),
            "trace_square": float(np.max(np.abs(tr2 - trace_square(self.rung, self.dim)))),
        }


def trace_square(k, n):
    """tr(X_k^2) = (2k+1)^2/N - (4k+1)."""
    return (2 * k + 1) ** 2 / n - (4 * k + 1)


def rung_from_trace(X, tol=1e-8):
    """Rungs compatible with tr(X^2).

    trace_square(k, N) = trace_square(N-1-k, N), so the answer is a pair
    {k, N-1-k} (a single rung in the middle of an odd ladder).
    """
    M = X.matrix if isinstance(X, Surface) else X
    n = M.dim
    tr2 = (M @ M).trace().value.real
    return tuple(k for k in range(n) if np.all(np.abs(trace_square(k, n) - tr2) <= tol))


def _rung_range(ladder, k):
    _check_rung(ladder, k)
    return k <= len(ladder) - 2


def x_k_gy(ladder, k):
    """X_k = -i(P_k + 2 S_k) + i(1+2k)/N I."""
    standard = _rung_range(ladder, k)
    S, Pk = _lower_sum_and_current(ladder, k)
    n = Pk.dim
    X = (Pk + S * 2.0) * -1j + np.eye(n) * (1j * (1 + 2 * k) / n)
    return Surface(X, k, n, standard)


def sym_tafel_alpha(lam):
    """Normalization making alpha Phi^-1 d_lam Phi lambda independent.

    Phi_k^-1 d_lam Phi_k = 2/(1-lam^2) (P_k + 2 S_k), so alpha must cancel that
    factor and supply the -i of the anti-Hermitian immersion.
    """
    return -0.5j * (1 - lam**2)


def x_k_sym_tafel(ladder, k, lam):
    _check_pole(lam, 1.0)
    _check_pole(lam, -1.0)
    standard = _rung_range(ladder, k)
    inv = phi_k_inverse(ladder, k, lam).matrix
    dphi = dphi_dlambda(ladder, k, lam)
    n = inv.dim
    X = (inv @ dphi) * sym_tafel_alpha(lam) + np.eye(n) * (1j * (1 + 2 * k) / n)
    return Surface(X, k, n, standard)


def _lambda_times_at_infinity(num, den):
    """lim lam -> inf of lam * num(lam)/den(lam) for ascending coefficient lists."""
    num = np.trim_zeros(npoly.polymulx(np.asarray(num, dtype=complex)), "b")
    den = np.trim_zeros(np.asarray(den, dtype=complex), "b")
    if len(num) == 0 or len(num) < len(den):
        return 0.0
    if len(num) > len(den):
        raise ArithmeticError("limit diverges")
    return num[-1] / den[-1]


def x_k_limit(ladder, k):
    """X_k = i(2k+1)/N I + (i/2) lim lam (I - Phi_k)."""
    standard = _rung_range(ladder, k)
    S, Pk = _lower_sum_and_current(ladder, k)
    n = Pk.dim
    # I - Phi_k = -4 lam/(1-lam)^2 S + 2/(1-lam) P_k
    one_minus_sq = npoly.polypow([1.0, -1.0], 2)
    s_lim = _lambda_times_at_infinity([0.0, -4.0], one_minus_sq)
    p_lim = _lambda_times_at_infinity([2.0], [1.0, -1.0])
    limit = S * s_lim + Pk * p_lim
    X = limit * 0.5j + np.eye(n) * (1j * (2 * k + 1) / n)
    return Surface(X, k, n, standard)


def projector_from_surface(X, k=None):
    """P_k = X^2 - 2i(c-1) X - c(c-2) I with c = (2k+1)/N."""
    M = X.matrix
    k = X.rung if k is None else k
    n = M.dim
    c = (2 * k + 1) / n
    P = Projector(M @ M + M * (-2j * (c - 1)) + np.eye(n) * (-c * (c - 2)), k)
    bad = {name: v for name, v in P.defects().items() if v > PROJECTOR_TOL}
    if bad:
        raise InconsistentSurfaceError(f"surface does not yield a projector at rung {k}: {bad}")
    return P


def chi_minus(X, eps_end=EPS_END):
    """X_{k-1} = X_k + i[Pi-(P_k) + P_k] - (2i/N) I."""
    if X.rung <= 0:
        raise RungError("chi- needs rung >= 1")
    P = projector_from_surface(X)
    Pm = pi_minus(P, eps_end).matrix
    n = X.dim
    M = X.matrix.truncate(Pm.order) + (Pm + P.matrix.truncate(Pm.order)) * 1j + np.eye(n) * (-2j / n)
    return Surface(M, X.rung - 1, n, True)


def chi_plus(X, eps_end=EPS_END):
    """X_{k+1} = X_k - i[Pi+(P_k) + P_k] + (2i/N) I."""
    if X.rung >= X.dim - 1:
        raise LadderEndError("chi+ applied at the top rung")
    P = projector_from_surface(X)
    Pp = pi_plus(P, eps_end).matrix
    n = X.dim
    M = X.matrix.truncate(Pp.order) - (Pp + P.matrix.truncate(Pp.order)) * 1j + np.eye(n) * (2j / n)
    return Surface(M, X.rung + 1, n, X.rung + 1 <= n - 2)


def projector_from_surface_chain(surfaces, k):
    """P_k = i sum_{j=1..k} (-1)^{k-j}(X_j - X_{j-1}) + (-1)^k i X_0 + I/N."""
    if len(surfaces) < k + 1:
        raise RungError(f"need surfaces X_0..X_{k}, got {len(surfaces)}")
    for j, X in enumerate(surfaces[: k + 1]):
        if X.rung != j:
            raise RungError(f"surface in position {j} has rung {X.rung}")
    order = min(X.matrix.order for X in surfaces[: k + 1])
    Xs = [X.matrix.truncate(order) for X in surfaces[: k + 1]]
    n = Xs[0].dim
    acc = Xs[0] * ((-1) ** k * 1j)
    for j in range(1, k + 1):
        acc = acc + (Xs[j] - Xs[j - 1]) * ((-1) ** (k - j) * 1j)
    return Projector(acc + np.eye(n) / n, k)


# -- coordinates in R^(N^2 - 1) -------------------------------------------------


@dataclass(frozen=True)
class EmbeddingBasis:
    """Generalized Gell-Mann matrices: symmetric, antisymmetric, then diagonal."""

    dim: int
    matrices: tuple

    def gram(self):
        B = np.array(self.matrices)
        return np.real(np.einsum("aij,bji->ab", 1j * B, 1j * B)) * -0.5


def gell_mann_basis(n):
    mats = []
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = m[k, j] = 1
            mats.append(m)
    for j in range(n):
        for k in range(j + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            mats.append(m)
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1
        d[l] = -l
        mats.append(np.diag(d * sqrt(2 / (l * (l + 1)))).astype(complex))
    return EmbeddingBasis(n, tuple(mats))


def _as_array(X):
    if isinstance(X, Surface):
        return X.value
    if isinstance(X, MatrixJet):
        return X.value
    return np.asarray(X, dtype=complex)


def embed_coordinates(X, basis):
    """Real coordinates c_a = (X, i B_a) with (A, B) = -tr(AB)/2."""
    M = _as_array(X)
    B = np.array(basis.matrices)
    return np.real(-0.5 * np.einsum("...ij,aji->...a", M, 1j * B))


def reconstruct(coords, basis):
    B = np.array(basis.matrices)
    return np.einsum("...a,aij->...ij", coords, 1j * B)
