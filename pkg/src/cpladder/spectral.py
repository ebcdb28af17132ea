"""Closed-form wave functions of the linear spectral problem and their recurrences.

The wave function attached to rung k of a ladder is

    Phi_k(lam) = I + 4 lam/(1-lam)^2 S_k - 2/(1-lam) P_k,    S_k = P_0 + ... + P_{k-1},

with inverse Phi_k(-lam).  The recurrences act on the auxiliary function
Psi_k = (1-lam)^2 (I - Phi_k) = -4 lam S_k + 2 (1-lam) P_k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DivisionByZeroAtBasePoint,
    InvalidProjectorError,
    RungError,
    SpectralPoleError,
)
from .jets import MatrixJet, matrix_inverse
from .ladder import EPS_END, Projector, commutator, pi_minus, pi_plus

DEFAULT_LAMBDA_PANEL = (2.0, 0.5j, -3 + 1j, 0.1)
POLE_TOL = 1e-14
PROJECTOR_TOL = 1e-8


@dataclass(frozen=True)
class WaveSample:
    matrix: MatrixJet
    lam: complex
    rung: int | None
    kind: str  # "Phi", "PhiInverse" or "Psi"

    @property
    def value(self):
        return self.matrix.value


def _check_rung(ladder, k):
    if not 0 <= k < len(ladder):
        raise RungError(f"rung {k} outside 0..{len(ladder) - 1}")


def _check_pole(lam, at):
    if abs(complex(lam) - at) < POLE_TOL:
        raise SpectralPoleError(f"spectral parameter hits the pole lambda = {at:+g}")


def _lower_sum_and_current(ladder, k):
    order = min(P.order for P in ladder[: k + 1])
    Pk = ladder[k].matrix.truncate(order)
    S = Pk * 0.0
    for P in ladder[:k]:
        S = S + P.matrix.truncate(order)
    return S, Pk


def phi_k(ladder, k, lam):
    _check_rung(ladder, k)
    _check_pole(lam, 1.0)
    S, Pk = _lower_sum_and_current(ladder, k)
    eye = np.eye(Pk.dim)
    M = eye + S * (4 * lam / (1 - lam) ** 2) - Pk * (2 / (1 - lam))
    return WaveSample(M, complex(lam), k, "Phi")


def phi_k_inverse(ladder, k, lam):
    _check_rung(ladder, k)
    _check_pole(lam, -1.0)
    S, Pk = _lower_sum_and_current(ladder, k)
    eye = np.eye(Pk.dim)
    M = eye - S * (4 * lam / (1 + lam) ** 2) - Pk * (2 / (1 + lam))
    return WaveSample(M, complex(lam), k, "PhiInverse")


def dphi_dlambda(ladder, k, lam):
    """Analytic lambda-derivative of Phi_k."""
    _check_rung(ladder, k)
    _check_pole(lam, 1.0)
    S, Pk = _lower_sum_and_current(ladder, k)
    return S * (4 * (1 + lam) / (1 - lam) ** 3) - Pk * (2 / (1 - lam) ** 2)


def psi_k(ladder, k, lam):
    """(1-lam)^2 (I - Phi_k), written pole-free."""
    _check_rung(ladder, k)
    S, Pk = _lower_sum_and_current(ladder, k)
    return WaveSample(S * (-4 * lam) + Pk * (2 * (1 - lam)), complex(lam), k, "Psi")


def psi_from_phi(phi):
    lam = phi.lam
    eye = np.eye(phi.matrix.dim)
    return WaveSample((eye - phi.matrix) * (1 - lam) ** 2, lam, phi.rung, "Psi")


def psi_negate(psi):
    """Psi(-lam) = -(1+lam)^2 Psi(lam) [(1-lam)^2 I - Psi(lam)]^-1."""
    lam = psi.lam
    eye = np.eye(psi.matrix.dim)
    bracket = psi.matrix * -1.0 + eye * (1 - lam) ** 2
    try:
        inv = matrix_inverse(bracket)
    except DivisionByZeroAtBasePoint as exc:
        raise SpectralPoleError(f"(1-lam)^2 I - Psi is singular at lam={lam}: {exc}") from None
    return WaveSample((psi.matrix @ inv) * -((1 + lam) ** 2), -lam, psi.rung, "Psi")


def recovered_projector(psi, psi_neg=None):
    """(1/4)[Psi(lam) + Psi(-lam)], checked to be a rank-1 projector."""
    if psi_neg is None:
        psi_neg = psi_negate(psi)
    P = Projector((psi.matrix + psi_neg.matrix) * 0.25, psi.rung)
    bad = {name: v for name, v in P.defects().items() if v > PROJECTOR_TOL}
    if bad:
        raise InvalidProjectorError(f"Psi does not recover a projector: {bad}")
    return P


def _lambda_step(psi, forward, n, eps_end):
    if psi.kind != "Psi":
        raise ValueError("Lambda recurrences act on Psi samples")
    if psi.rung is not None and n is not None:
        target = psi.rung + (1 if forward else -1)
        if not 0 <= target < n:
            raise RungError(f"target rung {target} outside 0..{n - 1}")
    lam = psi.lam
    neg = psi_negate(psi)
    P = recovered_projector(psi, neg)
    if forward:
        step = pi_plus(P, eps_end).matrix * (2 * (1 - lam))
        lin = psi.matrix * (0.5 * (1 - lam)) - neg.matrix * (0.5 * (1 + lam))
    else:
        step = pi_minus(P, eps_end).matrix * (2 * (1 + lam))
        lin = psi.matrix * (0.5 * (1 + lam)) - neg.matrix * (0.5 * (1 - lam))
    rung = None if psi.rung is None else psi.rung + (1 if forward else -1)
    return WaveSample(lin.truncate(step.order) + step, lam, rung, "Psi")


def lambda_plus(psi, n=None, eps_end=EPS_END):
    """Raise Psi_k to Psi_{k+1}; ``n`` (the dimension) enables the rung range check."""
    return _lambda_step(psi, True, n if n is not None else psi.matrix.dim, eps_end)


def lambda_minus(psi, n=None, eps_end=EPS_END):
    return _lambda_step(psi, False, n if n is not None else psi.matrix.dim, eps_end)


def lax_residual(P, k, lam, ladder):
    """Residuals of d Phi = 2/(1+lam) [dP, P] Phi and dbar Phi = 2/(1-lam) [dbar P, P] Phi."""
    _check_pole(lam, 1.0)
    _check_pole(lam, -1.0)
    M = P.matrix if isinstance(P, Projector) else P
    phi = phi_k(ladder, k, lam).matrix
    order = min(M.order, phi.order)
    M, phi = M.truncate(order), phi.truncate(order)
    d, db = M.derive("xi"), M.derive("xibar")
    M1, phi1 = M.truncate(order - 1), phi.truncate(order - 1)
    r1 = phi.derive("xi") - commutator(d, M1) @ phi1 * (2 / (1 + lam))
    r2 = phi.derive("xibar") - commutator(db, M1) @ phi1 * (2 / (1 - lam))
    return r1, r2


def zero_curvature_residual(P, lam):
    """dbar U - d V + [U, V] for U = 2/(1+lam)[dP,P], V = 2/(1-lam)[dbar P,P]."""
    _check_pole(lam, 1.0)
    _check_pole(lam, -1.0)
    M = P.matrix if isinstance(P, Projector) else P
    d, db = M.derive("xi"), M.derive("xibar")
    M1 = M.truncate(d.order)
    U = commutator(d, M1) * (2 / (1 + lam))
    V = commutator(db, M1) * (2 / (1 - lam))
    return U.derive("xibar") - V.derive("xi") + commutator(U, V).truncate(U.order - 1)
