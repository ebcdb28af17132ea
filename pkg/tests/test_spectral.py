import numpy as np
import pytest

from cpladder.errors import RungError, SpectralPoleError
from cpladder.jets import MatrixJet
from cpladder.ladder import Projector, build_ladder, el_residual
from cpladder.seeds import veronese_seed
from cpladder.spectral import (
    WaveSample,
    lambda_minus,
    lambda_plus,
    lax_residual,
    phi_k,
    phi_k_inverse,
    psi_from_phi,
    psi_k,
    psi_negate,
    recovered_projector,
    zero_curvature_residual,
)

from conftest import random_points, random_seed
from fixtures import psi0_cp3, psi1_cp3

PANEL = (2.0, 0.5j, -3 + 1j)


@pytest.fixture
def cp3(rng):
    pts = random_points(rng, 6)
    return pts, build_ladder(veronese_seed(4), pts, 3)


def test_phi0_empty_sum(cp3):
    pts, ladder = cp3
    lam = 2.0
    phi = phi_k(ladder, 0, lam).matrix
    assert (phi - (np.eye(4) - ladder[0].matrix * (2 / (1 - lam)))).max_abs() == 0


def test_psi0_closed_form(cp3):
    pts, ladder = cp3
    for lam in PANEL:
        ref = np.array([psi0_cp3(x, lam) for x in pts])
        assert np.abs(psi_k(ladder, 0, lam).value - ref).max() < 1e-12
        assert (psi_from_phi(phi_k(ladder, 0, lam)).matrix - psi_k(ladder, 0, lam).matrix).max_abs() < 1e-12


def test_phi_inverse(cp3):
    _, ladder = cp3
    for k in range(4):
        for lam in PANEL:
            prod = phi_k(ladder, k, lam).matrix @ phi_k(ladder, k, -lam).matrix
            assert (prod - np.eye(4)).max_abs() < 1e-10
            assert (phi_k(ladder, k, -lam).matrix - phi_k_inverse(ladder, k, lam).matrix).max_abs() == 0


def test_psi_negate_rank_one(cp3):
    _, ladder = cp3
    lam = 0.5j
    neg = psi_negate(psi_k(ladder, 0, lam))
    assert (neg.matrix - ladder[0].matrix * (2 * (1 + lam))).max_abs() < 1e-12
    back = psi_negate(neg)
    assert (back.matrix - psi_k(ladder, 0, lam).matrix).max_abs() < 1e-10


def test_psi_negate_vs_closed_form(cp3):
    _, ladder = cp3
    for k in range(4):
        for lam in PANEL:
            neg = psi_negate(psi_k(ladder, k, lam))
            assert (neg.matrix - psi_k(ladder, k, -lam).matrix).max_abs() < 1e-10


def test_psi_sum_rule(cp3):
    _, ladder = cp3
    for k in range(4):
        for lam in PANEL:
            P = recovered_projector(psi_k(ladder, k, lam))
            assert (P.matrix - ladder[k].matrix).max_abs() < 1e-10


def test_lambda_plus_example(cp3):
    pts, ladder = cp3
    for lam in PANEL:
        got = lambda_plus(psi_k(ladder, 0, lam)).value
        ref = np.array([psi1_cp3(x, lam) for x in pts])
        assert np.abs(got - ref).max() < 1e-9
        r = np.abs(pts) ** 2
        e11 = -2 * (3 * (lam - 1) * r + 2 * lam) / (r + 1) ** 3
        assert np.abs(got[:, 0, 0] - e11).max() < 1e-9


def test_lambda_round_trips(cp3):
    _, ladder = cp3
    for lam in PANEL:
        for k in range(3):
            up = lambda_plus(psi_k(ladder, k, lam))
            assert (up.matrix - psi_k(ladder, k + 1, lam).matrix.truncate(up.matrix.order)).max_abs() < 1e-9
            down = lambda_minus(up)
            assert (down.matrix - psi_k(ladder, k, lam).matrix.truncate(down.matrix.order)).max_abs() < 1e-9


def test_lambda_range(cp3):
    _, ladder = cp3
    with pytest.raises(RungError):
        lambda_plus(psi_k(ladder, 3, 2.0))
    with pytest.raises(RungError):
        lambda_minus(psi_k(ladder, 0, 2.0))


def test_pole():
    ladder = build_ladder(veronese_seed(3), np.array(0.3), 2)
    with pytest.raises(SpectralPoleError):
        phi_k(ladder, 1, 1.0)
    with pytest.raises(SpectralPoleError):
        lax_residual(ladder[1], 1, -1.0, ladder)


def test_lax_residual_example():
    ladder = build_ladder(veronese_seed(3), np.array(0.3 + 0.7j), 3)
    r1, r2 = lax_residual(ladder[1], 1, 2.0, ladder)
    assert max(r1.max_abs(), r2.max_abs()) < 1e-8


def test_lax_residual_all(rng):
    s = random_seed(rng, 4, 3)
    ladder = build_ladder(s, random_points(rng, 4, 1.0), 3)
    for k in range(4):
        for lam in PANEL:
            r1, r2 = lax_residual(ladder[k], k, lam, ladder)
            assert max(r1.max_abs(), r2.max_abs()) < 1e-8


def test_lax_constant_projector():
    P = Projector(MatrixJet.constant(np.diag([1.0, 0]), 0.0, 2), 0)
    r1, r2 = lax_residual(P, 0, 2.0, [P, Projector(MatrixJet.constant(np.diag([0, 1.0]), 0.0, 2), 1)])
    assert r1.max_abs() == 0 and r2.max_abs() == 0


def test_lax_perturbed():
    # a constant rescaling of Phi leaves the linear problem solved, so perturb by (1 + 1e-3 xi)
    ladder = build_ladder(veronese_seed(3), np.array(0.3 + 0.7j), 3)
    lam = 2.0
    w = MatrixJet.identity(3, ladder[1].matrix.base, 3)
    w.coeffs[1] = 1e-3 * np.eye(3)
    M = ladder[1].matrix
    d = M.derive("xi")
    U = (d @ M.truncate(2) - M.truncate(2) @ d) * (2 / (1 + lam))
    bad = w @ phi_k(ladder, 1, lam).matrix
    r = bad.derive("xi") - U @ bad.truncate(2)
    assert r.max_abs() > 1e-5


def test_zero_curvature_matches_el(rng):
    ladder = build_ladder(veronese_seed(3), random_points(rng, 4), 4)
    for P in ladder:
        assert zero_curvature_residual(P, 2.0).max_abs() < 1e-7
        assert el_residual(P).max_abs() < 1e-7


def test_wave_sample_kind(cp3):
    _, ladder = cp3
    with pytest.raises(ValueError):
        lambda_plus(WaveSample(phi_k(ladder, 0, 2.0).matrix, 2.0, 0, "Phi"))
