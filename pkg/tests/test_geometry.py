import math

import numpy as np
import pytest

from cpladder.errors import DegenerateMetricError, IntegerSnapError
from cpladder.geometry import (
    GlobalInvariants,
    annulus_willmore,
    curvature_at,
    densities,
    global_invariants,
    global_invariants_all,
    metric_at,
)
from cpladder.ladder import build_ladder
from cpladder.quadrature import sphere_integral
from cpladder.seeds import SeedVector, veronese_seed

from conftest import random_points, random_seed


@pytest.fixture
def cp2(rng):
    pts = random_points(rng, 10)
    return pts, build_ladder(veronese_seed(3), pts, 3)


def test_metric_closed_form(cp2):
    pts, ladder = cp2
    g = 1 / (1 + np.abs(pts) ** 2) ** 2
    for k, c in enumerate((1, 2, 1)):
        m = metric_at(ladder, k)
        assert np.abs(m.g12 - c * g).max() < 1e-12
        assert np.abs(m.g12 - m.g12_entry).max() < 1e-10


def test_metric_at_origin():
    ladder = build_ladder(veronese_seed(3), np.array(0.0), 2)
    assert metric_at(ladder, 0).g12 == pytest.approx(1)
    assert metric_at(ladder, 1).g12 == pytest.approx(2)


def test_conformal_gauge(rng):
    s = random_seed(rng, 4, 3)
    ladder = build_ladder(s, random_points(rng, 20, 1.0), 2)
    for k in range(4):
        m = metric_at(ladder, k)
        for a in (m.J, m.Jbar, m.J_entry, m.Jbar_entry):
            assert np.abs(a).max() < 1e-8
        assert np.all(m.g12 > 0)


def test_curvature_values(cp2):
    pts, ladder = cp2
    for k, (K, H) in enumerate(((2, 16), (1, 4), (2, 16))):
        c = curvature_at(ladder, k)
        assert np.abs(c.gauss_K - K).max() < 1e-8
        assert np.abs(c.H_norm_sq - H).max() < 1e-8
        gam = -2 * np.conj(pts) / (1 + np.abs(pts) ** 2)
        assert np.abs(c.christoffel_111 - gam).max() < 1e-12
        assert np.abs(c.christoffel_222 - np.conj(c.christoffel_111)).max() < 1e-12


def test_mean_curvature_at_origin():
    ladder = build_ladder(veronese_seed(3), np.array(0.0), 3)
    H = curvature_at(ladder, 0).mean_H
    assert np.abs(H - np.diag([4j, -4j, 0])).max() < 1e-12


def test_second_form_mixed_term(cp2):
    _, ladder = cp2
    c = curvature_at(ladder, 0)
    # dxi dxibar coefficient is g12 * H
    assert np.abs(c.second_form_coeffs[1] - c.g12[:, None, None] * c.mean_H).max() < 1e-12


def test_curvature_order():
    ladder = build_ladder(veronese_seed(3), np.array(0.1), 2)
    with pytest.raises(ValueError):
        curvature_at(ladder, 0)


def test_degenerate_metric():
    # (1, xi^2) branches at xi = 0: the induced metric vanishes like |xi|^2
    ladder = build_ladder(SeedVector(((1,), (0, 0, 1))), np.array(3e-7), 3)
    with pytest.raises(DegenerateMetricError):
        curvature_at(ladder, 0)


def test_snapping():
    inv = GlobalInvariants(0, 1.0, 2.00001, 1.9, 1.9)
    assert inv.charge_int == 2
    with pytest.raises(IntegerSnapError):
        inv.euler_int


def test_cp1_gauss_bonnet():
    s = veronese_seed(2)
    # K g12 / pi, from the curvature samples
    v, e = sphere_integral(lambda p: densities(s, p, [0])[:, 3], 1e-8)
    assert abs(v - 2) < 1e-6
    inv = global_invariants(s, 0, 1e-8)
    assert inv.charge_int == 1 and inv.euler_int == 2


def test_veronese_invariants():
    out = global_invariants_all(veronese_seed(3), tol=1e-6)
    assert [i.charge_int for i in out] == [2, 0, -2]
    assert [i.euler_int for i in out] == [2, 2, 2]
    assert abs(out[0].willmore - 4 * math.pi) < 1e-5
    assert abs(out[2].willmore - 4 * math.pi) < 1e-5
    # |H_1|^2 g_1 = (1/4)|H_0|^2 * 2 g_0
    assert abs(out[1].willmore - 2 * math.pi) < 1e-5
    for i in out:
        assert abs(i.euler - i.euler_gauss_bonnet) < 1e-5


def test_chart_consistency():
    for k in range(3):
        a, b = annulus_willmore(veronese_seed(3), k, 1e-9)
        assert abs(a - b) < 1e-6
