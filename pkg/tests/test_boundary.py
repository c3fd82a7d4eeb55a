import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dhvol.boundary import (
    MobiusMap, NormalizationConstant, Special, boundary_from_caps, boundary_from_disks,
    boundary_polygon_data, c2m, classify_special, mobius_check, transform_boundary, v_infty,
    v_infty_2_closed, v_infty_2_polygon, v_infty_special,
)
from dhvol.polytope import Polytope, restrict_to_boundary
from dhvol.suite import random_disklike
from dhvol.volume import total_volume

SQUARE = [((1.0, 0.0), -1.0), ((-1.0, 0.0), -1.0), ((0.0, 1.0), -1.0), ((0.0, -1.0), -1.0)]


def _nu(w):
    w = np.asarray(w, float)
    s = w @ w
    return np.concatenate(([4 + s], 4 * w, [4 - s]))


def test_c2():
    assert c2m(1) == pytest.approx(2 / (math.pi * 1j))
    assert NormalizationConstant(2).c2m == pytest.approx(total_volume(4) / total_volume(5))
    with pytest.raises(ValueError):
        NormalizationConstant(0)


def test_polygon_formula_examples():
    assert v_infty_2_polygon(3, [math.pi] * 3) == pytest.approx(-2 * math.pi)
    a, b, c = 0.4, 0.9, 1.3
    assert v_infty_2_polygon(3, [a, b, c]) == pytest.approx(math.pi - a - b - c)
    assert v_infty_2_polygon(4, [0.0, math.pi, math.pi, 0.0]) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        v_infty_2_polygon(1, [math.pi])
    with pytest.raises(ValueError):
        v_infty_2_polygon(3, [1.0])


@pytest.mark.parametrize("G", [
    boundary_from_disks([((0.3, -0.2), 0.7, True)]),
    boundary_from_disks([((0.3, -0.2), 0.7, False)]),
    boundary_from_disks([], [((1.0, 2.0), 0.5)]),
])
def test_every_ball_is_minus_two_pi(G):
    assert v_infty_2_closed(G) == pytest.approx(-2 * math.pi)


def test_whole_and_empty():
    assert v_infty_2_closed(restrict_to_boundary(Polytope(3, ()))) == pytest.approx(-4 * math.pi)
    G = boundary_from_disks([((0.0, 0.0), 1.0, True), ((5.0, 0.0), 1.0, True)])
    assert v_infty_2_closed(G) == 0.0


def test_lens():
    # unit disks at distance 1 meet at angle 2 pi / 3 inside the lens
    G = boundary_from_disks([((0.0, 0.0), 1.0, True), ((1.0, 0.0), 1.0, True)])
    cycles = boundary_polygon_data(G)
    assert len(cycles) == 1 and len(cycles[0]) == 2
    assert all(t == pytest.approx(2 * math.pi / 3) for _, t in cycles[0])
    assert v_infty_2_closed(G) == pytest.approx(v_infty_2_polygon(2, [2 * math.pi / 3] * 2))


def test_countable_additivity_fails_k3():
    centers = [(-0.5, -0.5), (0.5, -0.5), (0.0, 0.5)]
    disks = [boundary_from_disks([(c, 0.3, True)]) for c in centers]
    total = sum(v_infty_2_closed(G) for G in disks)
    square = boundary_from_disks([], SQUARE)
    rest = boundary_from_disks([(c, 0.3, False) for c in centers], SQUARE)
    assert total == pytest.approx(-6 * math.pi)
    assert v_infty_2_closed(square) == pytest.approx(0.0, abs=1e-12)
    assert v_infty_2_closed(rest) == pytest.approx(6 * math.pi)
    assert v_infty_2_closed(rest) + total == pytest.approx(v_infty_2_closed(square), abs=1e-12)


@given(st.integers(0, 10 ** 6))
def test_mobius_lift_matches_point_map(seed):
    f = MobiusMap.random(seed, 2, inversions=2)
    L = f.lorentz()
    assert L.defect() < 1e-8 * max(1.0, np.max(np.abs(L.matrix)) ** 2)
    w = np.random.default_rng(seed).normal(size=2)
    a, b = L.matrix @ _nu(w), _nu(f(w))
    assert np.allclose(a / a[0], b / b[0], rtol=1e-7, atol=1e-7)


def test_inversion_point_map():
    f = MobiusMap.inversion([0.0, 0.0], 2.0)
    assert np.allclose(f([1.0, 0.0]), [4.0, 0.0])
    assert np.allclose(f([0.0, 4.0]), [0.0, 1.0])
    with pytest.raises(ValueError):
        MobiusMap.inversion([0.0, 0.0], -1.0)


@given(st.integers(0, 10 ** 6))
def test_closed_form_mobius_invariant(seed):
    G = random_disklike(seed)
    f = MobiusMap.random(seed + 1, 2, inversions=2)
    assert mobius_check(G, f, method="closed_form") < 1e-8


def test_identity_map():
    G = random_disklike(4)
    assert mobius_check(G, MobiusMap.identity(), method="closed_form") == 0.0


def test_disk_inversion_closed_form():
    G = boundary_from_disks([((0.5, 0.1), 0.8, True)])
    H = transform_boundary(G, MobiusMap.inversion([0.5, 0.4], 1.0))
    assert abs(v_infty_2_closed(G) - v_infty_2_closed(H)) < 1e-6


def test_spherical_octant():
    G = boundary_from_caps([((1, 0, 0), 0.0), ((0, 1, 0), 0.0), ((0, 0, 1), 0.0)])
    assert classify_special(G) is Special.SPHERICAL
    assert v_infty_special(G) == pytest.approx(-math.pi / 2)
    assert v_infty_2_closed(G) == pytest.approx(-math.pi / 2)


def test_euclidean_square():
    G = boundary_from_disks([], SQUARE)
    assert classify_special(G) is Special.EUCLIDEAN
    assert v_infty_special(G) == 0.0


def test_double_hyperbolic_family():
    # two caps whose boundary circles are perpendicular to the equator z = 0
    G = boundary_from_caps([((1, 0, 0), 0.3), ((-0.6, 0.8, 0), 0.2)])
    assert classify_special(G) is Special.DOUBLE_HYPERBOLIC
    assert v_infty_special(G) == pytest.approx(v_infty_2_closed(G), abs=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_two_circles_always_double_hyperbolic(seed):
    # any two circles have a common perpendicular circle
    G = random_disklike(seed)
    assert classify_special(G) is Special.DOUBLE_HYPERBOLIC
    assert v_infty_special(G) == pytest.approx(v_infty_2_closed(G), abs=1e-9)


def test_generic_classification():
    G = boundary_from_disks([((0.0, 0.0), 1.0, True), ((1.0, 0.2), 0.9, True), ((0.3, 0.8), 0.7, True)])
    assert classify_special(G) is Special.GENERIC


@pytest.mark.slow
def test_v_infty_quadrature_lens():
    G = boundary_from_disks([((0.0, 0.0), 1.0, True), ((1.0, 0.0), 1.0, True)])
    assert v_infty(G) == pytest.approx(-4 * math.pi / 3, abs=1e-3)


def test_v_infty_empty():
    G = boundary_from_disks([((0.0, 0.0), 1.0, True), ((5.0, 0.0), 1.0, True)])
    assert v_infty(G) == 0.0
