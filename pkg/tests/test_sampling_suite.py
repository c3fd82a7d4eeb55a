import itertools
import math

import numpy as np
import pytest

from dhvol.minkowski import minkowski_dot
from dhvol.polytope import empty_interior, ideal_vertices
from dhvol.sampling import (
    cut_directions, lune, m_cut, m_cut_value, random_lune, random_polytope, well_separated,
)
from dhvol.suite import CHECKS, run_suite
from dhvol.volume import closed_form_v2, sphere_volume


@pytest.mark.parametrize("seed", range(5))
def test_random_polytope_admissible(seed):
    P = random_polytope(seed, 3, 4)
    assert not empty_interior(P) and not ideal_vertices(P) and well_separated(P)


def test_random_polytope_deterministic():
    assert np.array_equal(random_polytope(9, 2, 3).normals, random_polytope(9, 2, 3).normals)


def test_lune_closed_form():
    assert closed_form_v2(lune(2, 1.1)) == pytest.approx(-2.2)
    P, theta = random_lune(3, 2)
    assert closed_form_v2(P) == pytest.approx(-2 * theta)
    with pytest.raises(ValueError):
        lune(1, 0.5)


@pytest.mark.parametrize("n,m", [(2, 3), (2, 5), (3, 3), (3, 4), (3, 6), (4, 5)])
def test_cut_directions_are_unit(n, m):
    D = cut_directions(n, m)
    assert D.shape == (m, n)
    assert np.allclose(np.linalg.norm(D, axis=1), 1.0)


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (3, 5)])
def test_m_cut_disjoint(n, m):
    P = m_cut(n, m)
    for a, b in itertools.combinations(P.normals, 2):
        assert minkowski_dot(a, b) < -1


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_m_cut_2d_closed_form(m):
    assert abs(closed_form_v2(m_cut(2, m))) == pytest.approx(m_cut_value(2, m), abs=1e-10)


def test_m_cut_value():
    assert m_cut_value(3, 4) == pytest.approx(sphere_volume(3))
    assert m_cut_value(2, 2) == 0
    with pytest.raises(ValueError):
        m_cut(2, 0)
    with pytest.raises(ValueError):
        cut_directions(3, 7)


def test_suite_default_passes():
    rows = run_suite(0)
    assert {r.check for r in rows} == set(CHECKS)
    assert all(r.passed for r in rows), [r for r in rows if not r.passed]


def test_suite_only():
    rows = run_suite(1, only="mobius")
    assert rows and all(r.check == "mobius" and r.passed for r in rows)
    with pytest.raises(ValueError):
        run_suite(0, only="nope")
