import math

import numpy as np
import pytest

from dhvol.errors import CombinatorialChange, IdealVertexOnPath
from dhvol.polytope import HalfSpace, Polytope
from dhvol.sampling import random_polytope
from dhvol.schlafli import (
    DeformationPath, angle_derivative_radial, angle_derivative_side, count_sign_changes,
    klein_offset_path, lune_path, richardson_derivative, sdf_check, sweep_derivative_t,
    sweep_finite_difference, sweep_integral, sweep_range,
)
from dhvol.volume import mu_u_eps, normalizing_transform


def _normalized(seed, n, m):
    P = random_polytope(seed, n, m, offsets=(-0.5, 0.0))
    return P.transformed(normalizing_transform(P))


def test_richardson_on_sine():
    d = richardson_derivative(math.sin, 0.7, 1e-2)
    assert d == pytest.approx(math.cos(0.7), abs=1e-10)


@pytest.mark.parametrize("top", [True, False])
@pytest.mark.parametrize("r,c,t", [(1.0, 0.0, 0.3), (2.5, 1.0, 0.2), (0.7, -0.4, -0.1)])
def test_side_angle_derivative(r, c, t, top):
    sign = 1.0 if top else -1.0
    theta = lambda s: math.acos(-sign * (s - c) / r)  # noqa: E731
    r_F = math.sqrt(r * r - (t - c) ** 2)
    fd = richardson_derivative(theta, t, 1e-4)
    assert angle_derivative_side(r, r_F, top) == pytest.approx(fd, rel=1e-8)


@pytest.mark.parametrize("c", [0.4, -0.4, 1.1, -0.05])
def test_radial_angle_derivative(c):
    # the face is fixed, so the signed distance c from the origin is held constant
    r = 1.5
    theta = lambda s: math.acos(c / s)  # noqa: E731
    fd = richardson_derivative(theta, r, 1e-4)
    r_F = math.sqrt(r * r - c * c)
    assert angle_derivative_radial(r, r_F, origin_inside=c < 0) == pytest.approx(fd, rel=1e-8)


def test_radial_angle_through_origin():
    assert angle_derivative_radial(1.3, 1.3, True) == 0.0


def test_angle_derivative_rejects_bad_radii():
    with pytest.raises(ValueError):
        angle_derivative_side(1.0, 2.0, True)
    with pytest.raises(ValueError):
        angle_derivative_radial(1.0, 0.0, False)


def test_lune_closed_form():
    rep = sdf_check(lune_path(2, 1.0), method="closed_form")
    assert rep.lhs.real == pytest.approx(2.0, rel=1e-8)
    assert rep.rel_err < 1e-8


@pytest.mark.parametrize("theta", [0.5, 1.0, 2.4])
def test_lune_quadrature(theta):
    rep = sdf_check(lune_path(2, theta, step=1e-3), method="quadrature")
    assert rep.rel_err < 1e-5


@pytest.mark.parametrize("seed", [3, 5, 11])
def test_offset_path_quadrature(seed):
    P = random_polytope(seed, 2, 3, offsets=(-0.5, 0.0))
    rep = sdf_check(klein_offset_path(P, 0, step=1e-3), method="quadrature")
    assert rep.rel_err < 1e-5


def test_boost_path_quadrature():
    P = random_polytope(5, 2, 3, offsets=(-0.5, 0.0))
    rep = sdf_check(DeformationPath.boosting(P, 1, step=1e-3), method="quadrature")
    assert len(rep.faces) == 2
    assert rep.rel_err < 1e-5


def test_ideal_vertex_on_path():
    # the two Klein lines meet at (0.6, 0.8) on the unit circle
    P = Polytope(2, (HalfSpace.from_klein(np.array([1.0, 0.0]), 0.6),
                     HalfSpace.from_klein(np.array([0.0, 1.0]), 0.8)))
    with pytest.raises(IdealVertexOnPath):
        sdf_check(klein_offset_path(P, 0), method="closed_form")


def test_combinatorial_change():
    s = 1 / math.sqrt(2)
    P = Polytope(2, (HalfSpace.from_klein(np.array([1.0, 0.0]), 0.0),
                     HalfSpace.from_klein(np.array([0.0, 1.0]), 0.0),
                     HalfSpace.from_klein(np.array([-s, -s]), 0.0)))
    with pytest.raises(CombinatorialChange):
        sdf_check(klein_offset_path(P, 2), method="closed_form")


def test_sweep_integral_matches_mu_u():
    P = _normalized(3, 2, 3)
    assert sweep_integral(P, 0.3) == pytest.approx(mu_u_eps(P, 0.3), abs=1e-9)


@pytest.mark.parametrize("n,seed", [(2, 3), (3, 4)])
def test_sweep_derivative_is_slice_integral(n, seed):
    P = _normalized(seed, n, 3)
    a, b = sweep_range(P)
    t = (a + b) / 2 + 0.013
    h = 1e-4 if n == 2 else 1e-3
    f = sweep_derivative_t(P, t, 0.3)
    assert f == pytest.approx(sweep_finite_difference(P, t, 0.3, h=h), abs=1e-6)


def test_count_sign_changes():
    assert count_sign_changes([1, -1, 0, 2, 3, -4]) == 3
    assert count_sign_changes([1e-9, -1e-9, 1.0], tol=1e-6) == 0


@pytest.mark.slow
def test_lune_3d_quadrature():
    rep = sdf_check(lune_path(3, 1.2, step=0.05), method="quadrature")
    assert rep.rel_err < 1e-2
