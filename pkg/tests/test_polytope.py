import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dhvol.errors import NonIntersecting
from dhvol.minkowski import AmbientVector, minkowski_dot, random_lorentz
from dhvol.polytope import (
    HalfSpace, Polytope, contains, contains_infinity, dihedral_angle, empty_interior, faces,
    halfspace_from_upper_model, ideal_vertices, restrict_to_boundary, restrict_to_face, split,
    whole_space,
)
from dhvol.sampling import lune, random_polytope


def test_normal_must_be_spacelike_unit():
    with pytest.raises(ValueError):
        HalfSpace(np.array([1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        HalfSpace.from_normal([0.0, 2.0, 0.0])
    assert HalfSpace.from_normal([0.0, 1.0 + 1e-7, 0.0]).normal[1] == pytest.approx(1.0)


def test_dihedral_perpendicular():
    a, b = HalfSpace(np.array([0.0, 1.0, 0.0])), HalfSpace(np.array([0.0, 0.0, 1.0]))
    assert dihedral_angle(a, b) == pytest.approx(math.pi / 2)


@pytest.mark.parametrize("theta", [0.2, 1.0, 2.9])
def test_dihedral_defining_relation(theta):
    P = lune(2, theta)
    assert dihedral_angle(*P.halfspaces) == pytest.approx(theta)


def test_dihedral_vertical_walls():
    # walls through the origin of R^1 x R^+ at Euclidean angle theta
    theta = 1.1
    a = halfspace_from_upper_model((np.array([0.0, 1.0]), 0.0))
    b = halfspace_from_upper_model((np.array([math.sin(theta), -math.cos(theta)]), 0.0))
    assert dihedral_angle(a, b) == pytest.approx(theta)


def test_nonintersecting_angle_raises():
    a = HalfSpace.from_klein([1.0, 0.0], 0.5)
    b = HalfSpace.from_klein([-1.0, 0.0], 0.5)
    with pytest.raises(NonIntersecting):
        dihedral_angle(a, b)


def test_faces_of_lune():
    F = faces(lune(2, 1.0), 2)
    assert len(F) == 1 and F[0].generators == (0, 1)


def test_faces_non_crossing():
    P = Polytope(2, (HalfSpace.from_klein([1.0, 0.0], -0.5), HalfSpace.from_klein([-1.0, 0.0], -0.5)))
    assert faces(P, 2) == []
    assert len(faces(P, 1)) == 2


def test_triangle_has_three_vertices():
    P = Polytope(2, tuple(HalfSpace.from_klein([math.cos(a), math.sin(a)], -0.3)
                          for a in (0, 2 * math.pi / 3, 4 * math.pi / 3)))
    assert len(faces(P, 2)) == 3


def test_tangent_pair_has_ideal_vertex():
    a = HalfSpace(np.array([0.0, 1.0, 0.0]))
    # both boundaries pass through the ideal point (1, 0, 1)
    e = np.array([1.0, 1.0, 1.0])
    e2 = e / math.sqrt(minkowski_dot(e, e))
    P = Polytope(2, (a, HalfSpace(e2)))
    assert minkowski_dot(a.normal, e2) == pytest.approx(1.0)
    assert len(ideal_vertices(P)) == 1


def test_transversal_pair_no_ideal_vertex():
    assert ideal_vertices(lune(2, 1.0)) == []


def test_ideal_triangle():
    pts = [np.array([1.0, math.cos(a), math.sin(a)]) for a in (0, 2 * math.pi / 3, 4 * math.pi / 3)]
    hs = []
    for i in range(3):
        p, q = pts[i], pts[(i + 1) % 3]
        r = pts[(i + 2) % 3]
        # normal orthogonal to p and q, oriented towards r
        e = np.cross(p * np.array([-1, 1, 1]), q * np.array([-1, 1, 1]))
        e = e / math.sqrt(minkowski_dot(e, e))
        if minkowski_dot(e, r) < 0:
            e = -e
        hs.append(HalfSpace(e))
    assert len(ideal_vertices(Polytope(2, tuple(hs)))) == 3


def test_contains_and_infinity():
    P = Polytope(2, (HalfSpace(np.array([0.0, 0.0, 1.0])),))
    assert contains(P, AmbientVector([1.0, 0.0, 0.0]))
    assert not contains(P, AmbientVector([math.cosh(1), 0.0, -math.sinh(1)]))
    assert not contains_infinity(P)
    assert contains_infinity(Polytope(2, (P.halfspaces[0].complement(),)))
    assert not empty_interior(P)
    assert contains_infinity(whole_space(2))


def test_split_halves():
    P = lune(2, 2.0)
    A, B = split(P, HalfSpace(np.array([0.0, 1.0, 0.0])))
    assert A.m == B.m == 3


def test_restrict_to_face_dimension():
    P = lune(3, 1.0)
    R = restrict_to_face(P, (0, 1))
    assert R.dim == 1


def test_restrict_to_boundary_keeps_parent():
    P = lune(3, 1.0)
    G = restrict_to_boundary(P)
    assert G.dim == 2 and G.parent is P


def test_upper_model_ball():
    h = halfspace_from_upper_model([0.0], 1.0, inside=True)
    # the top of the unit half-disk, u = (1, 0), lies inside
    from dhvol.models import upper_half_space_to_hyperboloid
    x = upper_half_space_to_hyperboloid([0.5, 0.0]).coords
    assert minkowski_dot(x, h.normal) > 0
    x = upper_half_space_to_hyperboloid([3.0, 0.0]).coords
    assert minkowski_dot(x, h.normal) < 0


@given(st.integers(0, 10 ** 6))
def test_lorentz_preserves_angles(seed):
    P = random_polytope(seed, 2, 3)
    g = random_lorentz(seed, 2)
    Q = P.transformed(g)
    for i in range(3):
        for j in range(i + 1, 3):
            a = minkowski_dot(P.normals[i], P.normals[j])
            b = minkowski_dot(Q.normals[i], Q.normals[j])
            assert a == pytest.approx(b, abs=1e-9)
