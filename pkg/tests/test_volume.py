import math

import numpy as np
import pytest

from dhvol.errors import PointAtInfinityInPolytope, Unsupported
from dhvol.polytope import HalfSpace, Polytope, halfspace_from_upper_model, whole_space
from dhvol.sampling import lune, random_lune, random_polytope
from dhvol.volume import (
    ComplexVolume, EpsilonLadder, bound_value, check_bound, closed_form_v1, closed_form_v2,
    lune_volume, mu_h_eps, mu_u_eps, normalizing_transform, sphere_volume, total_volume,
    volume,
)

from oracles import mu_u_2d, sphere_volume_gamma

# mu_u_eps of normalized random polygons; values from oracles.mu_u_2d
MU_U_FROZEN = [
    (0, 0.3, -1.9931565413832582),
    (0, 0.05, -2.2441601737331403),
    (1, 0.3, 0.31651164614263416),
    (1, 0.05, 0.6210398098032961),
    (2, 0.3, -1.0955140560534036),
    (2, 0.05, -1.1015805197426283),
]

# half circle {x1 >= 0} on S^1_r; values from oracles.mu_h_circle
MU_H_FROZEN = [
    (0.5, False, 1.0, 2.8099258924162904),
    (0.5, False, 2.0, 3.04779255139181),
    (0.5, True, 1.0, 2.247940713933033),
    (0.5, True, 2.0, 2.8685106366040563),
    (0.1, False, 1.0, 3.126001526812332),
    (0.1, False, 2.0, 3.1376730105742623),
    (0.1, True, 1.0, 3.095051016645874),
    (0.1, True, 2.0, 3.1298483896002587),
]

HALF_CIRCLE = Polytope(1, (HalfSpace(np.array([0.0, 1.0])),))


def _normalized(seed):
    P = random_polytope(seed, 2, 3)
    return P.transformed(normalizing_transform(P))


@pytest.mark.parametrize("seed,eps,want", MU_U_FROZEN)
def test_mu_u_matches_oracle(seed, eps, want):
    assert abs(mu_u_eps(_normalized(seed), eps) - want) < 1e-7


@pytest.mark.slow
def test_mu_u_live_oracle():
    Q = _normalized(3)
    assert abs(mu_u_eps(Q, 0.2) - mu_u_2d(Q, 0.2)) < 1e-7


@pytest.mark.parametrize("eps,variant,r,want", MU_H_FROZEN)
def test_mu_h_matches_oracle(eps, variant, r, want):
    v = mu_h_eps(HALF_CIRCLE, eps, r, variant)
    assert abs(v - 1j * want) < 1e-9


@pytest.mark.parametrize("a,eps", [(1.5, 0.1), (0.3, 0.01), (4.0, 1.0)])
def test_half_circle_arctan(a, eps):
    P = Polytope(1, (halfspace_from_upper_model(np.zeros(0), a, inside=True, n=1),))
    assert mu_u_eps(P, eps) == pytest.approx(2j * math.atan(a / eps), abs=1e-12)


def test_mu_h_point_values():
    pt = Polytope(0, ())
    assert mu_h_eps(pt, 1.0, 1.0, variant=True) == pytest.approx(1.0)
    assert mu_h_eps(pt, 0.3) == 2


def test_mu_u_rejects_infinity():
    with pytest.raises(PointAtInfinityInPolytope):
        mu_u_eps(whole_space(2), 0.1)
    P = Polytope(2, (HalfSpace(np.array([0.0, 0.0, -1.0])),))
    with pytest.raises(PointAtInfinityInPolytope):
        mu_u_eps(P, 0.1)


def test_mu_u_dimension_cap():
    with pytest.raises(Unsupported):
        mu_u_eps(lune(4, 1.0), 0.1)


def test_empty_polytope():
    P = Polytope(2, (HalfSpace.from_klein([1.0, 0.0], 0.5), HalfSpace.from_klein([-1.0, 0.0], 0.5)))
    assert volume(P, method="quadrature").value == 0
    assert closed_form_v2(P) == 0


def test_closed_form_v1():
    assert closed_form_v1(whole_space(1)) == pytest.approx(2j * math.pi)
    assert closed_form_v1(HALF_CIRCLE) == pytest.approx(1j * math.pi)
    arcs = Polytope(1, (HalfSpace.from_klein([1.0], 0.2), HalfSpace.from_klein([-1.0], -0.6)))
    assert closed_form_v1(arcs) == 0


def test_quadrature_dh1():
    assert volume(HALF_CIRCLE, method="quadrature").value == pytest.approx(1j * math.pi, abs=1e-6)
    assert volume(whole_space(1), method="quadrature").value == pytest.approx(2j * math.pi, abs=1e-6)


def test_quadrature_dh2():
    v = volume(whole_space(2), method="quadrature").value
    assert abs(v + 4 * math.pi) / (4 * math.pi) < 1e-3


@pytest.mark.slow
def test_quadrature_halfspace_dh3():
    P = Polytope(3, (HalfSpace(np.array([0.0, 0.0, 0.0, 1.0])),))
    v = volume(P).value
    assert abs(v + 1j * math.pi ** 2) / math.pi ** 2 < 1e-3


@pytest.mark.parametrize("theta", [0.3, 1.0, math.pi / 2, 2.8])
def test_lune_closed_form(theta):
    assert closed_form_v2(lune(2, theta)) == pytest.approx(-2 * theta, abs=1e-14)
    assert lune_volume(2, theta) == pytest.approx(-2 * theta)


@pytest.mark.parametrize("seed", range(4))
def test_random_polygons_quadrature_vs_closed(seed):
    P = random_polytope(seed + 100, 2, 4)
    cf = closed_form_v2(P)
    q = volume(P, method="quadrature").value
    assert abs(q - cf) <= 1e-3 * max(abs(cf), 1.0)


@pytest.mark.parametrize("seed", range(3))
def test_random_lune(seed):
    L, theta = random_lune(seed, 2)
    assert closed_form_v2(L) == pytest.approx(-2 * theta, abs=1e-10)
    assert volume(L, method="quadrature").value == pytest.approx(-2 * theta, abs=1e-3)


@pytest.mark.parametrize("n", range(0, 11))
def test_total_volume_recursion(n):
    assert sphere_volume(n) == pytest.approx(sphere_volume_gamma(n), rel=1e-13)
    assert total_volume(n) == pytest.approx((1j) ** n * sphere_volume_gamma(n), rel=1e-13)


@pytest.mark.parametrize("n", range(2, 11))
def test_lune_recursion(n):
    # the full turn is the whole space
    assert lune_volume(n, 2 * math.pi) == pytest.approx(total_volume(n), rel=1e-13)


def test_bound():
    assert bound_value(2, 1) == pytest.approx(4 * math.pi)
    assert bound_value(3, 4) == pytest.approx(24 / 8 * 2 * math.pi ** 2)
    P = random_polytope(5, 2, 3)
    assert check_bound(P, closed_form_v2(P))


def test_ladder_validation():
    with pytest.raises(ValueError):
        EpsilonLadder(0.1, 1.5, 8)
    with pytest.raises(ValueError):
        EpsilonLadder(0.1, 0.5, 3)
    assert np.all(np.diff(EpsilonLadder().values) < 0)


def test_complex_volume_json():
    cv = ComplexVolume(1 + 2j, [(0.1, 3 + 4j)], 0.5, "Quadrature")
    assert cv.to_json() == {"value": [1.0, 2.0], "samples": [[0.1, 3.0, 4.0]],
                            "residual": 0.5, "method": "Quadrature"}


def test_closed_form_dispatch():
    assert volume(lune(2, 1.0), method="auto").method == "ClosedForm"
    with pytest.raises(Unsupported):
        volume(lune(3, 1.0), method="closed_form")
