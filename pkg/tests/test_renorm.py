import math

import numpy as np
import pytest

from dhvol.errors import IllConditioned
from dhvol.io import load_polytope
from dhvol.polytope import HalfSpace, Polytope
from dhvol.renorm import (
    AsymptoticExpansion, check_conjecture_identity, epstein_constants, fit_asymptotics,
    fit_samples,
)
from dhvol.volume import EpsilonLadder, sphere_volume

INPUTS = __import__("pathlib").Path(__file__).resolve().parents[1] / "inputs"


def _triangle_area(inradius):
    # equilateral Klein triangle: split into six right triangles at the center
    v = math.acos(math.cosh(math.atanh(inradius)) * math.sin(math.pi / 3))
    return math.pi - 6 * v


def test_template_columns():
    assert AsymptoticExpansion(1, 0, False).fit(
        np.geomspace(0.01, 0.2, 8), np.ones(8)).columns_[:2] == ["z^-1", "1"]
    assert "log z" in AsymptoticExpansion(2, 0, False).fit(
        np.geomspace(0.01, 0.2, 8), np.ones(8)).columns_


def test_synthetic_recovery():
    eps = np.geomspace(0.005, 0.2, 10)
    z = -1j * eps
    y = 3.0 / z - 2.0 + 0.5 * eps
    fit = fit_samples(1, eps, y)
    assert fit.constant == pytest.approx(-2.0, abs=1e-8)
    assert fit.singular["z^-1"] == pytest.approx(3.0, abs=1e-8)
    assert fit.experimental


def test_ill_conditioned():
    with pytest.raises(IllConditioned):
        fit_samples(3, np.full(12, 0.1) + np.arange(12) * 1e-15, np.ones(12))


def test_full_h2():
    P = load_polytope(INPUTS / "h2full.json")
    fit = fit_asymptotics(P)
    assert fit.constant == pytest.approx(-2 * math.pi, abs=5e-2)
    assert check_conjecture_identity(P, fit) < 5e-2


def test_compact_triangle():
    P = load_polytope(INPUTS / "triangle.json")
    fit = fit_asymptotics(P)
    area = _triangle_area(0.3)
    assert abs(fit.constant - area) < 1e-3 * area
    assert fit.singular_ratio() < 1e-3


@pytest.mark.parametrize("halfspaces,length", [((), 2), ((HalfSpace(np.array([0.0, 1.0])),), 1)])
def test_one_dimensional(halfspaces, length):
    # V_1 = L pi i, with V_1 of the full line 2 pi i and of a half line pi i
    P = Polytope(1, halfspaces)
    fit = fit_asymptotics(P)
    assert fit.log_coeff == pytest.approx(length, abs=1e-4)
    assert check_conjecture_identity(P, fit, volume_value=length * math.pi * 1j) < 1e-4


def test_short_ladder():
    P = load_polytope(INPUTS / "h2full.json")
    with pytest.raises(ValueError):
        fit_asymptotics(P, ladder=EpsilonLadder(0.2, 0.5, 3))


def test_epstein_values():
    assert epstein_constants(1, 1, "odd") == pytest.approx(-2 * math.pi)
    assert epstein_constants(1, 1, "even") == pytest.approx(-sphere_volume(3) / math.pi)
    assert epstein_constants(3, 0, "odd") == 0
    with pytest.raises(ValueError):
        epstein_constants(0, 1, "odd")


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("parity", ["odd", "even"])
def test_epstein_forms_agree(m, parity):
    a = epstein_constants(m, 2, parity, "factorial")
    b = epstein_constants(m, 2, parity, "sphere")
    assert abs(a - b) <= 1e-12 * abs(a)
