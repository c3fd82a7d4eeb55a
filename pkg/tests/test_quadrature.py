import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from dhvol.errors import NonConverged
from dhvol.quadrature import QuadratureConfig, Rule, integrate, smoothstep_pieces

CASES = [
    (lambda x: np.exp(-x * x), -2.0, 3.0),
    (lambda x: np.sqrt(np.abs(x)), -1.0, 1.0),
    (lambda x: 1.0 / (x - 0.05j), -1.0, 2.0),
    (lambda x: np.cos(7 * x) * np.log1p(x), 0.0, 4.0),
]


@pytest.mark.parametrize("f,a,b", CASES)
@pytest.mark.parametrize("rule", list(Rule))
def test_against_scipy(f, a, b, rule):
    v, _ = integrate(f, a, b, abs_tol=1e-10, rule=rule)
    re = sp_integrate.quad(lambda x: complex(f(np.array([x]))[0]).real, a, b, limit=500,
                           epsabs=1e-12, points=[0.0] if a < 0 < b else None)[0]
    im = sp_integrate.quad(lambda x: complex(f(np.array([x]))[0]).imag, a, b, limit=500,
                           epsabs=1e-12, points=[0.0] if a < 0 < b else None)[0]
    assert abs(v - complex(re, im)) < 1e-8


def test_reversed_interval():
    v, _ = integrate(lambda x: x, 1.0, 0.0)
    assert v == pytest.approx(-0.5)


def test_strict_budget():
    with pytest.raises(NonConverged):
        integrate(lambda x: 1.0 / np.sqrt(np.abs(x - 0.3) + 1e-300), 0.0, 1.0,
                  abs_tol=1e-14, max_rounds=3)


def test_smoothstep_endpoint_sqrt():
    v, _ = smoothstep_pieces(lambda x: np.sqrt(1 - x * x), np.array([-1.0, 0.0, 1.0]), 1e-12)
    assert v.real == pytest.approx(math.pi / 2, abs=1e-11)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0.0)
