"""Seeded invariant suite behind ``dhvol suite``.

Each check returns rows (check, case, passed, detail).  The defaults use 2D
closed forms and short quadratures so the whole suite runs in seconds;
``dim=3`` switches the volume checks to 3D quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import desitter
from .boundary import MobiusMap, boundary_from_disks, transform_boundary, v_infty_2_closed
from .minkowski import random_lorentz
from .models import hyperboloid_to_hemisphere, hyperboloid_to_klein, hyperboloid_to_upper_half_space, to_hyperboloid
from .polytope import HalfSpace, Polytope, split
from .sampling import _unit, m_cut, m_cut_value, random_polytope
from .schlafli import klein_offset_path, lune_path, sdf_check
from .volume import (
    EpsilonLadder, bound_value, check_parity, closed_form_v2, mu_h_eps, mu_u_eps, volume,
)

CHECKS = ("parity", "bound", "additivity", "isometry", "models", "sdf", "mobius", "embed")


@dataclass(frozen=True)
class Row:
    check: str
    case: str
    passed: bool
    detail: float

    def as_tuple(self):
        return (self.check, self.case, self.passed, self.detail)


def _rel(a, b, floor=1e-12):
    return abs(a - b) / max(abs(a), abs(b), floor)


def _vol(P, method):
    return volume(P, method=method).value


def check_parity_rows(seed: int, dim: int = 2, count: int = 3):
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(count):
        P = random_polytope(rng, dim, int(rng.integers(2, 5)))
        ok = all(check_parity(P, float(e)) for e in EpsilonLadder().values)
        rows.append(Row("parity", f"random {k}", ok, 0.0))
    return rows


def check_bound_rows(seed: int, dim: int = 2, count: int = 5):
    rng = np.random.default_rng(seed)
    rows = []
    method = "auto" if dim == 2 else "quadrature"
    for k in range(count):
        m = int(rng.integers(1, 5))
        P = random_polytope(rng, dim, m)
        v = _vol(P, method)
        b = bound_value(dim, m)
        rows.append(Row("bound", f"random m={m}", abs(v) <= b * (1 + 1e-6), abs(v) / b))
    for m in (3, 4):
        P = m_cut(2, m)
        err = abs(abs(closed_form_v2(P)) - m_cut_value(2, m)) / m_cut_value(2, m)
        rows.append(Row("bound", f"{m}-cut", err < 1e-3, err))
    return rows


def check_additivity_rows(seed: int, dim: int = 2, count: int = 3):
    rng = np.random.default_rng(seed)
    rows = []
    method = "auto" if dim == 2 else "quadrature"
    tol = 1e-10 if dim == 2 else 1e-3
    for k in range(count):
        P = random_polytope(rng, dim, int(rng.integers(1, 4)))
        h = HalfSpace.from_klein(_unit(rng, dim), float(rng.uniform(-0.3, 0.3)))
        A, B = split(P, h)
        err = _rel(_vol(P, method), _vol(A, method) + _vol(B, method), 1.0)
        rows.append(Row("additivity", f"random {k}", err < tol, err))
    return rows


def check_isometry_rows(seed: int, dim: int = 2, count: int = 3):
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(count):
        P = random_polytope(rng, dim, int(rng.integers(2, 5)))
        g = random_lorentz(int(rng.integers(2 ** 31)), dim, max_rapidity=1.0)
        if dim == 2:
            err = _rel(closed_form_v2(P), closed_form_v2(P.transformed(g)), 1.0)
            rows.append(Row("isometry", f"closed form {k}", err < 1e-10, err))
        err = _rel(_vol(P, "quadrature"), _vol(P.transformed(g), "quadrature"), 1.0)
        rows.append(Row("isometry", f"quadrature {k}", err < 1e-3, err))
    if dim == 3:
        f = MobiusMap.inversion([0.3, -0.2], 1.5)
        P = random_polytope(rng, 3, 3)
        err = _rel(_vol(P, "quadrature"), _vol(P.transformed(f.lorentz()), "quadrature"), 1.0)
        rows.append(Row("isometry", "inversion", err < 1e-3, err))
    return rows


def check_models_rows(seed: int, dim: int = 2, count: int = 20):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        y = rng.normal(size=dim)
        x = np.concatenate(([math.sqrt(1 + y @ y)], y)) * rng.choice([-1.0, 1.0])
        for chart in (hyperboloid_to_hemisphere, hyperboloid_to_klein, hyperboloid_to_upper_half_space):
            back = to_hyperboloid(chart(x)).coords
            worst = max(worst, float(np.max(np.abs(back - x))))
    rows = [Row("models", "round trips", worst < 1e-9, worst)]
    half = Polytope(1, (HalfSpace(np.array([0.0, 1.0])),))
    ladder = EpsilonLadder(1e-3, 0.5, 6)
    for name, fn in (("mu_u", lambda e: mu_u_eps(half, e)),
                     ("mu_h", lambda e: mu_h_eps(half, e)),
                     ("mu_h'", lambda e: mu_h_eps(half, e, variant=True))):
        v = fn(float(ladder.values[-1]))
        err = abs(v - math.pi * 1j)
        rows.append(Row("models", f"half circle {name}", err < 1e-3, err))
    return rows


def check_sdf_rows(seed: int, dim: int = 2, count: int = 2):
    rng = np.random.default_rng(seed)
    rows = []
    if dim == 2:
        rep = sdf_check(lune_path(2, float(rng.uniform(0.4, 2.5))), method="closed_form")
        rows.append(Row("sdf", "lune", rep.rel_err < 1e-5, rep.rel_err))
        for k in range(count):
            P = random_polytope(rng, 2, 3, offsets=(-0.5, 0.0))
            rep = sdf_check(klein_offset_path(P, 0, step=1e-3), method="closed_form")
            rows.append(Row("sdf", f"offset {k}", rep.rel_err < 1e-5, rep.rel_err))
    else:
        rep = sdf_check(lune_path(3, 1.2, step=0.05), method="quadrature")
        rows.append(Row("sdf", "lune 3D", rep.rel_err < 1e-2, rep.rel_err))
    return rows


def random_disklike(seed):
    """Lens or crescent on R^2: two overlapping disks, the second kept inside or outside."""
    rng = np.random.default_rng(seed)
    r1, r2 = rng.uniform(0.8, 1.5, 2)
    d = rng.uniform(abs(r1 - r2) + 0.2, r1 + r2 - 0.2)
    a = rng.uniform(0, 2 * math.pi)
    c1 = rng.normal(scale=0.3, size=2)
    c2 = c1 + d * np.array([math.cos(a), math.sin(a)])
    inside = bool(rng.integers(2))
    return boundary_from_disks([(c1, r1, True), (c2, r2, inside)])


def check_mobius_rows(seed: int, dim: int = 2, count: int = 4):
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(count):
        G = random_disklike(rng)
        f = MobiusMap.random(int(rng.integers(2 ** 31)), 2, inversions=2)
        a, b = v_infty_2_closed(G), v_infty_2_closed(transform_boundary(G, f))
        rows.append(Row("mobius", f"disk-like {k}", abs(a - b) < 1e-8, abs(a - b)))
    return rows


def check_embed_rows(seed: int, dim: int = 2, count: int = 100):
    rows = []
    for p, q in ((1, 1), (2, 1), (2, 2)):
        x = desitter.random_points(seed, p, q, count)
        quad = desitter.quadric_residual(desitter.embed_minkowski(x, p, q), p, q)
        pull = max(desitter.pullback_metric_check(xi, p, q) for xi in x)
        rows.append(Row("embed", f"({p},{q})", quad < 1e-10 and pull < 1e-8, max(quad, pull)))
    return rows


RUNNERS = {
    "parity": check_parity_rows,
    "bound": check_bound_rows,
    "additivity": check_additivity_rows,
    "isometry": check_isometry_rows,
    "models": check_models_rows,
    "sdf": check_sdf_rows,
    "mobius": check_mobius_rows,
    "embed": check_embed_rows,
}


def run_suite(seed: int = 0, dim: int = 2, only=None):
    names = CHECKS if not only else [only] if isinstance(only, str) else list(only)
    rows = []
    for name in names:
        if name not in RUNNERS:
            raise ValueError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
        rows.extend(RUNNERS[name](seed, dim))
    return rows
