"""Seeded generators of test polytopes."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .minkowski import minkowski_dot, random_lorentz
from .polytope import HalfSpace, Polytope, empty_interior, ideal_vertices

TANGENCY_MARGIN = 0.05
MAX_TRIES = 500


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _unit(rng, n):
    v = rng.normal(size=n)
    return v / np.linalg.norm(v)


def well_separated(P: Polytope, margin: float = TANGENCY_MARGIN) -> bool:
    """No pair of boundaries is within ``margin`` of tangency."""
    for a, b in itertools.combinations(P.normals, 2):
        if abs(abs(minkowski_dot(a, b)) - 1.0) < margin:
            return False
    return True


def random_polytope(seed, n: int, m: int, offsets=(-0.7, 0.4),
                    margin: float = TANGENCY_MARGIN) -> Polytope:
    """m Klein half-spaces {d.k >= o} with random unit d and o in ``offsets``.

    Draws until P_+ is nonempty, there are no ideal vertices and no pair of
    boundaries is near tangency.
    """
    rng = _rng(seed)
    for _ in range(MAX_TRIES):
        hs = tuple(HalfSpace.from_klein(_unit(rng, n), rng.uniform(*offsets)) for _ in range(m))
        P = Polytope(n, hs)
        if empty_interior(P) or not well_separated(P, margin) or ideal_vertices(P):
            continue
        return P
    raise RuntimeError("no admissible polytope found")


def lune(n: int, theta: float) -> Polytope:
    """Wedge of angle theta between two boundaries through the x_{n-1}, x_n plane."""
    if n < 2:
        raise ValueError("lunes need n >= 2")
    e1 = np.zeros(n + 1)
    e1[n] = 1.0
    e2 = np.zeros(n + 1)
    e2[n - 1], e2[n] = math.sin(theta), -math.cos(theta)
    return Polytope(n, (HalfSpace(e1), HalfSpace(e2)))


def random_lune(seed, n: int, lo: float = 0.3, hi: float = math.pi - 0.3):
    """(lune moved by a random Lorentz map, its angle)."""
    rng = _rng(seed)
    theta = float(rng.uniform(lo, hi))
    g = random_lorentz(int(rng.integers(2 ** 31)), n, max_rapidity=0.8)
    return lune(n, theta).transformed(g), theta


def _simplex_directions(n: int) -> np.ndarray:
    """n + 1 unit vectors in R^n with pairwise dot -1/n."""
    E = np.eye(n + 1) - 1.0 / (n + 1)
    # orthonormal basis of the sum-zero hyperplane
    q, _ = np.linalg.qr(E[:, :n])
    V = E @ q
    return V / np.linalg.norm(V, axis=1)[:, None]


def cut_directions(n: int, m: int) -> np.ndarray:
    if n == 2:
        a = 2 * math.pi * np.arange(m) / m
        return np.stack([np.cos(a), np.sin(a)], axis=1)
    if m <= n + 1:
        if m == n + 1:
            return _simplex_directions(n)
        # a regular m-simplex spanning the first m - 1 axes
        D = np.zeros((m, n))
        D[:, : m - 1] = _simplex_directions(m - 1)
        return D
    if m <= 2 * n:
        return np.vstack([np.eye(n), -np.eye(n)])[:m]
    raise ValueError("at most 2n cuts are supported for n >= 3")


def m_cut(n: int, m: int) -> Polytope:
    """DH^n minus m pairwise disjoint half-spaces.

    The removed pieces are Klein caps {d_k.k > o}; o is chosen so that any
    two cap boundaries stay apart inside the ball.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        D = np.zeros((1, n))
        D[0, -1] = 1.0
        o = 0.0
    else:
        D = cut_directions(n, m)
        G = D @ D.T
        phi = math.acos(max(G[~np.eye(m, dtype=bool)]))
        o = math.cos(0.4 * phi)
    P = Polytope(n, tuple(HalfSpace.from_klein(-d, -o) for d in D))
    for a, b in itertools.combinations(P.normals, 2):
        if minkowski_dot(a, b) > -1.0:
            raise AssertionError("the removed half-spaces overlap")
    return P


def m_cut_value(n: int, m: int) -> float:
    """|V_n| of ``m_cut(n, m)``, i.e. (m - 2)/2 times the sphere volume."""
    from .volume import sphere_volume
    return abs(m - 2) / 2 * sphere_volume(n)
