"""A polytope seen in the upper half-space model.

With u = (u0, w), a half-space with normal e becomes

    q(u) = -(e0 + en) |u|^2 + 4 sum_j e_j w_j + 4 (en - e0) >= 0,

a ball centred on u0 = 0, its exterior, or a vertical wall.  Each
constraint involves u0 only through u0^2, so for fixed w the section of the
region is a symmetric set  A <= |u0| <= B  and the u0 integral of
(u0 - eps i)^(-n) has a closed form.  Volume integrals therefore reduce to
(n-1)-dimensional quadrature over w.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import PointAtInfinityInPolytope
from .polytope import Polytope, contains_infinity

WALL_TOL = 1e-12


@dataclass(frozen=True)
class UpperRegion:
    n: int
    a: np.ndarray      # |u|^2 coefficient (with a minus sign in q)
    b: np.ndarray      # (m, n-1) linear coefficients in w
    c: np.ndarray      # constants

    @classmethod
    def from_polytope(cls, P: Polytope) -> "UpperRegion":
        if P.dim < 1:
            raise ValueError("need dim >= 1")
        if contains_infinity(P):
            raise PointAtInfinityInPolytope("polytope contains the point at infinity")
        e = P.normals
        a = e[:, 0] + e[:, -1]
        b = 4.0 * e[:, 1:-1]
        c = 4.0 * (e[:, -1] - e[:, 0])
        scale = np.sqrt(a * a + np.sum(b * b, axis=1) + c * c)
        a, b, c = a / scale, b / scale[:, None], c / scale
        a = np.where(np.abs(a) < WALL_TOL, 0.0, a)
        return cls(P.dim, a, b, c)

    @property
    def balls_in(self):
        return np.flatnonzero(self.a > 0)

    @property
    def balls_out(self):
        return np.flatnonzero(self.a < 0)

    @property
    def walls(self):
        return np.flatnonzero(self.a == 0)

    # ------------------------------------------------------------ sections

    def section(self, W: np.ndarray):
        """(A, B, ok) for points W of shape (N, n-1): the section over w is
        A <= |u0| <= B, nonempty where ok."""
        W = np.asarray(W, dtype=float)
        W = W.reshape(W.shape[0] if W.ndim == 2 else -1, self.n - 1)
        lin = W @ self.b.T + self.c[None, :]
        sq = np.sum(W * W, axis=1)[:, None]
        s = lin - self.a[None, :] * sq
        ok = np.ones(W.shape[0], dtype=bool)
        wall = self.a == 0
        if np.any(wall):
            ok &= np.all(s[:, wall] >= 0, axis=1)
        pos, neg = self.a > 0, self.a < 0
        U = np.min(s[:, pos] / self.a[pos], axis=1)
        L = np.max(s[:, neg] / self.a[neg], axis=1) if np.any(neg) else np.full(W.shape[0], -np.inf)
        L = np.maximum(L, 0.0)
        ok &= U >= L
        B = np.sqrt(np.where(ok, U, 0.0))
        A = np.sqrt(np.where(ok, L, 0.0))
        return A, B, ok

    def bounding_box(self):
        """Axis ranges of the w-projection, from the interior balls."""
        lo = np.full(self.n - 1, -np.inf)
        hi = np.full(self.n - 1, np.inf)
        for k in self.balls_in:
            ctr = self.b[k] / (2 * self.a[k])
            r2 = ctr @ ctr + self.c[k] / self.a[k]
            if r2 < 0:
                return None
            r = math.sqrt(r2)
            lo = np.maximum(lo, ctr - r)
            hi = np.minimum(hi, ctr + r)
        if np.any(lo > hi):
            return None
        return lo, hi

    def contains_u(self, u) -> bool:
        u = np.asarray(u, dtype=float)
        w = u[1:]
        q = -self.a * (u @ u) + self.b @ w + self.c
        return bool(np.all(q >= -1e-12))

    # -------------------------------------------------------- breakpoints

    def line_breaks(self, p: np.ndarray, d: np.ndarray):
        """Parameters t (sorted) where the section structure can change
        along w = p + t d, and the support [t0, t1]; None if empty."""
        d2 = float(d @ d)
        alpha = -self.a * d2
        beta = self.b @ d - 2 * self.a * (p @ d)
        gamma = self.b @ p + self.c - self.a * (p @ p)
        t0, t1 = -np.inf, np.inf
        for k in self.balls_in:
            r = _quad_roots(alpha[k], beta[k], gamma[k])
            if len(r) < 2:
                return None
            t0, t1 = max(t0, r[0]), min(t1, r[1])
        if not t0 < t1:
            return None
        ts = [t0, t1]
        for k in range(self.a.size):
            ts.extend(_quad_roots(alpha[k], beta[k], gamma[k]))
        nz = np.flatnonzero(self.a != 0)
        for i, j in itertools.combinations(nz, 2):
            # radical axis: s_i/a_i - s_j/a_j is linear in w
            bb = beta[i] / self.a[i] - beta[j] / self.a[j]
            gg = gamma[i] / self.a[i] - gamma[j] / self.a[j]
            if bb != 0:
                ts.append(-gg / bb)
        ts = np.array(sorted(t for t in ts if t0 <= t <= t1))
        keep = np.concatenate(([True], np.diff(ts) > 1e-14 * max(1.0, t1 - t0)))
        return ts[keep]

    def curves(self):
        """Circles (centre, radius^2) and lines (normal, offset) in w-space
        along which the section structure changes."""
        circles, lines = [], []
        for k in range(self.a.size):
            if self.a[k] != 0:
                ctr = self.b[k] / (2 * self.a[k])
                circles.append((ctr, ctr @ ctr + self.c[k] / self.a[k]))
            else:
                lines.append((self.b[k], self.c[k]))
        nz = np.flatnonzero(self.a != 0)
        for i, j in itertools.combinations(nz, 2):
            nb = self.b[i] / self.a[i] - self.b[j] / self.a[j]
            if np.any(nb != 0):
                lines.append((nb, self.c[i] / self.a[i] - self.c[j] / self.a[j]))
        return circles, lines

    def plane_breaks(self):
        """u1 values where the structure of the u2-section can change (n = 3)."""
        circles, lines = self.curves()
        xs = []
        for ctr, r2 in circles:
            if r2 > 0:
                r = math.sqrt(r2)
                xs.extend([ctr[0] - r, ctr[0] + r])
        for nb, off in lines:
            if abs(nb[1]) <= 1e-14 * np.linalg.norm(nb):
                xs.append(-off / nb[0])
        for (c1, r1), (c2, r2) in itertools.combinations(circles, 2):
            xs.extend(pt[0] for pt in _circle_circle(c1, r1, c2, r2))
        for ctr, r2 in circles:
            for nb, off in lines:
                xs.extend(pt[0] for pt in _line_circle(nb, off, ctr, r2))
        for (n1, o1), (n2, o2) in itertools.combinations(lines, 2):
            M = np.array([n1, n2])
            if abs(np.linalg.det(M)) > 1e-14 * np.linalg.norm(n1) * np.linalg.norm(n2):
                xs.append(np.linalg.solve(M, [-o1, -o2])[0])
        return xs


def _quad_roots(al, be, ga):
    """Real roots (sorted) of al t^2 + be t + ga, with linear fallback."""
    if al == 0:
        return [] if be == 0 else [-ga / be]
    disc = be * be - 4 * al * ga
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    qv = -0.5 * (be + math.copysign(sq, be))
    r = [qv / al, ga / qv] if qv != 0 else [0.0, 0.0]
    return sorted(r)


def _line_circle(nb, off, ctr, r2):
    # points w with nb.w + off = 0 and |w - ctr|^2 = r2
    nn = float(nb @ nb)
    if nn == 0 or r2 < 0:
        return []
    foot = ctr - (nb @ ctr + off) / nn * nb
    h2 = r2 - float((foot - ctr) @ (foot - ctr))
    if h2 < 0:
        return []
    tang = np.array([-nb[1], nb[0]]) / math.sqrt(nn)
    h = math.sqrt(h2)
    return [foot + h * tang, foot - h * tang]


def _circle_circle(c1, r1, c2, r2):
    # radical axis: 2 (c2 - c1).w + |c1|^2 - r1 - |c2|^2 + r2 = 0
    nb = 2 * (c2 - c1)
    off = c1 @ c1 - r1 - c2 @ c2 + r2
    return _line_circle(nb, off, c1, r1)
