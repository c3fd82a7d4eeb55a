"""Half-spaces and polytopes of the double hyperbolic space.

A half-space is stored through its upper-sheet inward unit normal ``e``
(e.e = 1).  Membership of a tagged point is ell(x) * x.e >= 0, which makes
every polytope symmetric under the antipodal map.  Faces are found by a
small exact quadratic program in Klein coordinates of the upper sheet.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, NonIntersecting
from .minkowski import AmbientVector, LorentzTransform, Tag, eta, minkowski_dot
from .models import Cover, Model, ModelPoint, to_ambient

NORMAL_TOL = 1e-12
LOAD_TOL = 1e-6
TANGENCY_TOL = 1e-8
MEMBER_TOL = 1e-12


class PolytopeKind(enum.Enum):
    TYPE1 = "Type1"
    TYPE2_UPPER = "Type2Upper"


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """{x : ell(x) x.e >= 0} for a unit spacelike normal e."""

    normal: np.ndarray

    def __post_init__(self):
        e = self.normal.coords if isinstance(self.normal, AmbientVector) else self.normal
        e = np.array(e, dtype=float).reshape(-1)
        if abs(minkowski_dot(e, e) - 1.0) > NORMAL_TOL:
            raise ValueError("half-space normal must satisfy e.e = 1")
        e.flags.writeable = False
        object.__setattr__(self, "normal", e)

    @classmethod
    def from_normal(cls, e, tol: float = LOAD_TOL) -> "HalfSpace":
        """Normalize e to e.e = 1, rejecting inputs further than ``tol`` away."""
        e = np.asarray(e, dtype=float).reshape(-1)
        q = minkowski_dot(e, e)
        if q <= 0 or abs(q - 1.0) > tol:
            raise ValueError(f"normal has e.e = {q}, expected 1")
        return cls(e / math.sqrt(q))

    @classmethod
    def from_klein(cls, direction, offset: float) -> "HalfSpace":
        """Half-space whose Klein image is {k : direction.k >= offset}."""
        d = np.asarray(direction, dtype=float)
        e = np.concatenate(([offset], d))
        return cls.from_normal(e / math.sqrt(minkowski_dot(e, e)), tol=np.inf)

    @property
    def n(self) -> int:
        return self.normal.size - 1

    def complement(self) -> "HalfSpace":
        return HalfSpace(-self.normal)

    def transformed(self, g: LorentzTransform) -> "HalfSpace":
        e = g.matrix @ self.normal
        return HalfSpace(e / math.sqrt(minkowski_dot(e, e)))

    def __repr__(self):
        return f"HalfSpace({self.normal.tolist()})"


@dataclass(frozen=True)
class Face:
    codim: int
    generators: tuple
    # a point of the face on the upper sheet, in Klein coordinates
    sample: np.ndarray = field(compare=False, repr=False)


@dataclass(frozen=True, eq=False)
class Polytope:
    """Finite intersection of half-spaces; no half-spaces means the whole space."""

    dim: int
    halfspaces: tuple = ()
    kind: PolytopeKind = PolytopeKind.TYPE1

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be non-negative")
        hs, seen = [], set()
        for h in self.halfspaces:
            if not isinstance(h, HalfSpace):
                h = HalfSpace.from_normal(h)
            if h.n != self.dim:
                raise DimensionMismatch(f"half-space of dim {h.n} in a {self.dim}-polytope")
            key = h.normal.tobytes()
            if key not in seen:
                seen.add(key)
                hs.append(h)
        object.__setattr__(self, "halfspaces", tuple(hs))

    @property
    def m(self) -> int:
        return len(self.halfspaces)

    @cached_property
    def normals(self) -> np.ndarray:
        if not self.halfspaces:
            return np.zeros((0, self.dim + 1))
        return np.array([h.normal for h in self.halfspaces])

    def transformed(self, g: LorentzTransform) -> "Polytope":
        return Polytope(self.dim, tuple(h.transformed(g) for h in self.halfspaces), self.kind)

    def with_halfspace(self, h: HalfSpace) -> "Polytope":
        return Polytope(self.dim, self.halfspaces + (h,), self.kind)

    def upper(self) -> "Polytope":
        return Polytope(self.dim, self.halfspaces, PolytopeKind.TYPE2_UPPER)

    def double(self) -> "Polytope":
        return Polytope(self.dim, self.halfspaces, PolytopeKind.TYPE1)

    def __repr__(self):
        return f"Polytope(dim={self.dim}, m={self.m}, kind={self.kind.value})"


@dataclass(frozen=True, eq=False)
class BoundaryPolytope:
    """P intersected with the ideal boundary, viewed on the equator sphere S^{n-1}."""

    dim: int
    halfspaces: tuple
    parent: Polytope

    @property
    def m(self) -> int:
        return len(self.halfspaces)

    def contains_direction(self, s, tol: float = MEMBER_TOL) -> bool:
        """Membership of the unit vector s of the equator sphere."""
        z = np.concatenate(([1.0], np.asarray(s, float)))
        return all(minkowski_dot(z, h.normal) >= -tol for h in self.halfspaces)

    def transformed(self, g: LorentzTransform) -> "BoundaryPolytope":
        return restrict_to_boundary(self.parent.transformed(g))


def _as_point(x):
    """(ambient coords, sign, is_ideal) of a point given in any form."""
    if isinstance(x, ModelPoint):
        if x.ideal:
            return _ideal_coords(x), 1, True
        a = to_ambient(x)
        return a.coords, int(a.tag), False
    if isinstance(x, AmbientVector):
        c = x.coords
        scale = float(np.max(np.abs(c)))
        if abs(minkowski_dot(c, c)) <= 1e-10 * scale * scale:
            return c * np.sign(c[0]), 1, True
        return c, int(x.tag), False
    raise TypeError("expected ModelPoint or AmbientVector")


def _ideal_coords(p: ModelPoint) -> np.ndarray:
    c = p.coords
    if p.model is Model.HYPERBOLOID:
        return c / c[0]
    if p.model is Model.HEMISPHERE:
        return np.concatenate(([1.0], c[1:]))
    if p.model is Model.KLEIN:
        return np.concatenate(([1.0], c))
    if p.model is Model.UPPER_HALF_SPACE:
        w = c[1:]
        s = float(w @ w)
        return np.concatenate(([4.0 + s], 4.0 * w, [4.0 - s])) / (4.0 + s)
    raise ValueError(f"unsupported ideal model {p.model}")


def contains(P, x, tol: float = MEMBER_TOL) -> bool:
    """Membership test for points of either sheet and for ideal points."""
    c, sign, is_ideal = _as_point(x)
    if c.size != P.dim + 1 + (1 if isinstance(P, BoundaryPolytope) else 0):
        raise DimensionMismatch("point and polytope dimensions differ")
    if isinstance(P, Polytope) and P.kind is PolytopeKind.TYPE2_UPPER and not is_ideal and sign < 0:
        return False
    if is_ideal:
        c = c / c[0]
    scale = 1.0 if is_ideal else max(1.0, float(np.max(np.abs(c))))
    return all(sign * minkowski_dot(c, h.normal) >= -tol * scale for h in P.halfspaces)


def antipode(x: AmbientVector) -> AmbientVector:
    return -x


def dihedral_angle(h1: HalfSpace, h2: HalfSpace) -> float:
    """Interior angle theta with cos(theta) = -e1.e2."""
    c = minkowski_dot(h1.normal, h2.normal)
    if abs(c) >= 1.0:
        raise NonIntersecting(f"boundaries do not cross (e1.e2 = {c})")
    return math.acos(-c)


def infinity_direction(n: int) -> np.ndarray:
    """Light-like ray sent to the point at infinity of the half-space model."""
    v = np.zeros(n + 1)
    v[0], v[-1] = 1.0, -1.0
    return v


def contains_infinity(P: Polytope, tol: float = MEMBER_TOL) -> bool:
    v = infinity_direction(P.dim)
    return all(minkowski_dot(v, h.normal) >= -tol for h in P.halfspaces)


# ---------------------------------------------------------------- faces


def _klein_rows(P: Polytope, idx):
    """Rows a, b with Klein half-space a.k >= b for the listed half-spaces."""
    e = P.normals[list(idx)]
    return e[:, 1:], e[:, 0]


def min_norm_point(A_eq, b_eq, A_in, b_in, tol=1e-10):
    """Exact minimum-norm point of {A_eq k = b_eq, A_in k >= b_in}.

    The optimum is the projection of the origin onto the affine hull of one
    face of the polyhedron, so enumerating active sets is exact.  Returns
    None for an empty polyhedron.  Sizes here are tiny (m <= ~8).
    """
    dim = A_eq.shape[1] if A_eq.size else A_in.shape[1]
    best = None
    m_in = A_in.shape[0]
    max_active = dim - A_eq.shape[0]
    for r in range(0, max(0, min(m_in, max_active)) + 1):
        for T in itertools.combinations(range(m_in), r):
            A = np.vstack([A_eq, A_in[list(T)]]) if (A_eq.size or T) else np.zeros((0, dim))
            b = np.concatenate([b_eq, b_in[list(T)]])
            if A.shape[0]:
                k, *_ = np.linalg.lstsq(A, b, rcond=None)
                if np.max(np.abs(A @ k - b)) > tol * (1 + np.max(np.abs(b))):
                    continue
            else:
                k = np.zeros(dim)
            if m_in and np.min(A_in @ k - b_in) < -tol:
                continue
            if best is None or k @ k < best @ best:
                best = k
    return best


def face_sample(P: Polytope, generators) -> np.ndarray | None:
    """Klein point of the face on the given boundaries, or None if the face has
    no point in the open ball."""
    gen = list(generators)
    rest = [i for i in range(P.m) if i not in gen]
    A_eq, b_eq = _klein_rows(P, gen) if gen else (np.zeros((0, P.dim)), np.zeros(0))
    A_in, b_in = _klein_rows(P, rest) if rest else (np.zeros((0, P.dim)), np.zeros(0))
    k = min_norm_point(A_eq, b_eq, A_in, b_in)
    if k is None or k @ k >= 1.0 - 1e-12:
        return None
    return k


def faces(P: Polytope, codim: int) -> list[Face]:
    """Nonempty faces of codimension 1 or 2, with their generator sets."""
    if codim not in (1, 2):
        raise ValueError("codim must be 1 or 2")
    out = []
    for gen in itertools.combinations(range(P.m), codim):
        if codim == 2:
            c = minkowski_dot(P.normals[gen[0]], P.normals[gen[1]])
            if abs(c) >= 1.0 - TANGENCY_TOL:
                continue
        k = face_sample(P, gen)
        if k is not None:
            out.append(Face(codim, gen, k))
    return out


def _lorentz_basis(E: np.ndarray):
    """Orthonormal basis (columns, timelike first and future) of the
    Minkowski complement of the rows of E, or None if it is not Lorentzian."""
    n1 = E.shape[1]
    g = eta(n1 - 1)
    if E.shape[0]:
        _, s, vt = np.linalg.svd(E @ g)
        rank = int(np.sum(s > 1e-12 * max(1.0, s[0])))
        B = vt[rank:].T
    else:
        B = np.eye(n1)
    G = B.T @ g @ B
    lam, Q = np.linalg.eigh(G)
    if lam[0] >= -1e-12 or (lam.size > 1 and lam[1] <= 1e-12):
        return None
    F = B @ Q / np.sqrt(np.abs(lam))
    if F[0, 0] < 0:
        F[:, 0] = -F[:, 0]
    return F


def restrict_to_face(P: Polytope, generators) -> Polytope | None:
    """The face on the listed boundaries as a polytope of lower dimension.

    Returns None when the face has no point on the upper sheet.
    """
    gen = list(generators)
    F = _lorentz_basis(P.normals[gen])
    if F is None:
        return None
    k = F.shape[1]
    gk = eta(k - 1)
    hs = []
    for j in range(P.m):
        if j in gen:
            continue
        nu = gk @ F.T @ eta(P.dim) @ P.normals[j]
        q = minkowski_dot(nu, nu)
        scale = float(nu @ nu)
        if q > 1e-12 * max(scale, 1e-300):
            hs.append(HalfSpace(nu / math.sqrt(q)))
        elif nu[0] > 0:
            # future causal normal: no point of the upper sheet survives
            return None
    return Polytope(k - 1, tuple(hs), P.kind)


def ideal_vertices(P: Polytope, tol: float = TANGENCY_TOL) -> list[np.ndarray]:
    """Ideal points of P where the boundaries through them meet only there.

    Returned as future light-like vectors with z0 = 1.
    """
    found = []
    g = eta(P.dim)
    for r in range(2, min(P.m, P.dim + 1) + 1):
        for S in itertools.combinations(range(P.m), r):
            E = P.normals[list(S)]
            _, s, vt = np.linalg.svd(E @ g)
            rank = int(np.sum(s > 1e-12 * max(1.0, s[0])))
            B = vt[rank:].T
            if B.shape[1] == 0:
                continue
            G = B.T @ g @ B
            lam, Q = np.linalg.eigh(G)
            if abs(lam[0]) > tol or (lam.size > 1 and lam[1] < tol):
                continue
            z = B @ Q[:, 0]
            if abs(z[0]) < 1e-14:
                continue
            z = z / z[0]
            if any(minkowski_dot(z, h.normal) < -tol for h in P.halfspaces):
                continue
            if not any(np.allclose(z, w, atol=1e-7) for w in found):
                found.append(z)
    return found


def restrict_to_boundary(P: Polytope) -> BoundaryPolytope:
    if P.dim < 1:
        raise ValueError("need dim >= 1")
    return BoundaryPolytope(P.dim - 1, P.halfspaces, P)


def split(P: Polytope, h: HalfSpace):
    """(P cap h, P cap h^c) where h^c has normal -e."""
    return P.with_halfspace(h), P.with_halfspace(h.complement())


def empty_interior(P: Polytope) -> bool:
    """True if P has no point on the upper sheet (hence none on the lower)."""
    return face_sample(P, ()) is None


def whole_space(n: int) -> Polytope:
    return Polytope(n, ())


def halfspace_from_upper_model(center, radius=None, inside=True, n=None):
    """Half-space from its half-space-model picture.

    ``center`` (a point of the plane u0 = 0, given by its n-1 coordinates)
    with ``radius`` describes a ball; ``inside`` selects the ball interior.
    With ``radius=None`` pass ``center=(normal, offset)`` for the vertical
    wall {w : normal.w >= offset}.
    """
    if radius is None:
        normal, offset = center
        normal = np.asarray(normal, float)
        a, b, c = 0.0, normal, -offset
    else:
        w0 = np.asarray(center, float)
        sgn = 1.0 if inside else -1.0
        # q = -a|u|^2 + b.w + c with q >= 0 inside the ball
        a, b, c = sgn, 2 * sgn * w0, sgn * (radius ** 2 - w0 @ w0)
    # invert a = e0 + en, b_j = 4 e_j, c = 4 (en - e0)
    en = (a + c / 4.0) / 2.0
    e0 = (a - c / 4.0) / 2.0
    e = np.concatenate(([e0], np.asarray(b, float) / 4.0, [en]))
    q = minkowski_dot(e, e)
    if q <= 0:
        raise ValueError("degenerate ball")
    return HalfSpace(e / math.sqrt(q))
