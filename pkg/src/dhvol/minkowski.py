"""Linear algebra on R^{n,1} and its negatively metrized copy.

Vectors carry a tag saying which ambient copy they live in.  The bilinear
form itself ignores the tag; the tag only feeds the sign function ``ell``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch

#: |x.x| below this counts as light-like.
LIGHT_CONE_TOL = 1e-10


class Tag(enum.IntEnum):
    PLUS = 1
    MINUS = -1


class Kind(enum.Enum):
    UPPER_HYPERBOLOID = "UpperHyperboloid"
    LOWER_HYPERBOLOID = "LowerHyperboloid"
    LIGHT_CONE = "LightCone"
    DE_SITTER = "DeSitter"
    OTHER = "Other"


@dataclass(frozen=True, eq=False)
class AmbientVector:
    """A point of R^{n,1} (tag PLUS) or of the negated copy (tag MINUS)."""

    coords: np.ndarray
    tag: Tag = Tag.PLUS

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        if c.size < 2:
            raise DimensionMismatch("ambient vectors need at least 2 coordinates")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite coordinates")
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "tag", Tag(self.tag))

    @property
    def n(self) -> int:
        return self.coords.size - 1

    def __neg__(self) -> "AmbientVector":
        return AmbientVector(-self.coords, Tag(-self.tag))

    def __repr__(self):
        return f"AmbientVector({self.coords.tolist()}, {self.tag.name})"


def eta(n: int) -> np.ndarray:
    """Gram matrix diag(-1, 1, ..., 1) of R^{n,1}."""
    g = np.eye(n + 1)
    g[0, 0] = -1.0
    return g


def _coords(a) -> np.ndarray:
    if isinstance(a, AmbientVector):
        return a.coords
    return np.asarray(a, dtype=float)


def minkowski_dot(a, b) -> float:
    """Return -a0*b0 + sum a_i*b_i.  Accepts AmbientVector or arrays.

    Arrays of shape (..., n+1) are contracted along the last axis.
    """
    x, y = _coords(a), _coords(b)
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatch(f"dimensions {x.shape[-1]} and {y.shape[-1]} differ")
    out = -x[..., 0] * y[..., 0] + np.sum(x[..., 1:] * y[..., 1:], axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def minkowski_norm2(a) -> float:
    return minkowski_dot(a, a)


def classify(x: AmbientVector, tol: float = LIGHT_CONE_TOL) -> Kind:
    """Classify by the sign of x.x and of x0.

    Timelike vectors are not required to be normalized.  A past-pointing
    timelike vector only counts as a lower-sheet point in the MINUS copy.
    """
    q = minkowski_norm2(x)
    if abs(q) < tol:
        return Kind.LIGHT_CONE
    if q > 0:
        return Kind.DE_SITTER
    x0 = x.coords[0]
    if x0 > 0 and x.tag is Tag.PLUS:
        return Kind.UPPER_HYPERBOLOID
    if x0 < 0 and x.tag is Tag.MINUS:
        return Kind.LOWER_HYPERBOLOID
    return Kind.OTHER


def sheet_sign(x: AmbientVector) -> int:
    """The sign function: +1 on the PLUS copy, -1 on the MINUS copy."""
    return int(x.tag)


@dataclass(frozen=True, eq=False)
class LorentzTransform:
    """An element of O(n,1) stored as a matrix acting on column vectors."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch("Lorentz matrix must be square")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 1

    def defect(self) -> float:
        """max |M^T eta M - eta|."""
        g = eta(self.n)
        return float(np.max(np.abs(self.matrix.T @ g @ self.matrix - g)))

    @property
    def orthochronous(self) -> bool:
        return bool(self.matrix[0, 0] > 0)

    def __call__(self, v):
        if isinstance(v, AmbientVector):
            return AmbientVector(self.matrix @ v.coords, v.tag)
        return np.asarray(v, dtype=float) @ self.matrix.T

    def __matmul__(self, other: "LorentzTransform") -> "LorentzTransform":
        return LorentzTransform(self.matrix @ other.matrix)

    def inverse(self) -> "LorentzTransform":
        g = eta(self.n)
        return LorentzTransform(g @ self.matrix.T @ g)


def identity(n: int) -> LorentzTransform:
    return LorentzTransform(np.eye(n + 1))


def boost(n: int, axis: int, rapidity: float) -> LorentzTransform:
    """Boost mixing x0 with x_axis (1 <= axis <= n)."""
    if not 1 <= axis <= n:
        raise ValueError("boost axis out of range")
    m = np.eye(n + 1)
    c, s = np.cosh(rapidity), np.sinh(rapidity)
    m[0, 0] = m[axis, axis] = c
    m[0, axis] = m[axis, 0] = s
    return LorentzTransform(m)


def rotation(spatial: np.ndarray) -> LorentzTransform:
    """Embed an orthogonal n x n matrix acting on x1..xn."""
    r = np.asarray(spatial, dtype=float)
    m = np.eye(r.shape[0] + 1)
    m[1:, 1:] = r
    return LorentzTransform(m)


def random_orthogonal(rng: np.random.Generator, n: int, proper: bool = True) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if proper and np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_lorentz(seed: int, n: int, max_rapidity: float = 1.0) -> LorentzTransform:
    """Orthochronous rotation-boost-rotation, deterministic per seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    r1 = rotation(random_orthogonal(rng, n))
    r2 = rotation(random_orthogonal(rng, n))
    b = boost(n, 1, rng.uniform(-max_rapidity, max_rapidity))
    return r1 @ b @ r2


def rotate_to(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """A proper rotation of R^k taking unit vector u to unit vector v (k >= 2)."""
    u = np.asarray(u, float) / np.linalg.norm(u)
    v = np.asarray(v, float) / np.linalg.norm(v)
    k = u.size
    c = float(np.dot(u, v))
    if k == 1:
        # only a reflection is available on a line
        return np.array([[1.0 if c > 0 else -1.0]])
    if c > 1 - 1e-15:
        return np.eye(k)
    if c < -1 + 1e-15:
        # half turn in a plane containing u
        w = np.zeros(k)
        w[np.argmin(np.abs(u))] = 1.0
        w -= np.dot(w, u) * u
        w /= np.linalg.norm(w)
        return np.eye(k) - 2 * np.outer(u, u) - 2 * np.outer(w, w)
    w = v - c * u
    w /= np.linalg.norm(w)
    s = np.sqrt(max(0.0, 1 - c * c))
    return (np.eye(k) + (c - 1) * (np.outer(u, u) + np.outer(w, w))
            + s * (np.outer(w, u) - np.outer(u, w)))
