"""Double de Sitter space: duality with DH^n and embeddings of R^{p,q}.

For q = 1 the target quadric is -y0^2 + y1^2 + ... + yn^2 = 1 (y0 timelike);
for q >= 2 it is y0^2 + ... + yp^2 - y_{p+1}^2 - ... - y_{p+q}^2 = 1 with y0
spacelike.  Either way 1/(y0 + y_{p+q}) = x_{p+q}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OnBoundary
from .minkowski import AmbientVector, Tag, minkowski_dot

QUADRIC_TOL = 1e-10
JACOBIAN_STEP = 1e-4


@dataclass(frozen=True, eq=False)
class DeSitterPoint:
    coords: np.ndarray
    tag: Tag = Tag.PLUS

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        if abs(minkowski_dot(c, c) - 1.0) > QUADRIC_TOL:
            raise ValueError("de Sitter points satisfy e.e = 1")
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "tag", Tag(self.tag))

    @classmethod
    def normalized(cls, v, tag: Tag = Tag.PLUS) -> "DeSitterPoint":
        v = np.asarray(v, float)
        q = minkowski_dot(v, v)
        if q <= 0:
            raise ValueError("need a spacelike vector")
        return cls(v / np.sqrt(q), tag)


@dataclass(frozen=True)
class SignatureSpace:
    p: int
    q: int
    sign: Tag = Tag.PLUS

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("need p, q >= 1")

    def metric(self, x_last: float) -> np.ndarray:
        """The conformally rescaled metric at a point with x_{p+q} = x_last."""
        return int(self.sign) * source_metric(self.p, self.q) / x_last ** 2


def dual_halfspace_contains(x: AmbientVector, e: DeSitterPoint, tol: float = 0.0) -> bool:
    """Is e in the half-space of DS^n_1 determined by the non-ideal point x?"""
    if abs(minkowski_dot(x.coords, x.coords)) < 1e-12 * max(1.0, float(x.coords @ x.coords)):
        raise ValueError("x must not be ideal")
    return int(x.tag) * int(e.tag) * minkowski_dot(x.coords, e.coords) >= -tol


def antipodes(e: DeSitterPoint):
    """(spacelike antipode, timelike antipode)."""
    flip = Tag.MINUS if e.tag is Tag.PLUS else Tag.PLUS
    return DeSitterPoint(-e.coords, e.tag), DeSitterPoint(-e.coords, flip)


def source_metric(p: int, q: int) -> np.ndarray:
    return np.diag([1.0] * p + [-1.0] * q)


def target_metric(p: int, q: int) -> np.ndarray:
    if q == 1:
        return np.diag([-1.0] + [1.0] * p + [1.0])
    return np.diag([1.0] * (p + 1) + [-1.0] * q)


def embed_minkowski(x, p: int, q: int, with_tag: bool = False):
    """Isometric embedding of the half-space x_{p+q} != 0 of the rescaled R^{p,q}.

    Points with x_{p+q} < 0 land on the negatively metrized copy (MINUS tag).
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != p + q:
        raise ValueError(f"expected {p + q} coordinates")
    t = x[..., -1]
    if np.any(t == 0):
        raise OnBoundary("x_{p+q} = 0 is not in the embedded half-spaces")
    s = np.sum(x[..., :p] ** 2, axis=-1) - np.sum(x[..., p:] ** 2, axis=-1)
    mid = -x[..., :-1] / t[..., None]
    if q == 1:
        y0 = (1 + s) / (2 * t)
        yn = (1 - s) / (2 * t)
    else:
        y0 = (1 - s) / (2 * t)
        yn = (1 + s) / (2 * t)
    y = np.concatenate([y0[..., None], mid, yn[..., None]], axis=-1)
    if with_tag:
        tag = np.where(t > 0, int(Tag.PLUS), int(Tag.MINUS))
        return y, tag
    return y


def quadric_residual(y, p: int, q: int) -> float:
    G = target_metric(p, q)
    y = np.atleast_2d(y)
    return float(np.max(np.abs(np.einsum("ij,jk,ik->i", y, G, y) - 1.0)))


def jacobian(x, p: int, q: int, h: float = JACOBIAN_STEP) -> np.ndarray:
    """Jacobian of embed_minkowski (rows: y, columns: x) by central differences
    at steps h and h/2 combined by one Richardson step."""
    x = np.asarray(x, float)
    step = h * max(1.0, float(np.max(np.abs(x))))
    if abs(x[-1]) <= 4 * step:
        raise OnBoundary("too close to x_{p+q} = 0 for the difference step")

    def central(hh):
        cols = []
        for j in range(x.size):
            d = np.zeros_like(x)
            d[j] = hh
            cols.append((embed_minkowski(x + d, p, q) - embed_minkowski(x - d, p, q)) / (2 * hh))
        return np.column_stack(cols)

    return (4 * central(step / 2) - central(step)) / 3


def pullback_metric_check(x, p: int, q: int, h: float = JACOBIAN_STEP) -> float:
    """max |J^T G_y J - G_x / x_{p+q}^2| at x."""
    x = np.asarray(x, float)
    J = jacobian(x, p, q, h)
    pull = J.T @ target_metric(p, q) @ J
    want = source_metric(p, q) / x[-1] ** 2
    return float(np.max(np.abs(pull - want)))


def conformal_residual(x, p: int, q: int) -> float:
    y = np.atleast_2d(embed_minkowski(x, p, q))
    x = np.atleast_2d(np.asarray(x, float))
    return float(np.max(np.abs(1.0 / (y[:, 0] + y[:, -1]) - x[:, -1])))


def random_points(seed: int, p: int, q: int, count: int = 100, lo: float = 0.25,
                  hi: float = 2.0) -> np.ndarray:
    """Points with |x_{p+q}| in [lo, hi] and either sign."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(-hi, hi, (count, p + q))
    x[:, -1] = rng.choice([-1.0, 1.0], count) * rng.uniform(lo, hi, count)
    return x


# ---------------------------------------------------------------- gluing


@dataclass(frozen=True)
class Region:
    name: str
    image: str
    copy: str            # which copy of R^{p,q} (R or R_-)
    half: int            # sign of x_{p+q}
    sign_before: int     # sign of the metric in (U, L, U_-, L_-) order
    sign_after: int      # after the conformal factor x_{p+q}
    image_side: int      # sign of y0 + y_{p+q} on the image


@dataclass(frozen=True)
class GlueReport:
    p: int
    q: int
    regions: tuple
    boundaries: dict
    topology: str

    @property
    def signs_before(self):
        return tuple(r.sign_before for r in self.regions)

    @property
    def signs_after(self):
        return tuple(r.sign_after for r in self.regions)

    def sample_check(self, seed: int = 0, count: int = 20) -> bool:
        """Embedded samples of each region land on the claimed side of y0 + y_{p+q} = 0."""
        rng = np.random.default_rng(seed)
        ok = True
        for r in self.regions:
            x = rng.uniform(-2, 2, (count, self.p + self.q))
            x[:, -1] = r.half * rng.uniform(0.1, 2.0, count)
            y = embed_minkowski(x, self.p, self.q)
            ok &= bool(np.all(np.sign(y[:, 0] + y[:, -1]) == r.image_side))
        return ok


def glue_topology_report(p: int, q: int) -> GlueReport:
    if p < 1 or q < 1:
        raise ValueError("need p, q >= 1")
    regions = (
        Region("U", "V+", "R", +1, +1, +1, +1),
        Region("L", "V-_-", "R", -1, -1, +1, -1),
        Region("U_-", "V+_-", "R_-", +1, -1, -1, +1),
        Region("L_-", "V-", "R_-", -1, +1, -1, -1),
    )
    boundaries = {
        "Y": "y0 + y_{p+q} = 0 in the positive quadric; glues V+ to V-",
        "Y_-": "y0 + y_{p+q} = 0 in the negative quadric; glues V+_- to V-_-",
        "M": "preimage of Y; glues U from the top to L_- from the bottom",
        "M_-": "preimage of Y_-; glues U_- from the top to L from the bottom",
    }
    # the glued space is the double of the quadric in R^{p+1,q}
    return GlueReport(p, q, regions, boundaries, f"S^{p} x S^{q}")
