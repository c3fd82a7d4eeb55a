"""Coordinate models of the double hyperbolic space and maps between them.

The hyperboloid is the canonical model.  Hemisphere and upper half-space
coordinates cover both sheets at once (the lower sheet lands in x0 < 0);
Klein and Poincare coordinates are double covers and keep the sheet in
``cover``.  Only the hemisphere and half-space densities are ever
integrated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import PointAtInfinity, SingularDensity, Unsupported
from .minkowski import LIGHT_CONE_TOL, AmbientVector, Tag, minkowski_dot

SPHERE_TOL = 1e-10

#: Value of d(x, -x).  The contour around x0 = 0 is taken counterclockwise,
#: which fixes this to +pi*i.
ANTIPODAL_DISTANCE = complex(0.0, math.pi)


class Model(enum.Enum):
    HYPERBOLOID = "Hyperboloid"
    HEMISPHERE = "Hemisphere"
    UPPER_HALF_SPACE = "UpperHalfSpace"
    KLEIN = "Klein"
    POINCARE = "Poincare"


class Cover(enum.IntEnum):
    UPPER = 1
    LOWER = -1


class Path(enum.Enum):
    AUTO = "Auto"
    THROUGH_BOUNDARY = "ThroughBoundary"
    WITHIN_SHEET = "WithinSheet"


@dataclass(frozen=True, eq=False)
class ModelPoint:
    model: Model
    coords: np.ndarray
    cover: Cover = Cover.UPPER
    ideal: bool = False

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "cover", Cover(self.cover))
        if self.model is Model.HEMISPHERE:
            if abs(float(c @ c) - 1.0) > SPHERE_TOL:
                raise ValueError("hemisphere point is not on the unit sphere")
        elif self.model is Model.KLEIN:
            r2 = float(c @ c)
            if (r2 >= 1.0 and not self.ideal) or r2 > 1.0 + SPHERE_TOL:
                raise ValueError("Klein point outside the unit ball")
        elif self.model is Model.HYPERBOLOID and not self.ideal:
            if abs(minkowski_dot(c, c) + 1.0) > 1e-8:
                raise ValueError("hyperboloid point must satisfy x.x = -1")

    def __repr__(self):
        tag = ", ideal" if self.ideal else ""
        return f"ModelPoint({self.model.value}, {self.coords.tolist()}, {self.cover.name}{tag})"


def hyperboloid_point(x) -> ModelPoint:
    """Wrap an AmbientVector (or raw coordinates with x.x = -1)."""
    if isinstance(x, ModelPoint):
        if x.model is not Model.HYPERBOLOID:
            raise ValueError("expected a hyperboloid point")
        return x
    c = x.coords if isinstance(x, AmbientVector) else np.asarray(x, float)
    if c[0] == 0:
        raise ValueError("x0 = 0 is not a point of either sheet")
    return ModelPoint(Model.HYPERBOLOID, c, Cover.UPPER if c[0] > 0 else Cover.LOWER)


def to_ambient(p: ModelPoint) -> AmbientVector:
    """Hyperboloid point as a tagged ambient vector (lower sheet -> MINUS)."""
    h = to_hyperboloid(p)
    return AmbientVector(h.coords, Tag.PLUS if h.cover is Cover.UPPER else Tag.MINUS)


def hyperboloid_to_hemisphere(x) -> ModelPoint:
    p = hyperboloid_point(x)
    c = p.coords
    h = np.concatenate(([1.0], c[1:])) / c[0]
    return ModelPoint(Model.HEMISPHERE, h, p.cover)


def hemisphere_to_hyperboloid(h: ModelPoint) -> ModelPoint:
    c = h.coords
    if c[0] == 0:
        raise PointAtInfinity("equator points are ideal")
    x = np.concatenate(([1.0], c[1:])) / c[0]
    return ModelPoint(Model.HYPERBOLOID, x, Cover.UPPER if c[0] > 0 else Cover.LOWER)


def hemisphere_to_upper_half_space(h: ModelPoint) -> ModelPoint:
    c = h.coords
    d = c[-1] + 1.0
    if abs(d) < 1e-14:
        raise PointAtInfinity("x_n = -1 maps to infinity")
    u = 2.0 * c[:-1] / d
    cover = Cover.UPPER if c[0] >= 0 else Cover.LOWER
    return ModelPoint(Model.UPPER_HALF_SPACE, u, cover, ideal=h.ideal or c[0] == 0)


def upper_half_space_to_hemisphere(u: ModelPoint) -> ModelPoint:
    c = u.coords
    s = float(c @ c)
    h = np.concatenate((4.0 * c, [4.0 - s])) / (4.0 + s)
    h /= np.linalg.norm(h)
    return ModelPoint(Model.HEMISPHERE, h, u.cover, ideal=u.ideal or c[0] == 0)


def upper_half_space_to_hyperboloid(u) -> ModelPoint:
    """Inverse chart; works on both sheets (u0 < 0 is the lower sheet)."""
    c = u.coords if isinstance(u, ModelPoint) else np.asarray(u, float)
    if c[0] == 0:
        raise PointAtInfinity("u0 = 0 is on the ideal boundary")
    s = float(c @ c)
    x = np.concatenate(([4.0 + s], 4.0 * c[1:], [4.0 - s])) / (4.0 * c[0])
    return ModelPoint(Model.HYPERBOLOID, x, Cover.UPPER if c[0] > 0 else Cover.LOWER)


def hyperboloid_to_upper_half_space(x) -> ModelPoint:
    p = hyperboloid_point(x)
    c = p.coords
    s = c[0] + c[-1]
    if abs(s) < 1e-14 * max(1.0, abs(c[0])):
        raise PointAtInfinity("point maps to infinity")
    u = 2.0 * np.concatenate(([1.0], c[1:-1])) / s
    return ModelPoint(Model.UPPER_HALF_SPACE, u, p.cover)


def hyperboloid_to_klein(x) -> ModelPoint:
    p = hyperboloid_point(x)
    c = p.coords
    return ModelPoint(Model.KLEIN, c[1:] / c[0], p.cover)


def klein_to_hyperboloid(k: ModelPoint) -> ModelPoint:
    c = k.coords
    w = 1.0 - float(c @ c)
    if w <= 0:
        raise PointAtInfinity("Klein boundary points are ideal")
    x = np.concatenate(([1.0], c)) / math.sqrt(w)
    return ModelPoint(Model.HYPERBOLOID, x * int(k.cover), k.cover)


def hemisphere_to_poincare(h: ModelPoint) -> ModelPoint:
    """Projection from (-1, 0, ..., 0); the lower hemisphere lands outside the ball."""
    c = h.coords
    if abs(1.0 + c[0]) < 1e-14:
        raise PointAtInfinity("the projection centre has no image")
    return ModelPoint(Model.POINCARE, c[1:] / (1.0 + c[0]), h.cover, ideal=h.ideal)


def poincare_to_hemisphere(p: ModelPoint) -> ModelPoint:
    c = p.coords
    s = float(c @ c)
    h = np.concatenate(([1.0 - s], 2.0 * c)) / (1.0 + s)
    return ModelPoint(Model.HEMISPHERE, h, Cover.UPPER if s <= 1 else Cover.LOWER, ideal=p.ideal)


def to_hyperboloid(p: ModelPoint) -> ModelPoint:
    if p.ideal:
        raise PointAtInfinity("ideal points have no hyperboloid image")
    if p.model is Model.HYPERBOLOID:
        return p
    if p.model is Model.HEMISPHERE:
        return hemisphere_to_hyperboloid(p)
    if p.model is Model.UPPER_HALF_SPACE:
        return upper_half_space_to_hyperboloid(p)
    if p.model is Model.KLEIN:
        return klein_to_hyperboloid(p)
    return hemisphere_to_hyperboloid(poincare_to_hemisphere(p))


def project_ideal(direction, model: Model = Model.HEMISPHERE) -> ModelPoint:
    """Ideal point of a light-like ray.  Future and past rays are identified."""
    v = direction.coords if isinstance(direction, AmbientVector) else np.asarray(direction, float)
    scale = float(np.max(np.abs(v)))
    if scale == 0 or abs(minkowski_dot(v, v)) > LIGHT_CONE_TOL * scale * scale:
        raise ValueError("direction is not a nonzero light-like vector")
    z = v / v[0]
    if model is Model.HYPERBOLOID:
        return ModelPoint(Model.HYPERBOLOID, z, Cover.UPPER, ideal=True)
    h = ModelPoint(Model.HEMISPHERE, np.concatenate(([0.0], z[1:])), Cover.UPPER, ideal=True)
    if model is Model.HEMISPHERE:
        return h
    if model is Model.UPPER_HALF_SPACE:
        return hemisphere_to_upper_half_space(h)
    if model is Model.KLEIN:
        return ModelPoint(Model.KLEIN, z[1:], Cover.UPPER, ideal=True)
    return hemisphere_to_poincare(h)


def geodesic_distance(x: ModelPoint, y: ModelPoint, path: Path = Path.AUTO,
                      reverse: bool = False) -> complex:
    """Complex distance with x.y = -cosh d.

    Same-sheet pairs default to the path inside the sheet (positive on the
    upper sheet, negative on the lower one).  The complementary path through
    the ideal boundary adds or subtracts a full turn 2*pi*i.  Cross-sheet
    pairs always pass the boundary once: pi*i + d(x, -y), or pi*i - d(x, -y)
    when ``reverse`` is set.
    """
    a, b = to_hyperboloid(x), to_hyperboloid(y)
    dot = minkowski_dot(a.coords, b.coords)
    if a.cover is b.cover:
        d0 = math.acosh(max(1.0, -dot))
        if a.cover is Cover.LOWER:
            d0 = -d0
        if path is Path.THROUGH_BOUNDARY:
            return 2j * math.pi - d0
        return complex(d0)
    if path is Path.WITHIN_SHEET:
        raise ValueError("no path inside one sheet joins points of different sheets")
    d0 = math.acosh(max(1.0, dot))
    return ANTIPODAL_DISTANCE - d0 if reverse else ANTIPODAL_DISTANCE + d0


@dataclass(frozen=True)
class MetricDensity:
    value: complex


def metric_density(p: ModelPoint, n: int) -> MetricDensity:
    """Signed density of the unregularized volume element at p."""
    c = p.coords
    if p.model is Model.HYPERBOLOID:
        # the lower sheet carries -ds, so its volume form picks up (-1)^n
        return MetricDensity(complex(1.0 if p.cover is Cover.UPPER else (-1.0) ** n))
    if p.model not in (Model.UPPER_HALF_SPACE, Model.HEMISPHERE):
        raise Unsupported(f"no volume density in the {p.model.value} model")
    x0 = float(c[0])
    if x0 == 0.0:
        raise SingularDensity("x0 = 0 lies on the ideal boundary")
    if p.model is Model.UPPER_HALF_SPACE:
        return MetricDensity(complex(x0 ** -n))
    return MetricDensity(complex(math.copysign(1.0, x0) / x0 ** (n + 1)))


__all__ = [
    "Model", "Cover", "Path", "ModelPoint", "MetricDensity", "ANTIPODAL_DISTANCE",
    "hyperboloid_point", "to_ambient", "to_hyperboloid",
    "hyperboloid_to_hemisphere", "hemisphere_to_hyperboloid",
    "hemisphere_to_upper_half_space", "upper_half_space_to_hemisphere",
    "hyperboloid_to_upper_half_space", "upper_half_space_to_hyperboloid",
    "hyperboloid_to_klein", "klein_to_hyperboloid",
    "hemisphere_to_poincare", "poincare_to_hemisphere",
    "project_ideal", "geodesic_distance", "metric_density",
]
