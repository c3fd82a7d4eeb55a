"""Numerical checks of the Schlafli differential formula in DH^n.

    kappa dV_n(P) = 1/(n-1) sum_F V_{n-2}(F) dtheta_F,   kappa = -1,

summed over codimension-2 faces F.  Derivatives along a deformation path
are central differences with one Richardson step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CombinatorialChange, IdealVertexOnPath, TangentSlice
from .minkowski import boost, minkowski_dot, rotation
from .polytope import HalfSpace, Polytope, dihedral_angle, faces, ideal_vertices, restrict_to_face
from .quadrature import QuadratureConfig, smoothstep_pieces
from .region import UpperRegion
from .volume import (
    EpsilonLadder, _kw, _line_integral, _section_integrand, face_volume, mu_u_eps, volume,
)

KAPPA = -1.0
DEFAULT_STEP = 1e-4
REL_FLOOR = 1e-12


@dataclass(frozen=True)
class DeformationPath:
    """P with half-space ``moving_index`` replaced by e(s)."""

    polytope: Polytope
    moving_index: int
    normal_path: Callable[[float], np.ndarray]
    step: float = DEFAULT_STEP
    s0: float = 0.0

    def at(self, s: float) -> Polytope:
        e = np.asarray(self.normal_path(s), float)
        hs = list(self.polytope.halfspaces)
        hs[self.moving_index] = HalfSpace.from_normal(e, tol=np.inf)
        return Polytope(self.polytope.dim, tuple(hs), self.polytope.kind)

    @classmethod
    def rotating(cls, P: Polytope, index: int, axes=(1, 2), rate: float = 1.0, **kw):
        """Rotate the moving normal in the spatial plane of ``axes``."""
        e0 = P.halfspaces[index].normal
        n = P.dim

        def path(s):
            R = np.eye(n)
            i, j = axes[0] - 1, axes[1] - 1
            c, sn = math.cos(rate * s), math.sin(rate * s)
            R[i, i], R[i, j], R[j, i], R[j, j] = c, -sn, sn, c
            return rotation(R).matrix @ e0

        return cls(P, index, path, **kw)

    @classmethod
    def boosting(cls, P: Polytope, index: int, axis: int = 1, rate: float = 1.0, **kw):
        """Push the moving wall along a boost."""
        e0 = P.halfspaces[index].normal
        return cls(P, index, lambda s: boost(P.dim, axis, rate * s).matrix @ e0, **kw)


@dataclass
class SDFReport:
    lhs: complex
    rhs: complex
    rel_err: float
    faces: tuple = ()

    def to_json(self) -> dict:
        return {"lhs": [self.lhs.real, self.lhs.imag], "rhs": [self.rhs.real, self.rhs.imag],
                "rel_err": self.rel_err, "faces": [list(f) for f in self.faces]}


def _rel(a: complex, b: complex, floor: float = REL_FLOOR) -> float:
    return abs(a - b) / max(abs(a), abs(b), floor)


def richardson_derivative(f, s: float, h: float):
    """Central difference at h and h/2 combined to O(h^4)."""
    d1 = (f(s + h) - f(s - h)) / (2 * h)
    d2 = (f(s + h / 2) - f(s - h / 2)) / h
    return (4 * d2 - d1) / 3


def _face_keys(P: Polytope, index: int):
    return tuple(sorted(f.generators for f in faces(P, 2) if index in f.generators))


def sdf_check(path: DeformationPath, cfg: QuadratureConfig | None = None,
              method: str = "auto", ladder: EpsilonLadder | None = None) -> SDFReport:
    """Compare -dV/ds with the face sum at ``path.s0``."""
    P0 = path.polytope
    n = P0.dim
    if n < 2:
        raise ValueError("the formula needs n >= 2")
    s, h = path.s0, path.step
    probes = [path.at(s + t) for t in (-h, -h / 2, 0.0, h / 2, h)]
    for Q in probes:
        if ideal_vertices(Q):
            raise IdealVertexOnPath("an ideal vertex appears along the path")
    keys = {_face_keys(Q, path.moving_index) for Q in probes}
    if len(keys) > 1:
        raise CombinatorialChange("codimension-2 faces change along the step")
    F_list = next(iter(keys))

    vol = lambda t: volume(path.at(t), cfg, ladder, method=method).value  # noqa: E731
    lhs = KAPPA * richardson_derivative(vol, s, h)

    P = path.at(s)
    rhs = 0j
    for gen in F_list:
        vF = face_volume(P, gen, cfg, ladder)

        def theta(t, gen=gen):
            Q = path.at(t)
            return dihedral_angle(Q.halfspaces[gen[0]], Q.halfspaces[gen[1]])

        rhs += vF * richardson_derivative(theta, s, h)
    rhs /= n - 1
    return SDFReport(complex(lhs), complex(rhs), _rel(lhs, rhs), F_list)


# ------------------------------------------------------------- sweeps


def _slice_check(region: UpperRegion, t: float, tol: float = 1e-12):
    last = region.n - 2
    for k in range(region.a.size):
        a, b, c = region.a[k], region.b[k], region.c[k]
        if a == 0:
            others = np.delete(b, last)
            if np.all(np.abs(others) < tol) and abs(b[last] * t + c) < tol * max(1.0, abs(t)):
                raise TangentSlice("the slice lies in a vertical wall")
        else:
            ctr = b / (2 * a)
            r2 = c / a + ctr @ ctr
            if r2 > 0 and abs(abs(t - ctr[last]) - math.sqrt(r2)) < 1e-10:
                raise TangentSlice("the slice is tangent to a boundary sphere")


def sweep_derivative_t(P: Polytope, t: float, eps: float, cfg: QuadratureConfig | None = None,
                       part: str = "sym") -> complex:
    """f_eps(t): integral of (u0 - eps i)^(-n) over the slice u_{n-1} = t.

    This is d/dt of mu_{u,eps}(P cap {u_{n-1} <= t}) in the embedding given
    by the normals of P.
    """
    cfg = cfg or QuadratureConfig()
    n = P.dim
    if n < 2:
        raise ValueError("sweeps need n >= 2")
    if n > 3:
        raise ValueError("sweeps are implemented for n <= 3")
    region = UpperRegion.from_polytope(P)
    _slice_check(region, t)
    f = _section_integrand(region, eps, part)
    if n == 2:
        return complex(f(np.array([[t]]))[0])
    v, _ = _line_integral(region, f, np.array([0.0, t]), np.array([1.0, 0.0]), cfg.abs_tol, cfg)
    return v


def sweep_range(P: Polytope):
    """[t0, t1] covered by P along u_{n-1} in the half-space model."""
    box = UpperRegion.from_polytope(P).bounding_box()
    if box is None:
        return None
    return float(box[0][-1]), float(box[1][-1])


def sweep_integral(P: Polytope, eps: float, cfg: QuadratureConfig | None = None) -> complex:
    """Integral of f_eps(t) over the sweep range; equals mu_{u,eps}(P)."""
    cfg = cfg or QuadratureConfig()
    rng = sweep_range(P)
    if rng is None:
        return 0j
    region = UpperRegion.from_polytope(P)
    t0, t1 = rng
    if P.dim == 2:
        brk = region.line_breaks(np.zeros(1), np.ones(1))
    else:
        brk = np.array([t0, t1])
    brk = np.unique(np.clip(np.concatenate([[t0, t1], brk]), t0, t1))

    def g(ts):
        out = []
        for t in np.atleast_1d(ts):
            try:
                out.append(sweep_derivative_t(P, float(t), eps, cfg))
            except TangentSlice:
                out.append(0j)
        return np.array(out)

    v, _ = smoothstep_pieces(g, brk, cfg.abs_tol, **_kw(cfg))
    return v


def cut_below(P: Polytope, t: float) -> Polytope:
    """P cap {u_{n-1} <= t} (a vertical wall in the half-space model)."""
    from .polytope import halfspace_from_upper_model
    nrm = np.zeros(P.dim - 1)
    nrm[-1] = -1.0
    return P.with_halfspace(halfspace_from_upper_model((nrm, -t)))


def sweep_finite_difference(P: Polytope, t: float, eps: float, h: float = 1e-4,
                            cfg: QuadratureConfig | None = None) -> complex:
    mu = lambda s: mu_u_eps(cut_below(P, s), eps, cfg)  # noqa: E731
    return (mu(t + h) - mu(t - h)) / (2 * h)


# ------------------------------------------------------ angle derivatives


def angle_derivative_side(r: float, r_F: float, top: bool) -> float:
    """dtheta_F/dt for a face cut by the moving slice on a sphere of radius r."""
    if r_F <= 0:
        raise ValueError("r_F must be positive")
    if r_F > r * (1 + 1e-12):
        raise ValueError("r_F cannot exceed r")
    return (1.0 if top else -1.0) / r_F


def angle_derivative_radial(r: float, r_F: float, origin_inside: bool) -> float:
    """dtheta_F/dr between the sphere of radius r and a fixed face."""
    if r_F <= 0:
        raise ValueError("r_F must be positive")
    if r_F > r * (1 + 1e-12):
        raise ValueError("r_F cannot exceed r")
    if r_F >= r:
        return 0.0
    return (-1.0 if origin_inside else 1.0) * math.sqrt(r * r - r_F * r_F) / (r * r_F)


def count_sign_changes(values, tol: float = 0.0) -> int:
    s = [np.sign(v) for v in values if abs(v) > tol]
    return int(sum(1 for a, b in zip(s, s[1:]) if a != b))


# ---------------------------------------------------------- stock paths


def lune_path(n: int, theta: float, rate: float = 1.0, step: float = DEFAULT_STEP) -> DeformationPath:
    """Lune of angle theta in DH^n; the second wall rotates in the (x_{n-1}, x_n) plane."""
    e1 = np.zeros(n + 1)
    e1[n] = 1.0
    e2 = np.zeros(n + 1)
    e2[n - 1], e2[n] = math.sin(theta), -math.cos(theta)
    P = Polytope(n, (HalfSpace(e1), HalfSpace(e2)))
    return DeformationPath.rotating(P, 1, axes=(n - 1, n), rate=rate, step=step)


def face_normals_check(P: Polytope) -> bool:
    """All codim-2 faces of P can be restricted (sanity helper for paths)."""
    return all(restrict_to_face(P, f.generators) is not None for f in faces(P, 2))


def klein_offset_path(P: Polytope, index: int, rate: float = 1.0,
                      step: float = DEFAULT_STEP) -> DeformationPath:
    """Translate the moving boundary in Klein coordinates: offset changes at ``rate``."""
    e = P.halfspaces[index].normal
    d = e[1:] / math.sqrt(max(minkowski_dot(e, e) + e[0] ** 2, 1e-300))
    off = e[0] / math.sqrt(max(minkowski_dot(e, e) + e[0] ** 2, 1e-300))

    def path(s):
        return np.concatenate(([off + rate * s], d))

    return DeformationPath(P, index, path, step=step)
