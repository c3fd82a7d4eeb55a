"""Volumes of polytopes on the ideal boundary of an odd-dimensional space.

A boundary polytope G (the ideal points of a polytope P in DH^{2m+1}) gets
the real volume V_inf(G) = c_2m * V_{2m+1}(P).  For m = 1 there is also a
closed form through the arcs of small circles bounding G on the 2-sphere,
and Moebius maps of R^2 + {inf} act on G through Lorentz lifts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonConverged, Unsupported
from .minkowski import LorentzTransform, minkowski_dot
from .polytope import BoundaryPolytope, HalfSpace, Polytope, empty_interior, restrict_to_boundary
from .quadrature import QuadratureConfig
from .volume import EpsilonLadder, total_volume, volume

IMAG_TOL = 1e-6


@dataclass(frozen=True)
class NormalizationConstant:
    """c_2m = V_2m(DH^2m) / V_{2m+1}(DH^{2m+1})."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")

    @property
    def c2m(self) -> complex:
        return total_volume(2 * self.m) / total_volume(2 * self.m + 1)


def c2m(m: int) -> complex:
    return NormalizationConstant(m).c2m


# ------------------------------------------------------------- Moebius maps
#
# Boundary point w of R^k <-> null ray (A, Y, B) = (1, w, |w|^2) with
# A = (x0 + xn)/2, Y = (x1..x_{n-1}), B = 2 (x0 - xn).  The quadratic form is
# -A B + |Y|^2, and each generator below is linear in (A, Y, B).


def _to_null(n: int) -> np.ndarray:
    C = np.zeros((n + 1, n + 1))
    C[0, 0] = C[0, n] = 0.5
    C[1:n, 1:n] = np.eye(n - 1)
    C[n, 0], C[n, n] = 2.0, -2.0
    return C


def _step_matrix(kind: str, params, k: int) -> np.ndarray:
    K = np.eye(k + 2)
    if kind == "translate":
        t = np.asarray(params, float).reshape(k)
        K[1:k + 1, 0] = t
        K[k + 1, 0] = t @ t
        K[k + 1, 1:k + 1] = 2 * t
    elif kind == "scale":
        lam = float(params)
        if lam <= 0:
            raise ValueError("similarity ratio must be positive")
        K[0, 0], K[k + 1, k + 1] = 1.0 / lam, lam
    elif kind == "rotate":
        O = np.asarray(params, float).reshape(k, k)
        if not np.allclose(O.T @ O, np.eye(k), atol=1e-10):
            raise ValueError("rotation must be orthogonal")
        K[1:k + 1, 1:k + 1] = O
    elif kind == "unit_inversion":
        K[0, 0] = K[k + 1, k + 1] = 0.0
        K[0, k + 1] = K[k + 1, 0] = 1.0
    else:
        raise ValueError(f"unknown Moebius step {kind!r}")
    return K


@dataclass(frozen=True)
class MobiusMap:
    """Composition of Moebius steps on R^k + {inf}, applied left to right."""

    k: int
    steps: tuple = field(default_factory=tuple)

    def then(self, kind: str, params=None) -> "MobiusMap":
        if kind == "invert":
            center, radius = params
            if radius <= 0:
                raise ValueError("inversion radius must be positive")
            c = np.asarray(center, float).reshape(self.k)
            m = self
            for st in (("translate", -c), ("scale", 1.0 / radius), ("unit_inversion", None),
                       ("scale", radius), ("translate", c)):
                m = m.then(*st)
            return m
        if kind == "reflect":
            nrm = np.asarray(params, float).reshape(self.k)
            nrm = nrm / np.linalg.norm(nrm)
            return self.then("rotate", np.eye(self.k) - 2 * np.outer(nrm, nrm))
        _step_matrix(kind, params, self.k)
        return MobiusMap(self.k, self.steps + ((kind, params),))

    @classmethod
    def identity(cls, k: int = 2) -> "MobiusMap":
        return cls(k)

    @classmethod
    def inversion(cls, center, radius: float) -> "MobiusMap":
        c = np.asarray(center, float)
        return cls(c.size).then("invert", (c, radius))

    @classmethod
    def random(cls, seed: int, k: int = 2, inversions: int = 1) -> "MobiusMap":
        rng = np.random.default_rng(seed)
        m = cls(k)
        for _ in range(inversions):
            m = m.then("translate", rng.uniform(-1, 1, k))
            m = m.then("invert", (rng.uniform(-1, 1, k), rng.uniform(0.5, 2.0)))
        q, _ = np.linalg.qr(rng.standard_normal((k, k)))
        return m.then("rotate", q).then("scale", rng.uniform(0.5, 2.0))

    def null_matrix(self) -> np.ndarray:
        K = np.eye(self.k + 2)
        for kind, params in self.steps:
            K = _step_matrix(kind, params, self.k) @ K
        return K

    def lorentz(self) -> LorentzTransform:
        """The isometry of DH^{k+1} extending the map."""
        n = self.k + 1
        C = _to_null(n)
        return LorentzTransform(np.linalg.solve(C, self.null_matrix() @ C))

    def __call__(self, w):
        """Image of boundary points (rows); returns inf rows for the point at infinity."""
        W = np.atleast_2d(np.asarray(w, float))
        Z = np.column_stack([np.ones(len(W)), W, np.sum(W * W, axis=1)])
        Z = Z @ self.null_matrix().T
        with np.errstate(divide="ignore", invalid="ignore"):
            out = Z[:, 1:self.k + 1] / Z[:, :1]
        out[np.abs(Z[:, 0]) < 1e-300] = np.inf
        return out.reshape(np.shape(w)) if np.ndim(w) == 1 else out


def transform_boundary(G: BoundaryPolytope, f: MobiusMap) -> BoundaryPolytope:
    return restrict_to_boundary(G.parent.transformed(f.lorentz()))


# -------------------------------------------------------- boundary helpers


def boundary_from_disks(disks, walls=(), dim: int = 2) -> BoundaryPolytope:
    """G in R^dim + {inf} from disks (center, radius, inside) and walls (normal, offset).

    A wall (normal, offset) keeps {w : normal.w >= offset}.
    """
    from .polytope import halfspace_from_upper_model
    hs = [halfspace_from_upper_model(c, r, inside) for c, r, inside in disks]
    hs += [halfspace_from_upper_model((np.asarray(nm, float), off)) for nm, off in walls]
    return restrict_to_boundary(Polytope(dim + 1, tuple(hs)))


def boundary_from_caps(caps) -> BoundaryPolytope:
    """G on the unit 2-sphere from caps {s : d.s >= h} given as (d, h), |h| < |d|."""
    hs = []
    for d, h in caps:
        d = np.asarray(d, float)
        e = np.concatenate(([h], d))
        hs.append(HalfSpace.from_normal(e / math.sqrt(minkowski_dot(e, e)), tol=np.inf))
    return restrict_to_boundary(Polytope(3, tuple(hs)))


# ----------------------------------------------------------- volumes of G


def v_infty(G: BoundaryPolytope, cfg: QuadratureConfig | None = None,
            ladder: EpsilonLadder | None = None, diagnostics: dict | None = None) -> float:
    """c_2m * V_{2m+1}(parent), through quadrature of the stored parent."""
    P = G.parent
    if P.dim % 2 == 0:
        raise ValueError("boundary volumes live on boundaries of odd-dimensional spaces")
    m = (P.dim - 1) // 2
    if P.m and empty_interior(P):
        return 0.0
    try:
        cv = volume(P, cfg, ladder)
    except NonConverged:
        raise
    v = c2m(m) * cv.value
    if diagnostics is not None:
        diagnostics.update(parent=cv.to_json(), imag=v.imag)
    if abs(v.imag) > IMAG_TOL * max(abs(v), 1.0) and diagnostics is not None:
        diagnostics["imag_warning"] = True
    return float(v.real)


def v_infty_2_polygon(k: int, thetas) -> float:
    """(k - 2) pi - sum(theta) for a disk-like G with k sides."""
    if k < 2:
        raise ValueError("need at least two sides")
    thetas = [float(t) for t in thetas]
    if len(thetas) != k:
        raise ValueError("one angle per side is required")
    return (k - 2) * math.pi - math.fsum(thetas)


@dataclass
class Arc:
    index: int          # generating half-space
    start: np.ndarray   # unit vectors on S^2
    end: np.ndarray
    full: bool = False


def _circle_frame(d, h):
    nd = np.linalg.norm(d)
    c = d / nd
    rho = h / nd
    a = np.cross(c, [1.0, 0, 0] if abs(c[0]) < 0.9 else [0, 1.0, 0])
    a /= np.linalg.norm(a)
    b = np.cross(c, a)
    return c, rho, a, b


def _circle_point(frame, phi):
    c, rho, a, b = frame
    s = math.sqrt(max(0.0, 1 - rho * rho))
    return rho * c + s * (math.cos(phi) * a + math.sin(phi) * b)


def boundary_arcs(G: BoundaryPolytope, tol: float = 1e-10) -> list:
    """Arcs of the small circles that bound G on S^2, oriented with G on the left."""
    if G.dim != 2:
        raise Unsupported("arc data is implemented for G on S^2")
    E = G.parent.normals
    D, H = E[:, 1:], E[:, 0]
    frames = [_circle_frame(D[i], H[i]) for i in range(len(E))]
    arcs = []
    for i, fr in enumerate(frames):
        c, rho, a, b = fr
        s = math.sqrt(max(0.0, 1 - rho * rho))
        phis = []
        for j in range(len(E)):
            if j == i:
                continue
            # D_j . point(phi) = H_j  ->  P cos + Q sin = R
            P_ = s * (D[j] @ a)
            Q_ = s * (D[j] @ b)
            R_ = H[j] - rho * (D[j] @ c)
            amp = math.hypot(P_, Q_)
            if amp < 1e-14 or abs(R_) > amp * (1 + 1e-12):
                continue
            base = math.atan2(Q_, P_)
            delta = math.acos(max(-1.0, min(1.0, R_ / amp)))
            phis += [(base + delta) % (2 * math.pi), (base - delta) % (2 * math.pi)]
        inside = lambda p, skip=i: all(  # noqa: E731
            D[j] @ p - H[j] >= -tol for j in range(len(E)) if j != skip)
        if not phis:
            mid = _circle_point(fr, 0.0)
            if inside(mid):
                arcs.append(Arc(i, mid, mid, full=True))
            continue
        phis = sorted(set(round(p, 14) for p in phis))
        for k, p0 in enumerate(phis):
            p1 = phis[(k + 1) % len(phis)] + (2 * math.pi if k + 1 == len(phis) else 0.0)
            if p1 - p0 < 1e-12:
                continue
            mid = _circle_point(fr, 0.5 * (p0 + p1))
            # strictly inside the other caps, so tangencies do not leak arcs
            if all(D[j] @ mid - H[j] > tol for j in range(len(E)) if j != i):
                arcs.append(Arc(i, _circle_point(fr, p0), _circle_point(fr, p1)))
    return arcs


def boundary_polygon_data(G: BoundaryPolytope, tol: float = 1e-7):
    """Boundary cycles of G as lists of (side index, angle at its end)."""
    arcs = boundary_arcs(G)
    cycles = [[(a.index, None)] for a in arcs if a.full]
    rest = [a for a in arcs if not a.full]
    used = [False] * len(rest)
    hs = G.parent.halfspaces
    for s0 in range(len(rest)):
        if used[s0]:
            continue
        cyc, cur = [], s0
        while not used[cur]:
            used[cur] = True
            arc = rest[cur]
            nxt = min(range(len(rest)), key=lambda j: np.linalg.norm(rest[j].start - arc.end))
            if np.linalg.norm(rest[nxt].start - arc.end) > tol:
                raise ValueError("boundary arcs do not close up")
            c = minkowski_dot(hs[arc.index].normal, hs[rest[nxt].index].normal)
            cyc.append((arc.index, math.acos(max(-1.0, min(1.0, -c)))))
            cur = nxt
        cycles.append(cyc)
    return cycles


def v_infty_2_closed(G: BoundaryPolytope) -> float:
    """Closed-form V_inf,2 of a connected G on S^2.

    -2 pi chi(G) + sum(pi - theta) over the corners, with chi = 2 - (number
    of boundary cycles).  For a single cycle of k corners this is
    v_infty_2_polygon.
    """
    if G.dim != 2:
        raise Unsupported("closed form is for boundaries of DH^3")
    if G.m == 0:
        return -4 * math.pi
    if empty_interior(G.parent):
        return 0.0
    cycles = boundary_polygon_data(G)
    if not cycles:
        return 0.0
    chi = 2 - len(cycles)
    corners = [t for cyc in cycles for _, t in cyc if t is not None]
    return -2 * math.pi * chi + math.fsum(math.pi - t for t in corners)


def mobius_check(G: BoundaryPolytope, f: MobiusMap, cfg: QuadratureConfig | None = None,
                 method: str = "quadrature", ladder: EpsilonLadder | None = None) -> float:
    """|V_inf(G) - V_inf(f G)|."""
    H = transform_boundary(G, f)
    if method == "closed_form":
        return abs(v_infty_2_closed(G) - v_infty_2_closed(H))
    return abs(v_infty(G, cfg, ladder) - v_infty(H, cfg, ladder))


# -------------------------------------------------------- special families


class Special(enum.Enum):
    SPHERICAL = "Spherical"
    DOUBLE_HYPERBOLIC = "DoubleHyperbolic"
    EUCLIDEAN = "Euclidean"
    GENERIC = "Generic"


def _common_point(D, H, tol):
    """A unit s with D s = H for every row, or None."""
    s, *_ = np.linalg.lstsq(D, H, rcond=None)
    _, sv, vt = np.linalg.svd(D)
    rank = int(np.sum(sv > 1e-10))
    cands = [s]
    if rank < D.shape[1]:
        null = vt[rank:]
        if null.shape[0] == 1:
            v = null[0]
            # |s + t v| = 1
            a, b, c = v @ v, 2 * s @ v, s @ s - 1
            disc = b * b - 4 * a * c
            if disc >= 0:
                cands = [s + t * v for t in ((-b + math.sqrt(disc)) / (2 * a),
                                              (-b - math.sqrt(disc)) / (2 * a))]
    for p in cands:
        if abs(np.linalg.norm(p) - 1) < tol and np.max(np.abs(D @ p - H)) < tol:
            return p / np.linalg.norm(p)
    return None


def classify_special(G: BoundaryPolytope, tol: float = 1e-9) -> Special:
    E = G.parent.normals
    if E.shape[0] == 0:
        return Special.SPHERICAL
    D, H = E[:, 1:], E[:, 0]
    if np.all(np.abs(H) < tol):
        return Special.SPHERICAL
    if np.linalg.matrix_rank(D, tol=1e-9) < D.shape[1]:
        return Special.DOUBLE_HYPERBOLIC
    N = _common_point(D, H, 1e-7)
    if N is not None and _isolated(G, N):
        return Special.EUCLIDEAN
    return Special.GENERIC


def _isolated(G, N, r=1e-4, k=24):
    t1 = np.cross(N, [1.0, 0, 0] if abs(N[0]) < 0.9 else [0, 1.0, 0])
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(N, t1)
    for phi in np.linspace(0, 2 * math.pi, k, endpoint=False):
        p = N + r * (math.cos(phi) * t1 + math.sin(phi) * t2)
        if G.contains_direction(p / np.linalg.norm(p), tol=0.0):
            return False
    return True


def _spherical_area(G: BoundaryPolytope) -> float:
    """Area of an intersection of hemispheres: Gauss-Bonnet with geodesic sides."""
    if G.m == 0:
        return 4 * math.pi
    cycles = boundary_polygon_data(G)
    if not cycles:
        return 0.0
    corners = [t for cyc in cycles for _, t in cyc if t is not None]
    return 2 * math.pi * (2 - len(cycles)) - math.fsum(math.pi - t for t in corners)


def v_infty_special(G: BoundaryPolytope) -> float:
    """V_inf,2 on the three structured families."""
    kind = classify_special(G)
    if G.dim != 2:
        raise Unsupported("special families are implemented for m = 1")
    if kind is Special.SPHERICAL:
        return -_spherical_area(G)
    if kind is Special.EUCLIDEAN:
        return 0.0
    if kind is Special.DOUBLE_HYPERBOLIC:
        from .volume import closed_form_v2
        return float(closed_form_v2(_as_dh2(G)).real)
    raise Unsupported("generic boundary polytope has no special formula")


def _as_dh2(G: BoundaryPolytope) -> Polytope:
    """Read G as a polytope of DH^2 with the common perpendicular circle as the equator."""
    E = G.parent.normals
    D, H = E[:, 1:], E[:, 0]
    _, _, vt = np.linalg.svd(D)
    c = vt[-1]
    # coordinates on S^2 with c as the hemisphere axis x0 of DH^2
    basis = np.vstack([c, vt[0], vt[1]])
    hs = []
    for d, h in zip(D, H):
        dd = basis @ d            # dd[0] = 0 by construction
        # hemisphere points are (1, x')/x0, so d'.s' >= h is x.(h, d') >= 0
        e = np.array([h, dd[1], dd[2]])
        hs.append(HalfSpace.from_normal(e / math.sqrt(minkowski_dot(e, e)), tol=np.inf))
    return Polytope(2, tuple(hs))
