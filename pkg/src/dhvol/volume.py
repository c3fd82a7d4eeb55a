"""Regularized volumes, their eps -> 0 limit, and closed forms.

mu_u_eps integrates (u0 - eps i)^(-n) over the half-space-model image of P.
The u0 direction is done exactly (see ``region``); what remains is adaptive
quadrature in 0, 1 or 2 variables, so n <= 3.  ``volume`` evaluates a ladder
of eps values and extrapolates.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NonConverged, Unsupported
from .extrapolation import EpsilonExtrapolator
from .minkowski import LorentzTransform, minkowski_dot, rotate_to
from .polytope import (
    HalfSpace, Polytope, PolytopeKind, contains_infinity, dihedral_angle,
    empty_interior, restrict_to_face,
)
from .quadrature import QuadratureConfig, integrate, smoothstep_pieces
from .region import UpperRegion

MAX_QUADRATURE_DIM = 3


@dataclass(frozen=True)
class EpsilonLadder:
    eps0: float = 0.2
    ratio: float = 0.5
    count: int = 8

    def __post_init__(self):
        if not self.eps0 > 0:
            raise ValueError("eps0 must be positive")
        if not 0 < self.ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        if self.count < 4:
            raise ValueError("count must be at least 4")

    @property
    def values(self) -> np.ndarray:
        return self.eps0 * self.ratio ** np.arange(self.count)


@dataclass
class ComplexVolume:
    value: complex
    samples: list = field(default_factory=list)
    fit_residual: float = 0.0
    method: str = "ClosedForm"
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "value": [float(self.value.real), float(self.value.imag)],
            "samples": [[float(e), float(v.real), float(v.imag)] for e, v in self.samples],
            "residual": float(self.fit_residual),
            "method": self.method,
        }


# ------------------------------------------------------------------ kernels


def sym_kernel(n: int, eps: float, x):
    """Integral of (u - eps i)^(-n) over [-x, x], x >= 0."""
    x = np.asarray(x, dtype=float)
    if n == 1:
        return 2j * np.arctan2(x, eps)
    r = np.hypot(x, eps)
    psi = np.arctan2(eps, x)
    if n % 2 == 0:
        return (2.0 / (1 - n)) * r ** (1 - n) * np.cos((n - 1) * psi) + 0j
    return (2j / (1 - n)) * r ** (1 - n) * np.sin((n - 1) * psi)


def antiderivative(n: int, eps: float, u):
    """A primitive of (u - eps i)^(-n), continuous along the real axis."""
    z = np.asarray(u, dtype=float) - 1j * eps
    if n == 1:
        return np.log(z)
    return z ** (1 - n) / (1 - n)


def _section_integrand(region: UpperRegion, eps: float, part: str):
    n = region.n

    def f(W):
        A, B, ok = region.section(W)
        out = np.zeros(A.shape, dtype=complex)
        if not np.any(ok):
            return out
        A, B = A[ok], B[ok]
        if part == "sym":
            v = sym_kernel(n, eps, B) - sym_kernel(n, eps, A)
        else:
            F = lambda u: antiderivative(n, eps, u)  # noqa: E731
            up = F(B) - F(A)
            lo = F(-A) - F(-B)
            v = {"upper": up, "lower": lo, "raw": up + lo}[part]
        out[ok] = v
        return out

    return f


def _kw(cfg):
    return dict(rule=cfg.rule, max_depth=cfg.max_depth, max_rounds=cfg.max_rounds,
                rel_tol=cfg.rel_tol, strict=False)


def _line_integral(region, f, p, d, tol, cfg):
    ts = region.line_breaks(p, d)
    if ts is None or ts.size < 2:
        return 0j, 0.0
    mids = 0.5 * (ts[:-1] + ts[1:])
    _, _, ok = region.section(p[None, :] + mids[:, None] * d[None, :])
    total, err = [], 0.0
    span = ts[-1] - ts[0]
    for k in np.flatnonzero(ok):
        g = lambda t: f(p[None, :] + t[:, None] * d[None, :])  # noqa: E731
        v, e = smoothstep_pieces(g, ts[k:k + 2], tol * max((ts[k + 1] - ts[k]) / span, 1e-3),
                                 **_kw(cfg))
        total.append(v)
        err += e
    return complex(math.fsum(v.real for v in total), math.fsum(v.imag for v in total)), err


def _check(v, err, cfg, factor=100.0):
    if err > factor * max(cfg.abs_tol, cfg.rel_tol * abs(v)):
        raise NonConverged(f"quadrature error {err:.3e} exceeds the budget", partial=v)


def mu_u_eps(P: Polytope, eps: float, cfg: QuadratureConfig | None = None,
             part: str = "sym") -> complex:
    """mu_{u,eps}(P) in the embedding given by the normals of P.

    ``part`` selects what is integrated over each vertical section:
    "sym" uses the exact real/imaginary closed form of the full section,
    "raw" the same quantity assembled from complex primitives, and
    "upper"/"lower" only the u0 > 0 / u0 < 0 halves (P_+ and P_-).
    """
    cfg = cfg or QuadratureConfig()
    if eps == 0:
        raise ValueError("eps must be nonzero")
    if part == "sym" and eps < 0:
        raise ValueError("sym kernel expects eps > 0")
    n = P.dim
    if n < 1:
        raise ValueError("mu_u_eps needs n >= 1")
    if n > MAX_QUADRATURE_DIM:
        raise Unsupported(f"quadrature is capped at n <= {MAX_QUADRATURE_DIM}")
    if P.m == 0:
        from .errors import PointAtInfinityInPolytope
        raise PointAtInfinityInPolytope("the whole space contains the point at infinity")
    region = UpperRegion.from_polytope(P)
    f = _section_integrand(region, eps, part)
    if n == 1:
        return complex(f(np.zeros((1, 0)))[0])
    if n == 2:
        v, err = _line_integral(region, f, np.zeros(1), np.ones(1), cfg.abs_tol, cfg)
        _check(v, err, cfg)
        return v
    box = region.bounding_box()
    if box is None:
        return 0j
    x0, x1 = float(box[0][0]), float(box[1][0])
    pad = cfg.bounding_box_pad
    x0, x1 = x0 - pad, x1 + pad
    xs = sorted({x0, x1, *[x for x in region.plane_breaks() if x0 < x < x1]})
    inner_tol = 0.2 * cfg.abs_tol / max(x1 - x0, 1e-300)
    d = np.array([0.0, 1.0])

    def outer(u1):
        return np.array([_line_integral(region, f, np.array([x, 0.0]), d, inner_tol, cfg)[0]
                         for x in np.atleast_1d(u1)])

    v, err = smoothstep_pieces(outer, np.array(xs), 0.5 * cfg.abs_tol, **_kw(cfg))
    _check(v, err, cfg)
    return v


# --------------------------------------------------------- hemisphere model


def _halfspace_rows(P: Polytope):
    e = P.normals
    return e[:, 1:], e[:, 0]


def mu_h_eps(P: Polytope, eps: float, r: float = 1.0, variant: bool = False,
             cfg: QuadratureConfig | None = None) -> complex:
    """Hemisphere-model regularized volume on the sphere of radius r.

    plain:   integral of dsigma / (x0 - eps i)^n
    variant: integral of dsigma * x0 / (x0 - eps i)^(n+1)
    where dsigma is the Euclidean area element of S^n_r.  Implemented for
    n <= 2.
    """
    cfg = cfg or QuadratureConfig()
    n = P.dim
    if r <= 0 or eps == 0:
        raise ValueError("need r > 0 and eps != 0")
    if n == 0:
        return complex(2.0 * r * r / (r * r + eps * eps)) if variant else 2 + 0j
    D, off = _halfspace_rows(P)
    if n == 1:
        return _mu_h_circle(D[:, 0], off, eps, r, variant, cfg)
    if n == 2:
        return _mu_h_sphere(D, off, eps, r, variant, cfg)
    raise Unsupported("hemisphere quadrature is implemented for n <= 2")


def _mu_h_circle(d, off, eps, r, variant, cfg):
    # points r (cos t, sin t); half-space test: sin(t) d_k >= off_k
    ts = [-math.pi, -math.pi / 2, 0.0, math.pi / 2, math.pi]
    for dk, ok in zip(d, off):
        s = ok / dk
        if abs(s) <= 1:
            a = math.asin(s)
            ts.extend([a, math.copysign(math.pi, a) - a if a != 0 else math.pi])
    ts = np.array(sorted({(t + math.pi) % (2 * math.pi) - math.pi for t in ts} | {math.pi}))
    mids = 0.5 * (ts[:-1] + ts[1:])
    inside = np.all(np.sin(mids)[:, None] * d[None, :] >= off[None, :], axis=1)

    def f(t):
        x0 = r * np.cos(t)
        if variant:
            return r * x0 / (x0 - 1j * eps) ** 2
        return r / (x0 - 1j * eps)

    total = []
    for k in np.flatnonzero(inside):
        v, _ = smoothstep_pieces(f, ts[k:k + 2], cfg.abs_tol / 4, **_kw(cfg))
        total.append(v)
    return complex(math.fsum(v.real for v in total), math.fsum(v.imag for v in total))


def _mu_h_sphere(D, off, eps, r, variant, cfg):
    # Archimedes: dsigma = r dc dphi with c = x0, so each direction phi
    # contributes r * (kernel(B) - kernel(A)) over A <= |c| <= B.
    def section(phi):
        om = np.stack([np.cos(phi), np.sin(phi)], axis=1)
        proj = om @ D.T                      # (N, m)
        bound = r * off[None, :]
        lo = np.zeros(phi.shape)
        hi = np.full(phi.shape, r)
        ok = np.ones(phi.shape, dtype=bool)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = bound / proj
        pos, neg = proj > 1e-300, proj < -1e-300
        lo = np.maximum(lo, np.max(np.where(pos, ratio, -np.inf), axis=1))
        hi = np.minimum(hi, np.min(np.where(neg, ratio, np.inf), axis=1))
        ok &= np.all(~(~pos & ~neg) | (bound <= 0), axis=1)
        ok &= lo <= hi
        A = np.sqrt(np.clip(r * r - hi * hi, 0, None))
        B = np.sqrt(np.clip(r * r - lo * lo, 0, None))
        return A, B, ok

    def kern(x):
        v = sym_kernel(2, eps, x)
        if variant:
            v = v + 1j * eps * sym_kernel(3, eps, x)
        return r * v

    def f(phi):
        A, B, ok = section(phi)
        out = np.zeros(phi.shape, dtype=complex)
        out[ok] = kern(B[ok]) - kern(A[ok])
        return out

    ang = [0.0, 2 * math.pi]
    m = D.shape[0]
    rows = [(D[k], r * off[k]) for k in range(m)]
    for dk, ok_ in rows:
        ang.append(math.atan2(dk[0], -dk[1]))          # ray parallel to the line
        ang.append(math.atan2(-dk[0], dk[1]))
        nn = dk @ dk
        foot = ok_ / nn * dk
        h2 = r * r - foot @ foot
        if h2 >= 0:
            t = np.array([-dk[1], dk[0]]) / math.sqrt(nn)
            for s in (1, -1):
                p = foot + s * math.sqrt(h2) * t
                ang.append(math.atan2(p[1], p[0]))
    for (d1, o1), (d2, o2) in itertools.combinations(rows, 2):
        M = np.array([d1, d2])
        if abs(np.linalg.det(M)) > 1e-14:
            p = np.linalg.solve(M, [o1, o2])
            ang.append(math.atan2(p[1], p[0]))
    ang = np.array(sorted({a % (2 * math.pi) for a in ang} | {2 * math.pi}))
    mids = 0.5 * (ang[:-1] + ang[1:])
    _, _, okm = section(mids)
    total = []
    for k in np.flatnonzero(okm):
        v, _ = smoothstep_pieces(f, ang[k:k + 2], cfg.abs_tol / 4, **_kw(cfg))
        total.append(v)
    return complex(math.fsum(v.real for v in total), math.fsum(v.imag for v in total))


# ------------------------------------------------------------ extrapolation


def normalizing_transform(P: Polytope) -> LorentzTransform:
    """Isometry placing infinity at the point deepest outside one half-space.

    That half-space becomes the ball |u| <= 2, so the image of P is bounded.
    """
    if P.m == 0:
        raise ValueError("the whole space has no outside point")
    e = P.normals
    sp = np.linalg.norm(e[:, 1:], axis=1)
    k = int(np.argmin(-e[:, 0] - sp))
    n = P.dim
    R = np.eye(n + 1)
    target = np.zeros(n)
    target[-1] = 1.0
    R[1:, 1:] = rotate_to(e[k, 1:] / sp[k], target)
    beta = math.atanh(-e[k, 0] / sp[k])
    Bm = np.eye(n + 1)
    Bm[0, 0] = Bm[n, n] = math.cosh(beta)
    Bm[0, n] = Bm[n, 0] = math.sinh(beta)
    return LorentzTransform(Bm @ R)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("DHVOL_THREADS", "1")))
    except ValueError:
        return 1


def regularized_samples(P: Polytope, eps_values, cfg: QuadratureConfig | None = None,
                        normalize: bool = True, part: str = "sym") -> np.ndarray:
    """mu_{u,eps}(P) on a list of eps, splitting the whole space in two."""
    cfg = cfg or QuadratureConfig()
    if P.m == 0:
        h = np.zeros(P.dim + 1)
        h[-1] = 1.0
        halves = [Polytope(P.dim, (HalfSpace(h),), P.kind), Polytope(P.dim, (HalfSpace(-h),), P.kind)]
        return sum(regularized_samples(Q, eps_values, cfg, normalize, part) for Q in halves)
    Q = P.transformed(normalizing_transform(P)) if normalize else P
    jobs = list(eps_values)
    work = lambda e: mu_u_eps(Q, float(e), cfg, part)  # noqa: E731
    nt = min(_threads(), len(jobs))
    if nt > 1:
        with ThreadPoolExecutor(nt) as ex:
            vals = list(ex.map(work, jobs))
    else:
        vals = [work(e) for e in jobs]
    return np.array(vals, dtype=complex)


def extrapolate(eps, values, log_term: bool, abs_tol: float, residual_factor: float = 10.0,
                strict: bool = True) -> ComplexVolume:
    est = EpsilonExtrapolator(degree=3, log_term=log_term).fit(eps, values)
    cv = ComplexVolume(
        value=est.limit_,
        samples=list(zip(map(float, eps), map(complex, values))),
        fit_residual=est.residual_,
        method="Quadrature",
        diagnostics={"log_used": est.log_used_, "log_coef": est.log_coef_,
                     "limit_stderr": est.limit_stderr_, "coef": est.coef_.tolist()},
    )
    if strict and est.residual_ > residual_factor * abs_tol:
        raise NonConverged(f"fit residual {est.residual_:.3e} exceeds {residual_factor}*abs_tol",
                           partial=cv)
    return cv


def volume(P: Polytope, cfg: QuadratureConfig | None = None,
           ladder: EpsilonLadder | None = None, method: str = "quadrature",
           normalize: bool = True, strict: bool = False) -> ComplexVolume:
    """V_n(P).

    ``method`` is "quadrature", "closed_form" (n <= 2 only) or "auto"
    (closed form when available).  Quadrature moves infinity out of P with
    ``normalizing_transform`` unless ``normalize`` is False.
    """
    cfg = cfg or QuadratureConfig()
    ladder = ladder or EpsilonLadder()
    n = P.dim
    if P.kind is PolytopeKind.TYPE2_UPPER:
        return upper_volume(P, cfg, ladder)
    if n == 0:
        return ComplexVolume(2 + 0j)
    if method in ("closed_form", "auto") and n <= 2:
        return ComplexVolume(closed_form_v1(P) if n == 1 else closed_form_v2(P))
    if method == "closed_form":
        raise Unsupported("closed forms exist for n <= 2 only")
    if P.m and empty_interior(P):
        return ComplexVolume(0j)
    eps = ladder.values
    vals = regularized_samples(P, eps, cfg, normalize)
    return extrapolate(eps, vals, log_term=(n % 2 == 0), abs_tol=cfg.abs_tol, strict=strict)


def upper_volume(P: Polytope, cfg: QuadratureConfig | None = None,
                 ladder: EpsilonLadder | None = None) -> ComplexVolume:
    """Hyperbolic volume of a compact P_+ (the u0 > 0 half only)."""
    cfg = cfg or QuadratureConfig()
    ladder = ladder or EpsilonLadder()
    eps = ladder.values
    vals = regularized_samples(P, eps, cfg, normalize=True, part="upper")
    cv = extrapolate(eps, vals, log_term=False, abs_tol=cfg.abs_tol, strict=False)
    return cv


# ------------------------------------------------------------- closed forms


def sphere_volume(n: int) -> float:
    """Volume of the unit n-sphere by the two-step recursion."""
    if n < 0:
        raise ValueError("n must be >= 0")
    v = [2.0, 2 * math.pi]
    for k in range(2, n + 1):
        v.append(2 * math.pi / (k - 1) * v[k - 2])
    return v[n]


def total_volume(n: int) -> complex:
    """V_n of the whole double space: i^n times the sphere volume."""
    return (1j) ** (n % 4) * sphere_volume(n)


def lune_volume(n: int, theta: float) -> complex:
    if n < 2:
        raise ValueError("lunes need n >= 2")
    if not 0 <= theta <= 2 * math.pi:
        raise ValueError("theta must lie in [0, 2 pi]")
    return -theta * total_volume(n - 2) / (n - 1)


def closed_form_v1(P: Polytope) -> complex:
    """pi*i times the number of ideal points (k = +-1) that P contains."""
    if P.dim != 1:
        raise ValueError("closed_form_v1 needs dim 1")
    count = 0
    for s in (1.0, -1.0):
        z = np.array([1.0, s])
        if all(minkowski_dot(z, h.normal) >= -1e-12 for h in P.halfspaces):
            count += 1
    return complex(0.0, math.pi * count)


def _clip_klein(P: Polytope):
    """Klein polygon of P_+ clipped to a box, as (vertices, outgoing edge labels)."""
    pts = [np.array(p, float) for p in ((-2, -2), (2, -2), (2, 2), (-2, 2))]
    labels = [None] * 4
    for idx, h in enumerate(P.halfspaces):
        d, off = h.normal[1:], h.normal[0]
        out_p, out_l = [], []
        k = len(pts)
        for j in range(k):
            p, q, lab = pts[j], pts[(j + 1) % k], labels[j]
            fp, fq = d @ p - off, d @ q - off
            if fp >= 0:
                out_p.append(p)
                out_l.append(lab)
                if fq < 0:
                    out_p.append(p + fp / (fp - fq) * (q - p))
                    out_l.append(idx)
            elif fq >= 0:
                out_p.append(p + fp / (fp - fq) * (q - p))
                out_l.append(lab)
        pts, labels = out_p, out_l
        if len(pts) < 3:
            return [], []
    # drop zero-length edges
    clean_p, clean_l = [], []
    k = len(pts)
    for j in range(k):
        if np.linalg.norm(pts[(j + 1) % k] - pts[j]) > 1e-14:
            clean_p.append(pts[j])
            clean_l.append(labels[j])
    return clean_p, clean_l


def _chord(p, q):
    """Parameter interval of p + t (q - p), t in [0, 1], inside the open unit disk."""
    d = q - p
    a, b, c = d @ d, 2 * p @ d, p @ p - 1.0
    disc = b * b - 4 * a * c
    if disc <= 0:
        return None
    s = math.sqrt(disc)
    t0, t1 = max(0.0, (-b - s) / (2 * a)), min(1.0, (-b + s) / (2 * a))
    return (t0, t1) if t1 - t0 > 1e-12 else None


def polygon_data(P: Polytope):
    """(sides, angles) of P_+ for a 2D polytope, in circular order.

    ``angles[j]`` sits between side j and side j+1; it is 0 when the two
    sides do not meet inside the disk.  Returns None when P_+ is empty.
    """
    pts, labels = _clip_klein(P)
    if not pts:
        return None
    k = len(pts)
    sides = []
    for j in range(k):
        if labels[j] is None:
            continue
        ch = _chord(pts[j], pts[(j + 1) % k])
        if ch is not None:
            sides.append((j, labels[j], ch))
    if not sides:
        # either the whole disk or nothing of it lies in the polygon
        inside = all(h.normal[0] <= 0 for h in P.halfspaces)
        return ([], []) if inside else None
    angles = []
    ms = len(sides)
    for s in range(ms):
        j, lab, (t0, t1) = sides[s]
        j2, lab2, (u0, u1) = sides[(s + 1) % ms]
        meet = ms > 1 and (j2 == (j + 1) % k) and t1 >= 1.0 - 1e-12 and u0 <= 1e-12
        if meet and np.linalg.norm(pts[j2]) < 1.0 - 1e-12:
            angles.append(dihedral_angle(P.halfspaces[lab], P.halfspaces[lab2]))
        else:
            angles.append(0.0)
    return [s[1] for s in sides], angles


def closed_form_v2(P: Polytope) -> complex:
    """2(m - 2) pi - 2 sum(theta) over the sides of P_+ in circular order."""
    if P.dim != 2:
        raise ValueError("closed_form_v2 needs dim 2")
    data = polygon_data(P)
    if data is None:
        return 0j
    sides, angles = data
    return complex(2 * (len(sides) - 2) * math.pi - 2 * math.fsum(angles))


def bound_value(n: int, m: int) -> float:
    return math.factorial(m) / 2.0 ** (m - 1) * sphere_volume(n)


def check_bound(P: Polytope, v, rtol: float = 1e-6) -> bool:
    val = v.value if isinstance(v, ComplexVolume) else complex(v)
    return abs(val) <= bound_value(P.dim, P.m) * (1 + rtol)


def check_parity(P: Polytope, eps: float, cfg: QuadratureConfig | None = None,
                 rtol: float = 1e-8, normalize: bool = True) -> bool:
    """Real for even n, imaginary for odd n, at finite eps.

    Uses the complex primitives of both halves so that nothing forces the
    symmetry except the integrand itself.
    """
    v = regularized_samples(P, [eps], cfg, normalize, part="raw")[0]
    bad = v.imag if P.dim % 2 == 0 else v.real
    return abs(bad) <= rtol * abs(v)


def parity_identity_residual(P: Polytope, eps: float, cfg: QuadratureConfig | None = None,
                             normalize: bool = True) -> float:
    """|mu_eps(P) - mu_eps(P+) - (-1)^n mu_{-eps}(P+)| relative to |mu_eps(P+)|."""
    full = regularized_samples(P, [eps], cfg, normalize, part="sym")[0]
    up = regularized_samples(P, [eps], cfg, normalize, part="upper")[0]
    up_neg = regularized_samples(P, [-eps], cfg, normalize, part="upper")[0]
    return abs(full - up - (-1) ** P.dim * up_neg) / max(abs(up), 1.0)


def face_volume(P: Polytope, generators, cfg=None, ladder=None) -> complex:
    """V_{n-k}(F) of the face on the listed boundaries (0 if it is empty)."""
    R = restrict_to_face(P, generators)
    if R is None or (R.m and empty_interior(R)):
        return 0j
    return volume(R, cfg, ladder, method="auto").value
