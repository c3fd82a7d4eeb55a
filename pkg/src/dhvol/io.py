"""JSON reading and writing of polytopes.

    {"dim": n, "halfspaces": [{"normal": [e0, ..., en]}, ...],
     "kind": "Type1" | "Type2Upper", "boundary": false}

Normals are hyperboloid coordinates; they are normalized to e.e = 1 and
rejected when e.e is further than 1e-6 from 1.
"""

from __future__ import annotations

import json
from pathlib import Path

from .polytope import (
    LOAD_TOL, BoundaryPolytope, HalfSpace, Polytope, PolytopeKind, restrict_to_boundary,
)


class PolytopeFormatError(ValueError):
    pass


def polytope_from_dict(data: dict):
    if not isinstance(data, dict):
        raise PolytopeFormatError("polytope JSON must be an object")
    try:
        dim = int(data["dim"])
        raw = data.get("halfspaces", [])
        kind = PolytopeKind(data.get("kind", PolytopeKind.TYPE1.value))
        boundary = bool(data.get("boundary", False))
    except (KeyError, TypeError, ValueError) as exc:
        raise PolytopeFormatError(f"bad polytope header: {exc}") from exc
    hs = []
    for k, item in enumerate(raw):
        try:
            e = item["normal"] if isinstance(item, dict) else item
            h = HalfSpace.from_normal([float(v) for v in e], tol=LOAD_TOL)
        except (KeyError, TypeError, ValueError) as exc:
            raise PolytopeFormatError(f"half-space {k}: {exc}") from exc
        if h.n != dim:
            raise PolytopeFormatError(f"half-space {k} has dimension {h.n}, expected {dim}")
        hs.append(h)
    P = Polytope(dim, tuple(hs), kind)
    return restrict_to_boundary(P) if boundary else P


def polytope_to_dict(P) -> dict:
    boundary = isinstance(P, BoundaryPolytope)
    base = P.parent if boundary else P
    return {
        "dim": base.dim,
        "halfspaces": [{"normal": h.normal.tolist()} for h in base.halfspaces],
        "kind": base.kind.value,
        "boundary": boundary,
    }


def load_polytope(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise PolytopeFormatError(str(exc)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolytopeFormatError(f"invalid JSON: {exc}") from exc
    return polytope_from_dict(data)


def save_polytope(P, path) -> None:
    Path(path).write_text(json.dumps(polytope_to_dict(P), indent=2) + "\n")
