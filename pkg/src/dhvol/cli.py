"""Command-line front end.

    dhvol volume --in P.json [--max-residual R] | --total --dim N
    dhvol suite [--seed S] [--dim 2|3] [--only NAME]
    dhvol sdf --in P.json --index K [--path rotate|boost|offset]
    dhvol boundary --in G.json [--method quadrature|closed_form|auto]
    dhvol embed --p P --q Q [--samples N]
    dhvol renorm --in P.json

Exit codes: 0 success, 1 usage or input error, 2 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from .errors import DHVolError, IllConditioned, NonConverged
from .io import PolytopeFormatError, load_polytope
from .polytope import BoundaryPolytope, Polytope
from .quadrature import QuadratureConfig
from .volume import ComplexVolume, EpsilonLadder, total_volume, volume

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2
FORMATS = ("json", "csv")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str | None = None
    eps0: float | None = None
    ratio: float | None = None
    count: int | None = None
    tol: float | None = None
    seed: int = 0
    fmt: str = "json"

    def __post_init__(self):
        for name in ("eps0", "ratio", "tol"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise UsageError(f"--{name} must be positive")
        if self.count is not None and self.count <= 0:
            raise UsageError("--count must be positive")

    def ladder(self, default: EpsilonLadder | None = None) -> EpsilonLadder:
        d = default or EpsilonLadder()
        try:
            return EpsilonLadder(self.eps0 or d.eps0, self.ratio or d.ratio, self.count or d.count)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(abs_tol=self.tol) if self.tol else QuadratureConfig()


def _pair(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _emit(out, payload: dict, rows_header, rows, fmt: str):
    if fmt == "json":
        out.write(json.dumps(payload) + "\n")
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(rows_header)
    w.writerows(rows)
    out.write(buf.getvalue())


def _volume_rows(cv: ComplexVolume):
    rows = [["value", "", cv.value.real, cv.value.imag]]
    rows += [["sample", e, v.real, v.imag] for e, v in cv.samples]
    rows.append(["residual", "", cv.fit_residual, ""])
    return rows


def _load(path) -> Polytope | BoundaryPolytope:
    if not path:
        raise UsageError("--in is required")
    return load_polytope(path)


# ------------------------------------------------------------- commands


def cmd_volume(args, rc: RunConfig, out) -> int:
    if args.total:
        if args.dim is None or args.dim < 0:
            raise UsageError("--total needs --dim N >= 0")
        cv = ComplexVolume(total_volume(args.dim))
    else:
        P = _load(rc.input_path)
        if isinstance(P, BoundaryPolytope):
            P = P.parent
        cv = volume(P, rc.quadrature(), rc.ladder(), method=args.method)
        if args.max_residual is not None and cv.fit_residual > args.max_residual:
            raise NonConverged(f"fit residual {cv.fit_residual:.3e} exceeds {args.max_residual:g}")
    _emit(out, cv.to_json(), ["kind", "eps", "re", "im"], _volume_rows(cv), rc.fmt)
    return EXIT_OK


def cmd_suite(args, rc: RunConfig, out) -> int:
    from .suite import run_suite
    try:
        rows = run_suite(rc.seed, args.dim or 2, args.only)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = all(r.passed for r in rows)
    if rc.fmt == "json":
        payload = {"seed": rc.seed, "passed": ok,
                   "rows": [{"check": r.check, "case": r.case, "passed": r.passed,
                             "detail": float(r.detail)} for r in rows]}
        _emit(out, payload, None, None, "json")
    elif rc.fmt == "csv":
        _emit(out, {}, ["check", "case", "passed", "detail"],
              [[r.check, r.case, int(r.passed), float(r.detail)] for r in rows], "csv")
    else:
        for r in rows:
            out.write(f"{'PASS' if r.passed else 'FAIL'}  {r.check:<11} {r.case:<22} {r.detail:.3e}\n")
        out.write(f"{sum(r.passed for r in rows)}/{len(rows)} passed\n")
    return EXIT_OK if ok else EXIT_NONCONVERGED


def cmd_sdf(args, rc: RunConfig, out) -> int:
    from .schlafli import DeformationPath, klein_offset_path, sdf_check
    P = _load(rc.input_path)
    if isinstance(P, BoundaryPolytope):
        P = P.parent
    if not 0 <= args.index < P.m:
        raise UsageError(f"--index must lie in [0, {P.m})")
    step = args.step or (1e-4 if P.dim == 2 else 0.05)
    if args.path == "rotate":
        path = DeformationPath.rotating(P, args.index, axes=(P.dim - 1, P.dim), step=step)
    elif args.path == "boost":
        path = DeformationPath.boosting(P, args.index, step=step)
    else:
        path = klein_offset_path(P, args.index, step=step)
    rep = sdf_check(path, rc.quadrature(), method=args.method, ladder=rc.ladder())
    rows = [["lhs", *_pair(rep.lhs)], ["rhs", *_pair(rep.rhs)], ["rel_err", rep.rel_err, ""]]
    _emit(out, rep.to_json(), ["quantity", "re", "im"], rows, rc.fmt)
    return EXIT_OK


def cmd_boundary(args, rc: RunConfig, out) -> int:
    from .boundary import v_infty, v_infty_2_closed
    from .polytope import restrict_to_boundary
    G = _load(rc.input_path)
    if isinstance(G, Polytope):
        G = restrict_to_boundary(G)
    diag = {}
    method = args.method
    if method == "auto":
        method = "closed_form" if G.dim == 2 else "quadrature"
    if method == "closed_form":
        if G.dim != 2:
            raise UsageError("the closed form needs G on the boundary of DH^3")
        v = v_infty_2_closed(G)
    else:
        v = v_infty(G, rc.quadrature(), rc.ladder(), diagnostics=diag)
    payload = {"v_infty": v, "method": method}
    if "imag" in diag:
        payload["imag_residue"] = diag["imag"]
    _emit(out, payload, ["quantity", "value"], [["v_infty", v]], rc.fmt)
    return EXIT_OK


def cmd_embed(args, rc: RunConfig, out) -> int:
    from . import desitter
    if args.p < 1 or args.q < 1 or args.samples < 1:
        raise UsageError("--p, --q and --samples must be positive")
    x = desitter.random_points(rc.seed, args.p, args.q, args.samples)
    y = desitter.embed_minkowski(x, args.p, args.q)
    quad = desitter.quadric_residual(y, args.p, args.q)
    pull = max(desitter.pullback_metric_check(xi, args.p, args.q) for xi in x)
    conf = desitter.conformal_residual(x, args.p, args.q)
    payload = {"p": args.p, "q": args.q, "samples": args.samples, "quadric_residual": quad,
               "pullback_residual": pull, "conformal_residual": conf,
               "max_residual": max(quad, pull, conf)}
    rows = [[k, v] for k, v in payload.items()]
    _emit(out, payload, ["quantity", "value"], rows, rc.fmt)
    return EXIT_OK


def cmd_renorm(args, rc: RunConfig, out) -> int:
    from .renorm import RENORM_LADDER, fit_asymptotics
    P = _load(rc.input_path)
    if isinstance(P, BoundaryPolytope):
        P = P.parent
    fit = fit_asymptotics(P, ladder=rc.ladder(RENORM_LADDER), cfg=rc.quadrature())
    rows = [["constant", *_pair(fit.constant)], ["log_coeff", *_pair(fit.log_coeff)]]
    rows += [[k, *_pair(v)] for k, v in fit.coefficients.items()]
    rows.append(["residual", fit.residual, ""])
    _emit(out, fit.to_json(), ["term", "re", "im"], rows, rc.fmt)
    return EXIT_OK


COMMANDS = {
    "volume": cmd_volume, "suite": cmd_suite, "sdf": cmd_sdf,
    "boundary": cmd_boundary, "embed": cmd_embed, "renorm": cmd_renorm,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="input_path", metavar="PATH")
    common.add_argument("--eps0", type=float)
    common.add_argument("--ratio", type=float)
    common.add_argument("--count", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", dest="fmt", choices=FORMATS)

    p = _Parser(prog="dhvol", description="Volumes in the double hyperbolic space.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("volume", parents=[common], help="V_n(P) of a polytope")
    s.add_argument("--total", action="store_true", help="closed-form volume of the whole space")
    s.add_argument("--dim", type=int)
    s.add_argument("--method", choices=("auto", "quadrature", "closed_form"), default="auto")
    s.add_argument("--max-residual", type=float,
                   help="exit 2 when the extrapolation residual exceeds this")

    s = sub.add_parser("suite", parents=[common], help="seeded invariant suite")
    s.add_argument("--dim", type=int, choices=(2, 3))
    s.add_argument("--only")

    s = sub.add_parser("sdf", parents=[common], help="Schlafli formula along a path")
    s.add_argument("--index", type=int, default=0)
    s.add_argument("--path", choices=("rotate", "boost", "offset"), default="offset")
    s.add_argument("--step", type=float)
    s.add_argument("--method", choices=("auto", "quadrature", "closed_form"), default="auto")

    s = sub.add_parser("boundary", parents=[common], help="V_inf,2m of a boundary polytope")
    s.add_argument("--method", choices=("auto", "quadrature", "closed_form"), default="auto")

    s = sub.add_parser("embed", parents=[common], help="de Sitter embedding residuals")
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--q", type=int, default=1)
    s.add_argument("--samples", type=int, default=100)

    sub.add_parser("renorm", parents=[common], help="asymptotic fit of mu_u on P_+")
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        fmt = args.fmt or ("table" if args.command == "suite" else "json")
        rc = RunConfig(args.command, args.input_path, args.eps0, args.ratio, args.count,
                       args.tol, args.seed, fmt)
        return COMMANDS[args.command](args, rc, out)
    except UsageError as exc:
        err.write(f"dhvol: error: {exc}\n")
        return EXIT_USAGE
    except PolytopeFormatError as exc:
        err.write(f"dhvol: bad input: {exc}\n")
        return EXIT_USAGE
    except (NonConverged, IllConditioned) as exc:
        err.write(f"dhvol: not converged: {exc}\n")
        return EXIT_NONCONVERGED
    except (DHVolError, ValueError) as exc:
        err.write(f"dhvol: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
