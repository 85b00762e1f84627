"""Command-line front end.

Exit status: 0 on success, 1 on usage, I/O or validation errors, 2 when a
checked identity fails beyond tolerance (the report on stderr names the
identity and the failing instance).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (
    TailRule,
    bental_teboulle,
    complex_cone_duality,
    stewart_oleary,
    truncation_growth,
)
from .exceptions import IdentityViolation, OblixError
from .frames import (
    FrameSystem,
    frame_bounds,
    frame_from_nullspace,
    riesz_compatibility_equivalence,
    riesz_constant,
    nullspace_tail_experiment,
)
from .io import read_json, read_matrix, read_subspace, read_weight, write_csv, write_matrix, write_report
from .linalg import Tolerance, operator_norm, orthonormal_range
from .oblique import distinguished_projection, ljance_ptak_norm, weighted_projection
from .subspace import angle_pair, position_pprime



class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _existing(path):
    p = Path(path)
    if not p.is_file():
        raise argparse.ArgumentTypeError(f"no such file: {path}")
    return p


def _dims(text):
    if ".." in text:
        lo, hi = text.split("..", 1)
        try:
            lo, hi = int(lo), int(hi)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
        if hi < lo:
            raise argparse.ArgumentTypeError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from None


def _tol(args):
    return Tolerance(rel_rank=args.rel_rank, abs_eq=args.abs_eq)


def _tol_fields(tol):
    return {"rel_rank": tol.rel_rank, "abs_eq": tol.abs_eq}


def _require_seed(args):
    if args.samples < 0:
        raise OblixError("--samples must be >= 0")
    if args.samples > 0 and args.seed is None:
        raise OblixError("--seed is required when --samples > 0")


def cmd_angles(args, out):
    tol = _tol(args)
    M, N = read_subspace(args.m, tol), read_subspace(args.n, tol)
    pair = angle_pair(M, N)
    return {
        "friedrichs_cos": pair.friedrichs_cos,
        "dixmier_cos": pair.dixmier_cos,
        "friedrichs_sin": pair.friedrichs_sin,
        "intersection_dim": pair.intersection_dim,
        "position_pprime": position_pprime(M, N),
    }


def cmd_project(args, out):
    tol = _tol(args)
    A = read_matrix(args.a)
    D = read_weight(args.weight)
    if D.kind == "positive_semidefinite":
        P = distinguished_projection(D, orthonormal_range(A, tol), tol)
    else:
        P = weighted_projection(A, D, tol)
    if args.matrix_out:
        write_matrix(P.matrix, args.matrix_out)
    norm = P.norm()
    report = {"norm": norm, "rank": P.range.dim, "weight_kind": D.kind, **_tol_fields(tol)}
    if P.range.dim:
        lp = ljance_ptak_norm(P)
        if abs(lp - norm) > 1e-8 * max(1.0, norm):
            raise IdentityViolation("ljance-ptak", f"||P|| = {norm!r}, angle formula {lp!r}")
        report["ljance_ptak_norm"] = lp
    return report


def cmd_hull(args, out):
    tol = _tol(args)
    A = read_matrix(args.a)
    D = read_weight(args.weight)
    hull = bental_teboulle(A, D, tol)
    target = weighted_projection(A, D, tol).matrix
    err = operator_norm(target - hull.combination())
    if err > 1e-8 * max(1.0, operator_norm(target)):
        raise IdentityViolation("convex-hull-reconstruction", f"error {err!r}")
    return {
        "index_sets": [",".join(str(i) for i in m.index_set) for m in hull.members],
        "weights": [m.weight for m in hull.members],
        "weight_sum": float(np.sum(hull.weights)),
        "reconstruction_error": err,
        **_tol_fields(tol),
    }


def cmd_bounds(args, out):
    _require_seed(args)
    tol = _tol(args)
    S = read_subspace(args.subspace, tol)
    rep = stewart_oleary(S, samples=args.samples, seed=args.seed, tol=tol)
    return {**rep.to_dict(), **_tol_fields(tol)}


def cmd_duality(args, out):
    _require_seed(args)
    tol = _tol(args)
    A = read_matrix(args.a)
    rep = complex_cone_duality(A, args.mu, samples=args.samples, seed=args.seed, tol=tol)
    return {**rep.to_dict(), **_tol_fields(tol)}


def _load_frame(path, tol):
    if path.suffix.lower() != ".csv":
        obj = read_json(path)
        if isinstance(obj, dict) and obj.get("kind") == "nullspace_tail":
            m = obj.get("dim")
            if isinstance(m, bool) or not isinstance(m, int) or m < 2:
                raise OblixError(f"{path}: 'dim' must be an integer >= 2")
            return frame_from_nullspace(TailRule.from_dict(obj).vector(m), tol)
    return FrameSystem(read_matrix(path), tol)


def cmd_frames(args, out):
    tol = _tol(args)
    F = _load_frame(args.frame, tol)
    fb = frame_bounds(F)
    riesz, J = riesz_constant(F)
    eq = riesz_compatibility_equivalence(F)
    if not eq.ok:
        raise IdentityViolation(
            "riesz-constant-bounds",
            f"{eq.riesz_lower!r} <= {eq.riesz_constant!r} <= {eq.riesz_upper!r} fails",
        )
    return {
        "dim": F.dim,
        "size": F.size,
        "lower": fb.lower,
        "upper": fb.upper,
        "riesz_constant": riesz,
        "riesz_witness": list(J.indices),
        "min_gamma": eq.min_gamma,
        "max_cos": eq.max_cos,
        "K": eq.K_nullspace,
        "riesz_lower": eq.riesz_lower,
        "riesz_upper": eq.riesz_upper,
        **_tol_fields(tol),
    }


def cmd_experiment(args, out):
    tol = _tol(args)
    rule = TailRule(args.rule, args.ratio, tuple(args.values or ()))
    if args.kind == "truncation":
        pts = truncation_growth(rule, args.dims, tol)
        rows = [(p.m, p.K, p.min_mI) for p in pts]
        header = ["m", "K", "min_mI"]
    else:
        pts = nullspace_tail_experiment(rule, args.dims, tol)
        rows = [(p.m, p.riesz_constant, p.max_cos, p.K) for p in pts]
        header = ["m", "riesz_constant", "max_cos", "K"]
    write_csv(header, rows, path=args.output, stream=out)
    return None


def build_parser():
    p = _Parser(prog="oblix", description="Scaled projections, subspace angles and frame diagnostics.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--rel-rank", type=float, default=1e-10, help="relative rank cutoff")
    p.add_argument("--abs-eq", type=float, default=1e-8, help="absolute equality tolerance")
    p.add_argument("-o", "--output", type=Path, default=None, help="report file (default stdout)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("angles", help="Friedrichs and Dixmier angles of two subspaces")
    s.add_argument("--m", type=_existing, required=True)
    s.add_argument("--n", type=_existing, required=True)
    s.set_defaults(func=cmd_angles)

    s = sub.add_parser("project", help="scaled projection onto R(A)")
    s.add_argument("--a", type=_existing, required=True)
    s.add_argument("--weight", type=_existing, required=True)
    s.add_argument("--matrix-out", type=Path, default=None)
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("hull", help="convex decomposition into coordinate projections")
    s.add_argument("--a", type=_existing, required=True)
    s.add_argument("--weight", type=_existing, required=True)
    s.set_defaults(func=cmd_hull)

    s = sub.add_parser("bounds", help="supremum of scaled projection norms")
    s.add_argument("--subspace", type=_existing, required=True)
    s.add_argument("--samples", type=int, default=2000)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("duality", help="cone weights on R(A) against its complement")
    s.add_argument("--a", type=_existing, required=True)
    s.add_argument("--mu", type=float, required=True)
    s.add_argument("--samples", type=int, default=500)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=cmd_duality)

    s = sub.add_parser("frames", help="frame bounds and Riesz constant")
    s.add_argument("--frame", type=_existing, required=True)
    s.set_defaults(func=cmd_frames)

    s = sub.add_parser("experiment", help="growth curves over truncation dimension (CSV)")
    s.add_argument("--kind", choices=["truncation", "riesz"], default="truncation")
    s.add_argument("--rule", choices=["geometric", "e1", "finite"], default="geometric")
    s.add_argument("--ratio", type=float, default=0.5)
    s.add_argument("--values", type=float, nargs="+", default=None)
    s.add_argument("--dims", type=_dims, default=list(range(2, 9)))
    s.set_defaults(func=cmd_experiment)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        report = args.func(args, sys.stdout)
        if report is not None:
            write_report({"command": args.command, **report}, path=args.output, stream=sys.stdout)
    except IdentityViolation as exc:
        sys.stderr.write(
            json.dumps(
                {"identity": exc.identity, "error": str(exc), "witness": exc.witness},
                sort_keys=True,
                default=str,
            )
            + "\n"
        )
        return 2
    except (OblixError, OSError, ValueError) as exc:
        sys.stderr.write(f"oblix: error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
