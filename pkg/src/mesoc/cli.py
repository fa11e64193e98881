"""Command-line surface: project, check, oracle-compare, solve-portfolio, bench.

Vectors travel as comma-separated decimals with --p/--q giving the split of
the concatenated point (x then u). All verbs emit JSON on stdout; floats are
written with 17 significant digits so output round-trips doubles losslessly.

Exit codes: 0 success, 1 property violation (membership or deviation check
failed), 2 parse error, 3 dimension mismatch, 4 non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from statistics import median

import numpy as np

from ._pava import warmup
from .cones import (
    DimensionError,
    cone_contains,
    cone_violation,
    project_cone,
)
from .oracle import DykstraConfig, dykstra_project, mesoc_pieces
from .portfolio import SolverConfig, read_returns_csv, refine_jstar
from .projection import (
    MesocPoint,
    mesoc_contains,
    mesoc_dual_contains,
    mesoc_dual_violation,
    mesoc_violation,
    project_mesoc,
    project_mesoc_dual,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_DIMENSION = 3
EXIT_NONCONVERGENCE = 4

_VECTOR_CONES = ("monotone", "monotone-dual", "monotone-nonneg", "monotone-nonneg-dual")
_CONE_CHOICES = ("mesoc", "mesoc-dual") + _VECTOR_CONES
_ORACLE_DIM_CAP = 8


class CliError(Exception):
    """Carries the exit code alongside the message."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _scalar_json(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if not np.isfinite(x):
            raise ValueError(f"non-finite value {x!r} in JSON output")
        return format(x, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value)!r}")


def format_json(value, indent: int = 0) -> str:
    """Deterministic JSON with .17g floats (json.dumps cannot control that)."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = ",\n".join(
            f"{inner}{json.dumps(str(k))}: {format_json(v, indent + 1)}"
            for k, v in value.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = ",\n".join(f"{inner}{format_json(v, indent + 1)}" for v in value)
        return "[\n" + items + "\n" + pad + "]"
    return _scalar_json(value)


def _emit(payload) -> None:
    sys.stdout.write(format_json(payload) + "\n")


def parse_vector(text: str) -> np.ndarray:
    """Comma-separated decimals; newlines count as separators too."""
    cells = [c.strip() for c in text.replace("\n", ",").split(",")]
    cells = [c for c in cells if c]
    try:
        values = [float(c) for c in cells]
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"malformed number in vector: {exc}") from None
    return np.asarray(values, dtype=np.float64)


def _read_vector(args) -> np.ndarray:
    if (args.inline is None) == (args.file is None):
        raise CliError(EXIT_PARSE, "exactly one of --inline or --file is required")
    if args.inline is not None:
        return parse_vector(args.inline)
    try:
        with open(args.file) as fh:
            return parse_vector(fh.read())
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {args.file}: {exc}") from None


def _split_point(vec: np.ndarray, p: int, q: int) -> MesocPoint:
    if p < 1 or q < 0:
        raise DimensionError(f"need p >= 1 and q >= 0, got p={p}, q={q}")
    if vec.size != p + q:
        raise DimensionError(f"vector has length {vec.size}, expected p+q = {p + q}")
    return MesocPoint(vec[:p].copy(), vec[p:].copy())


def cmd_project(args) -> int:
    vec = _read_vector(args)
    if args.cone == "mesoc":
        pt = _split_point(vec, args.p, args.q)
        payload = {"cone": "mesoc"}
        payload.update(project_mesoc(pt.x, pt.u).to_dict())
        _emit(payload)
        return EXIT_OK
    if args.cone == "mesoc-dual":
        pt = _split_point(vec, args.p, args.q)
        proj = project_mesoc_dual(pt.x, pt.u)
        _emit(
            {
                "cone": "mesoc-dual",
                "p": args.p,
                "q": args.q,
                "input": vec.tolist(),
                "projection": proj.as_vector().tolist(),
                "violation": mesoc_dual_violation(proj),
            }
        )
        return EXIT_OK
    if args.q:
        raise DimensionError(f"cone {args.cone} takes no u block; drop --q or set it to 0")
    if vec.size != args.p:
        raise DimensionError(f"vector has length {vec.size}, expected p = {args.p}")
    proj = project_cone(args.cone, vec)
    _emit(
        {
            "cone": args.cone,
            "p": args.p,
            "input": vec.tolist(),
            "projection": proj.tolist(),
            "violation": cone_violation(args.cone, proj),
        }
    )
    return EXIT_OK


def cmd_check(args) -> int:
    vec = _read_vector(args)
    if args.cone in ("mesoc", "mesoc-dual"):
        pt = _split_point(vec, args.p, args.q)
        if args.cone == "mesoc":
            member = mesoc_contains(pt, args.tol)
            violation = mesoc_violation(pt)
        else:
            member = mesoc_dual_contains(pt, args.tol)
            violation = mesoc_dual_violation(pt)
    else:
        if args.q:
            raise DimensionError(f"cone {args.cone} takes no u block; drop --q or set it to 0")
        if vec.size != args.p:
            raise DimensionError(f"vector has length {vec.size}, expected p = {args.p}")
        member = cone_contains(args.cone, vec, args.tol)
        violation = cone_violation(args.cone, vec)
    _emit(
        {
            "cone": args.cone,
            "member": bool(member),
            "violation": violation,
            "tol": args.tol,
        }
    )
    return EXIT_OK if member else EXIT_VIOLATION


def cmd_oracle_compare(args) -> int:
    if args.p > _ORACLE_DIM_CAP or args.q > _ORACLE_DIM_CAP:
        raise DimensionError(
            f"oracle comparison is capped at p, q <= {_ORACLE_DIM_CAP}; "
            f"got p={args.p}, q={args.q}"
        )
    if args.p < 1 or args.q < 0 or args.count < 0:
        raise DimensionError("need p >= 1, q >= 0, count >= 0")
    rng = np.random.default_rng(args.seed)
    pieces = mesoc_pieces(args.p, args.q)
    cfg = DykstraConfig()
    rows = []
    all_converged = True
    max_dev = 0.0
    for i in range(args.count):
        z = rng.standard_normal(args.p)
        w = rng.standard_normal(args.q)
        exact = project_mesoc(z, w).primal.as_vector()
        rep = dykstra_project(pieces, np.concatenate([z, w]), cfg)
        dev = float(np.max(np.abs(exact - rep.point))) if exact.size else 0.0
        max_dev = max(max_dev, dev)
        all_converged = all_converged and rep.converged
        rows.append(
            {
                "instance": i,
                "deviation": dev,
                "cycles": rep.cycles,
                "converged": rep.converged,
            }
        )
    _emit(
        {
            "p": args.p,
            "q": args.q,
            "count": args.count,
            "seed": args.seed,
            "tol": args.tol,
            "max_deviation": max_dev,
            "rows": rows,
        }
    )
    if max_dev > args.tol:
        return EXIT_VIOLATION
    if not all_converged:
        return EXIT_NONCONVERGENCE
    return EXIT_OK


def cmd_solve_portfolio(args) -> int:
    if args.file is None:
        raise CliError(EXIT_PARSE, "--file with scenario returns is required")
    data = read_returns_csv(args.file, args.probabilities_column)
    cfg = SolverConfig(max_iter=args.max_iter, feas_tol=args.tol)
    sol = refine_jstar(data, args.c0, cfg=cfg)
    _emit(sol.to_dict())
    return EXIT_OK if sol.converged else EXIT_NONCONVERGENCE


def _parse_dims(text: str) -> list[int]:
    try:
        dims = [int(c) for c in text.split(",") if c.strip()]
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"malformed dimension list: {exc}") from None
    if not dims:
        raise CliError(EXIT_PARSE, "dimension list is empty")
    return dims


def _time_projection(z: np.ndarray, w: np.ndarray) -> float:
    t0 = time.perf_counter()
    project_mesoc(z, w)
    return (time.perf_counter() - t0) * 1e3


def cmd_bench(args) -> int:
    if args.count < 1:
        raise CliError(EXIT_PARSE, "need at least one repetition")
    ps = _parse_dims(args.p)
    qs = _parse_dims(args.q)
    if any(p < 1 for p in ps) or any(q < 1 for q in qs):
        raise DimensionError("bench dimensions must be >= 1")
    warmup()
    rng = np.random.default_rng(args.seed)
    rows = []
    for p in ps:
        for q in qs:
            random_ms = [
                _time_projection(rng.standard_normal(p), rng.standard_normal(q))
                for _ in range(args.count)
            ]
            # ascending inputs force PAVA to merge everything into one block
            z_adv = np.linspace(-1.0, 1.0, p)
            w_adv = np.full(q, 1.0 / np.sqrt(q))
            ascending_ms = [_time_projection(z_adv, w_adv) for _ in range(args.count)]
            rows.append(
                {
                    "p": p,
                    "q": q,
                    "reps": args.count,
                    "median_random_ms": float(median(random_ms)),
                    "median_ascending_ms": float(median(ascending_ms)),
                }
            )
    _emit({"seed": args.seed, "reps": args.count, "rows": rows})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mesoc",
        description="Exact projections onto the monotone extended second-order cone.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_vector_flags(sp, tol_default):
        sp.add_argument("--p", type=int, required=True, help="length of the ordered block")
        sp.add_argument("--q", type=int, default=0, help="length of the norm block")
        sp.add_argument("--inline", help="comma-separated input vector")
        sp.add_argument("--file", help="file containing the input vector")
        sp.add_argument("--cone", choices=_CONE_CHOICES, default="mesoc")
        sp.add_argument("--tol", type=float, default=tol_default)

    sp = sub.add_parser("project", help="project a point and emit the certificate")
    add_vector_flags(sp, 1e-9)
    sp.set_defaults(func=cmd_project)

    sp = sub.add_parser("check", help="test cone membership of a point")
    add_vector_flags(sp, 1e-9)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser(
        "oracle-compare", help="compare the closed form against Dykstra on random inputs"
    )
    sp.add_argument("--p", type=int, default=4)
    sp.add_argument("--q", type=int, default=4)
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-5)
    sp.set_defaults(func=cmd_oracle_compare)

    sp = sub.add_parser("solve-portfolio", help="solve the conic MAD model from a returns CSV")
    sp.add_argument("--file", help="CSV of scenario returns, one row per scenario")
    sp.add_argument("--c0", type=float, default=1.0, help="risk-aversion weight")
    sp.add_argument("--max-iter", type=int, default=200)
    sp.add_argument("--tol", type=float, default=1e-7, help="feasibility tolerance")
    sp.add_argument(
        "--probabilities-column",
        type=int,
        default=None,
        help="0-based CSV column holding scenario probabilities",
    )
    sp.set_defaults(func=cmd_solve_portfolio)

    sp = sub.add_parser("bench", help="time projections over a grid of dimensions")
    sp.add_argument("--p", default="1000", help="comma-separated list of p values")
    sp.add_argument("--q", default="1000", help="comma-separated list of q values")
    sp.add_argument("--count", type=int, default=5, help="repetitions per cell")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
