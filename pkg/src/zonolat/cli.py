"""Command line front end: JSON problem files in, JSON reports out.

Rationals travel as strings "p/q" in lowest terms (plain integers are
accepted on input) so that nothing is ever rounded.  Output is fully
deterministic: the same input file always produces byte-identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import __version__
from .constructions import (
    a_n_lattice,
    cographic_lattice,
    digraph,
    graphic_lattice,
    obtuse_superbasis_gram,
    tensor_lattice,
    voronoi_first_kind,
)
from .core import FracVec, IntVec, ZonotopalLattice, tu_matrix
from .errors import (
    InternalInvariantError,
    OracleFailureError,
    ZonolatError,
)
from .mmcc import cvp_instance, solve_cvp
from .oracle import brute_force_cvp, check_tu, enumerate_primitive_chains
from .core import VERIFY_ROW_CAP, project_onto_span


class InputFormatError(ZonolatError, ValueError):
    """Problem or solution file does not match the documented schema."""


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise InputFormatError(f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputFormatError(f"cannot parse rational {value!r}") from exc
    raise InputFormatError(
        f"rationals must be integers or 'p/q' strings, got {type(value).__name__}"
    )


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


@dataclass(frozen=True)
class ProblemFile:
    name: str | None
    m: int
    n: int
    M: tuple[tuple[int, ...], ...]
    g: FracVec
    t: FracVec
    tu_mode: str


@dataclass(frozen=True)
class SolutionFile:
    closest: IntVec
    distance_sq: Fraction
    iterations: int
    lambda_trace: tuple[Fraction, ...]
    certified: bool
    oracle_agreement: bool | None
    seed: int | None
    tool_version: str


def parse_problem(data: dict) -> ProblemFile:
    if not isinstance(data, dict):
        raise InputFormatError("problem file must be a JSON object")
    try:
        m = int(data["m"])
        n = int(data["n"])
        rows = data["M"]
        g = data["g"]
        t = data["t"]
    except KeyError as exc:
        raise InputFormatError(f"missing required field {exc.args[0]!r}") from exc
    tu_mode = data.get("tu_mode", "verify")
    if tu_mode not in ("verify", "assert"):
        raise InputFormatError(f"tu_mode must be 'verify' or 'assert', got {tu_mode!r}")
    if len(rows) != n or any(len(r) != m for r in rows):
        raise InputFormatError("M does not match the declared n x m shape")
    entries = []
    for row in rows:
        out = []
        for e in row:
            if not isinstance(e, int) or e not in (-1, 0, 1):
                raise InputFormatError(f"matrix entries must be -1, 0 or 1, got {e!r}")
            out.append(e)
        entries.append(tuple(out))
    if len(g) != m or len(t) != m:
        raise InputFormatError("g and t must have length m")
    gv = tuple(parse_rational(x) for x in g)
    if any(x <= 0 for x in gv):
        raise InputFormatError("all weights g must be positive")
    tv = tuple(parse_rational(x) for x in t)
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise InputFormatError("name must be a string")
    return ProblemFile(name=name, m=m, n=n, M=tuple(entries), g=gv, t=tv,
                       tu_mode=tu_mode)


def problem_to_json(p: ProblemFile) -> dict:
    out: dict = {}
    if p.name is not None:
        out["name"] = p.name
    out.update({
        "m": p.m,
        "n": p.n,
        "M": [list(row) for row in p.M],
        "g": [format_rational(x) for x in p.g],
        "t": [format_rational(x) for x in p.t],
        "tu_mode": p.tu_mode,
    })
    return out


def parse_solution(data: dict) -> SolutionFile:
    try:
        return SolutionFile(
            closest=tuple(int(x) for x in data["closest"]),
            distance_sq=parse_rational(data["distance_sq"]),
            iterations=int(data["iterations"]),
            lambda_trace=tuple(parse_rational(x) for x in data["lambda_trace"]),
            certified=bool(data["certified"]),
            oracle_agreement=data.get("oracle_agreement"),
            seed=data.get("seed"),
            tool_version=str(data["tool_version"]),
        )
    except KeyError as exc:
        raise InputFormatError(f"missing required field {exc.args[0]!r}") from exc


def solution_to_json(s: SolutionFile) -> dict:
    out = {
        "closest": list(s.closest),
        "distance_sq": format_rational(s.distance_sq),
        "iterations": s.iterations,
        "lambda_trace": [format_rational(x) for x in s.lambda_trace],
        "certified": s.certified,
    }
    if s.oracle_agreement is not None:
        out["oracle_agreement"] = s.oracle_agreement
    out["seed"] = s.seed
    out["tool_version"] = s.tool_version
    return out


def lattice_from_problem(p: ProblemFile) -> ZonotopalLattice:
    matrix = tu_matrix(p.M, mode=p.tu_mode, width=p.m)
    return ZonotopalLattice(matrix=matrix, weights=p.g)


def _load_problem(path: str) -> ProblemFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path} is not valid JSON: {exc}") from exc
    return parse_problem(data)


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    problem = _load_problem(args.file)
    lattice = lattice_from_problem(problem)
    instance = cvp_instance(lattice, problem.t, project=not args.no_project)
    solution = solve_cvp(instance)
    agreement = None
    if args.oracle:
        reference = brute_force_cvp(instance)
        agreement = instance.distance_sq(reference) == solution.distance_sq
    payload = solution_to_json(SolutionFile(
        closest=solution.closest,
        distance_sq=solution.distance_sq,
        iterations=solution.iterations,
        lambda_trace=solution.lambda_trace(),
        certified=solution.certified,
        oracle_agreement=agreement,
        seed=None,
        tool_version=__version__,
    ))
    _emit(payload, args.trace)
    return 0


def _parse_arcs(text: str) -> list[tuple[int, int]]:
    arcs = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        pieces = part.split("-")
        if len(pieces) != 2:
            raise InputFormatError(f"arc {part!r} is not of the form TAIL-HEAD")
        try:
            arcs.append((int(pieces[0]), int(pieces[1])))
        except ValueError as exc:
            raise InputFormatError(f"arc {part!r} has non-integer endpoints") from exc
    if not arcs:
        raise InputFormatError("at least one arc is required")
    return arcs


def _parse_weights(text: str | None, m: int) -> FracVec:
    if text is None:
        return tuple(Fraction(1) for _ in range(m))
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) != m:
        raise InputFormatError(f"expected {m} weights, got {len(parts)}")
    weights = tuple(parse_rational(p) for p in parts)
    if any(w <= 0 for w in weights):
        raise InputFormatError("all weights must be positive")
    return weights


def _problem_from_lattice(name: str, lattice: ZonotopalLattice) -> ProblemFile:
    return ProblemFile(
        name=name,
        m=lattice.m,
        n=lattice.matrix.n,
        M=lattice.matrix.entries,
        g=lattice.weights,
        t=tuple(Fraction(0) for _ in range(lattice.m)),
        tu_mode="verify" if lattice.matrix.tu_status == "verified" else "assert",
    )


def cmd_construct(args) -> int:
    kind = args.kind
    if kind == "graphic" or kind == "cographic":
        if args.vertices is None or args.arcs is None:
            raise InputFormatError(f"{kind} construction needs --vertices and --arcs")
        arcs = _parse_arcs(args.arcs)
        d = digraph(args.vertices, arcs)
        weights = _parse_weights(args.weights, len(arcs))
        build = graphic_lattice if kind == "graphic" else cographic_lattice
        lattice = build(d, weights)
        name = f"{kind}-{args.vertices}v-{len(arcs)}a"
    elif kind == "vfk":
        if args.gram is None:
            raise InputFormatError("vfk construction needs --gram FILE")
        try:
            with open(args.gram, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise InputFormatError(f"cannot read {args.gram}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"{args.gram} is not valid JSON: {exc}") from exc
        rows = data["gram"] if isinstance(data, dict) and "gram" in data else data
        if not isinstance(rows, list):
            raise InputFormatError("gram file must hold a matrix or {'gram': matrix}")
        gram = obtuse_superbasis_gram(
            [[parse_rational(x) for x in row] for row in rows]
        )
        lattice, _ = voronoi_first_kind(gram)
        name = f"vfk-{gram.size - 1}d"
    elif kind == "tensor":
        if args.m is None or args.n is None:
            raise InputFormatError("tensor construction needs --m and --n")
        mm = (args.m + 1) * (args.n + 1)
        lattice = tensor_lattice(args.m, args.n, _parse_weights(args.weights, mm))
        name = f"tensor-a{args.m}-a{args.n}"
    elif kind == "an":
        if args.n is None:
            raise InputFormatError("an construction needs --n")
        lattice = a_n_lattice(args.n, _parse_weights(args.weights, args.n + 1))
        name = f"an-{args.n}"
    else:  # pragma: no cover - argparse restricts choices
        raise InputFormatError(f"unknown construction {kind!r}")
    _emit(problem_to_json(_problem_from_lattice(name, lattice)), args.output)
    return 0


def cmd_voronoi(args) -> int:
    problem = _load_problem(args.file)
    lattice = lattice_from_problem(problem)
    chains = enumerate_primitive_chains(lattice)
    payload = {
        "m": lattice.m,
        "count": len(chains),
        "vectors": [list(c.coords) for c in chains],
    }
    _emit(payload, args.output)
    return 0


def cmd_check(args) -> int:
    problem = _load_problem(args.file)
    matrix = tu_matrix(problem.M, mode="assert", width=problem.m)
    lattice = ZonotopalLattice(matrix=matrix, weights=problem.g)
    tu_verdict = check_tu(matrix) if matrix.n <= VERIFY_ROW_CAP else None
    projected = project_onto_span(problem.t, lattice)
    payload = {
        "m": problem.m,
        "n": problem.n,
        "tu_mode": problem.tu_mode,
        "tu": tu_verdict,
        "rank": lattice.rank(),
        "t_in_span": tuple(projected) == problem.t,
    }
    _emit(payload, args.output)
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zonolat",
        description="Exact closest-vector solver for zonotopal lattices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a CVP problem file")
    p_solve.add_argument("file")
    p_solve.add_argument("--oracle", action="store_true",
                         help="cross-check against brute-force enumeration")
    p_solve.add_argument("--trace", metavar="PATH",
                         help="write the solution JSON to PATH instead of stdout")
    p_solve.add_argument("--no-project", action="store_true",
                         help="require the target to lie in the span already")
    p_solve.set_defaults(func=cmd_solve)

    p_con = sub.add_parser("construct", help="emit a problem file for a family")
    p_con.add_argument("kind", choices=["graphic", "cographic", "vfk", "tensor", "an"])
    p_con.add_argument("--vertices", type=int)
    p_con.add_argument("--arcs", help="comma-separated TAIL-HEAD pairs, e.g. 0-1,1-2")
    p_con.add_argument("--gram", help="JSON file with the superbasis Gram matrix")
    p_con.add_argument("--m", type=int)
    p_con.add_argument("--n", type=int)
    p_con.add_argument("--weights", help="comma-separated positive rationals")
    p_con.add_argument("-o", "--output", metavar="PATH")
    p_con.set_defaults(func=cmd_construct)

    p_vor = sub.add_parser("voronoi", help="emit the strict Voronoi vectors")
    p_vor.add_argument("file")
    p_vor.add_argument("-o", "--output", metavar="PATH")
    p_vor.set_defaults(func=cmd_voronoi)

    p_chk = sub.add_parser("check", help="report TU status and span membership")
    p_chk.add_argument("file")
    p_chk.add_argument("-o", "--output", metavar="PATH")
    p_chk.set_defaults(func=cmd_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InternalInvariantError, OracleFailureError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except ZonolatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
