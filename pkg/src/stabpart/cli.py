"""Command line interface: ``stab <subcommand> ...``.

Exit codes: 0 success, 1 infeasible rounding under ``round --strict``,
2 input or usage error.
"""
from __future__ import annotations

import argparse
import sys

from . import formulation as fm
from .formulation import build_model, export_lp_text, fmt_rational, make_selection, relax
from .generator import GenerationFailed, generate_polygon
from .geometry import GeometryError, build_arrangement
from .hunt import HuntConfig, hunt
from .partition import NotAPartition, normalize_dragging, stabbing_number, validate_partition
from .rectio import RectSyntaxError, parse_rect, write_rect
from .rounding import round_and_check
from .solver import TooLarge, branch_and_bound, brute_force, simplex
from .svg import render_svg


class UsageError(ValueError):
    pass


def _read_polygon(path: str):
    if path == "-":
        return parse_rect(sys.stdin.read())
    with open(path) as fh:
        return parse_rect(fh.read())


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _kind(args) -> str:
    return args.model.upper()


def parse_select(tokens: str, A, model_kind: str) -> set[int]:
    """Edge indices from ``i``, ``xi``, ``h`` (all horizontal), ``v`` (all vertical), ``all``."""
    edges = fm.model_edges(A, model_kind)
    out = set()
    for tok in filter(None, (t.strip() for t in tokens.split(","))):
        if tok == "all":
            out.update(range(len(edges)))
        elif tok in ("h", "v"):
            axis = "horizontal" if tok == "h" else "vertical"
            out.update(i for i, e in enumerate(edges) if e.axis == axis)
        else:
            try:
                i = int(tok[1:] if tok.startswith("x") else tok)
            except ValueError:
                raise UsageError(f"bad edge token {tok!r}") from None
            if not 0 <= i < len(edges):
                raise UsageError(f"edge index {i} out of range (0..{len(edges) - 1})")
            out.add(i)
    return out


def _selection(args, A):
    kind = _kind(args)
    return make_selection(A, kind, parse_select(args.select or "", A, kind))


def cmd_gen(args):
    P = generate_polygon(args.vertices, args.seed)
    _emit(args, write_rect(P, comment=f"random-{args.vertices}-{args.seed}"))


def cmd_grid(args):
    A = build_arrangement(_read_polygon(args.file))
    lines = [
        f"reflex {sorted(A.reflex)}",
        f"convex {sorted(A.convex)}",
        f"steiner {sorted(A.steiner)}",
        f"border {sorted(A.border)}",
        f"grid segments {len(A.grid_segments)}",
    ]
    lines += [f"  g{i} {s}" for i, s in enumerate(A.grid_segments)]
    lines.append(f"internal edges {len(A.internal_edges)}")
    lines += [f"  x{i} {s}" for i, s in enumerate(A.internal_edges)]
    lines.append(f"extended edges {len(A.extended_edges)}")
    lines += [f"  x{i} {s}" for i, s in enumerate(A.extended_edges)]
    lines.append(f"stab lines {len(A.stab_lines)}")
    lines += [f"  {ln!r}" for ln in A.stab_lines]
    _emit(args, "\n".join(lines) + "\n")


def cmd_model(args):
    A = build_arrangement(_read_polygon(args.file))
    lp = build_model(A, _kind(args))
    _emit(args, export_lp_text(relax(lp) if args.relaxed else lp))


def _values_text(sol, lp) -> list[str]:
    return [f"{v.name} = {fmt_rational(sol.values[v.id])}" for v in lp.variables]


def cmd_relax(args):
    A = build_arrangement(_read_polygon(args.file))
    lp = relax(build_model(A, _kind(args)))
    sol = simplex(lp).require_optimal()
    out = [f"objective {fmt_rational(sol.objective)}", f"iterations {sol.iterations}"]
    out += _values_text(sol, lp)
    _emit(args, "\n".join(out) + "\n")


def cmd_solve(args):
    A = build_arrangement(_read_polygon(args.file))
    kind = _kind(args)
    res = brute_force(A, kind) if args.brute else branch_and_bound(build_model(A, kind))
    if res.k_opt is None:
        _emit(args, "infeasible\n")
        return 0
    chosen = ",".join(str(i) for i in sorted(res.incumbent.chosen))
    _emit(args, f"k_opt {res.k_opt}\nnodes {res.nodes}\nselect {chosen}\n")


def cmd_round(args):
    A = build_arrangement(_read_polygon(args.file))
    out = round_and_check(A, _kind(args))
    lines = [
        f"objective {fmt_rational(out.lp_objective)}",
        "select " + ",".join(str(i) for i in sorted(out.selection.chosen)),
    ]
    if out.report.feasible:
        lines.append(f"feasible, stabbing number {out.rounded_stab}")
    else:
        lines.append("infeasible")
        lines += [f"  {v.kind} at {v.location}" for v in out.report.violations]
    _emit(args, "\n".join(lines) + "\n")
    return 1 if args.strict and not out.report.feasible else 0


def cmd_check(args):
    A = build_arrangement(_read_polygon(args.file))
    try:
        R = validate_partition(_selection(args, A), A)
    except NotAPartition as exc:
        lines = ["infeasible"] + [f"  {v.kind} at {v.location}" for v in exc.report.violations]
        _emit(args, "\n".join(lines) + "\n")
        return 0
    _emit(args, f"feasible, stabbing number {stabbing_number(R, A).stabbing_number}\n")


def cmd_stab(args):
    A = build_arrangement(_read_polygon(args.file))
    R = validate_partition(_selection(args, A), A)
    rep = stabbing_number(R, A)
    lines = [f"{ln!r}: {c}" for ln, c in rep.per_line.items()]
    lines.append(f"stabbing number {rep.stabbing_number}")
    _emit(args, "\n".join(lines) + "\n")


def cmd_normalize(args):
    A = build_arrangement(_read_polygon(args.file))
    R = validate_partition(_selection(args, A), A)
    N = normalize_dragging(R)
    lines = [f"segment {s}" for s in sorted(N.segments)]
    lines.append(
        f"stabbing number {stabbing_number(R, A).stabbing_number} -> "
        f"{stabbing_number(N, A).stabbing_number}"
    )
    _emit(args, "\n".join(lines) + "\n")


def cmd_hunt(args):
    kinds = (fm.RPST, fm.RPST2) if args.model == "both" else (args.model.upper(),)
    cfg = HuntConfig(args.vertices, args.count, args.seed, kinds, args.dir, args.workers)
    records = hunt(cfg)
    _emit(args, "".join(r.to_json() + "\n" for r in records))


def cmd_render(args):
    P = _read_polygon(args.file)
    A = build_arrangement(P)
    kind = _kind(args)
    values = None
    partition = None
    if args.values:
        lp = relax(build_model(A, kind))
        sol = simplex(lp).require_optimal()
        edges = fm.model_edges(A, kind)
        values = {edges[v.id]: sol.values[v.id] for v in lp.edge_vars}
    if args.select is not None:
        partition = validate_partition(_selection(args, A), A)
    _emit(args, render_svg(P, values=values, partition=partition))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help, file=True, model=True, select=False):
        sp = sub.add_parser(name, help=help)
        if file:
            sp.add_argument("file", help=".rect file, or - for stdin")
        if model:
            sp.add_argument("--model", default="rpst", choices=["rpst", "rpst2", "conforming"])
        if select:
            sp.add_argument("--select", help="edges: indices, xN, h, v or all (comma separated)")
        sp.add_argument("-o", "--output")
        sp.set_defaults(func=func)
        return sp

    sp = add("gen", cmd_gen, "generate a random polygon", file=False, model=False)
    sp.add_argument("--vertices", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    add("grid", cmd_grid, "print the arrangement", model=False)
    sp = add("model", cmd_model, "export the integer program as LP text")
    sp.add_argument("--relaxed", action="store_true")
    add("relax", cmd_relax, "solve the LP relaxation exactly")
    sp = add("solve", cmd_solve, "solve the integer program")
    sp.add_argument("--brute", action="store_true", help="use the enumeration oracle")
    sp = add("round", cmd_round, "round the LP optimum and diagnose it")
    sp.add_argument("--strict", action="store_true", help="exit 1 on infeasible rounding")
    add("check", cmd_check, "validate an edge selection", select=True)
    add("stab", cmd_stab, "per-line stabbing counts of a selection", select=True)
    add("normalize", cmd_normalize, "apply dragging normalization", select=True)
    sp = add("hunt", cmd_hunt, "search for infeasible roundings", file=False, model=False)
    sp.add_argument("--vertices", type=int, default=20)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--model", default="both", choices=["rpst", "rpst2", "both"])
    sp.add_argument("--dir", help="also write failures.jsonl and .rect files here")
    sp.add_argument("--workers", type=int, default=1)
    sp = add("render", cmd_render, "draw an SVG figure", select=True)
    sp.add_argument("--values", action="store_true", help="label edges with LP values")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args) or 0
    except (
        OSError,
        GeometryError,
        RectSyntaxError,
        UsageError,
        NotAPartition,
        GenerationFailed,
        TooLarge,
        ValueError,
    ) as exc:
        print(f"stab {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
