"""Integer programming models for minimum stabbing rectangular partitions.

Three models are built from an :class:`~stabpart.geometry.Arrangement`:

* ``RPST`` -- one binary per internal edge;
* ``RPST2`` -- one binary per extended edge (reflex vertex to any arrangement vertex);
* ``CONFORMING`` -- one binary per border-to-border grid segment.

Every model minimises the integer stabbing variable ``k``; edge variables come
first in edge-index order and ``k`` is always last.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations

from .geometry import HORIZONTAL, Arrangement, Point, Segment, segment_intersection

RPST = "RPST"
RPST2 = "RPST2"
CONFORMING = "CONFORMING"
MODEL_KINDS = (RPST, RPST2, CONFORMING)

GE, LE, EQ = ">=", "<=", "="


@dataclass(frozen=True)
class Variable:
    id: int
    name: str
    kind: str  # "edge" | "stab"
    orientation: str  # "horizontal" | "vertical" | "none"
    lower: Fraction | None  # None means free
    upper: Fraction | None
    integral: bool
    cover: tuple[int, ...] = ()  # internal edges spanned by this variable's edge


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[tuple[int, Fraction], ...]
    sense: str
    rhs: Fraction
    tag: str  # "reflex" | "steiner" | "planarity" | "stab"

    def lhs(self, values) -> Fraction:
        return sum((c * values[j] for j, c in self.coefficients), Fraction(0))

    def satisfied(self, values) -> bool:
        v = self.lhs(values)
        if self.sense == GE:
            return v >= self.rhs
        if self.sense == LE:
            return v <= self.rhs
        return v == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    model_kind: str
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    relaxed: bool = False

    @property
    def stab_var(self) -> Variable:
        return self.variables[-1]

    @property
    def edge_vars(self) -> tuple[Variable, ...]:
        return self.variables[:-1]

    def count(self, tag: str) -> int:
        return sum(1 for c in self.constraints if c.tag == tag)

    def is_feasible(self, values) -> bool:
        """Exact check of bounds, integrality and every constraint."""
        for v in self.variables:
            x = values[v.id]
            if (v.lower is not None and x < v.lower) or (v.upper is not None and x > v.upper):
                return False
            if v.integral and not self.relaxed and Fraction(x).denominator != 1:
                return False
        return all(c.satisfied(values) for c in self.constraints)


@dataclass(frozen=True)
class EdgeSelection:
    """A set of chosen model edges and its expansion to internal edges."""

    model_kind: str
    chosen: frozenset[int]
    derived_internal: frozenset[int]


def model_edges(A: Arrangement, model_kind: str) -> tuple[Segment, ...]:
    if model_kind == RPST:
        return A.internal_edges
    if model_kind == RPST2:
        return A.extended_edges
    if model_kind == CONFORMING:
        return A.grid_segments
    raise ValueError(f"unknown model kind {model_kind!r}")


def model_covers(A: Arrangement, model_kind: str) -> list[tuple[int, ...]]:
    if model_kind == RPST:
        return [(i,) for i in range(len(A.internal_edges))]
    if model_kind == RPST2:
        return [A.cover_index[i] for i in range(len(A.extended_edges))]
    return [A.grid_cover[i] for i in range(len(A.grid_segments))]


def make_selection(A: Arrangement, model_kind: str, chosen) -> EdgeSelection:
    covers = model_covers(A, model_kind)
    chosen = frozenset(chosen)
    return EdgeSelection(
        model_kind, chosen, frozenset(j for i in chosen for j in covers[i])
    )


def _variables(A: Arrangement, model_kind: str) -> list[Variable]:
    out = []
    for i, (s, cov) in enumerate(zip(model_edges(A, model_kind), model_covers(A, model_kind))):
        out.append(
            Variable(i, f"x{i}", "edge", s.axis, Fraction(0), Fraction(1), True, tuple(cov))
        )
    out.append(Variable(len(out), "k", "stab", "none", Fraction(1), None, True))
    return out


def _row(terms, sense, rhs, tag) -> Constraint:
    acc: dict[int, Fraction] = {}
    for j, c in terms:
        acc[j] = acc.get(j, Fraction(0)) + Fraction(c)
    coeffs = tuple(sorted((j, c) for j, c in acc.items() if c != 0))
    return Constraint(coeffs, sense, Fraction(rhs), tag)


def _stab_rows(A: Arrangement, edges, k: int) -> list[Constraint]:
    rows = []
    for line in A.stab_lines:
        crossing = [i for i, s in enumerate(edges) if line.crosses(s)]
        if crossing:
            rows.append(_row([(i, 1) for i in crossing] + [(k, -1)], LE, -1, "stab"))
    return rows


def _perpendicular(s: Segment, t: Segment) -> bool:
    return s.axis != t.axis


def build_rpst(A: Arrangement) -> LinearProgram:
    """Internal-edge model: reflex cover, Steiner knee/island rows, stab rows."""
    edges = A.internal_edges
    variables = _variables(A, RPST)
    k = variables[-1].id
    rows = []
    for u in sorted(A.reflex):
        inc = A.incidence.get(u, ())
        rows.append(_row([(i, 1) for i in inc], GE, 1, "reflex"))
    for u in sorted(A.steiner):
        inc = A.incidence[u]
        for a, b in combinations(inc, 2):
            if not _perpendicular(edges[a], edges[b]):
                continue
            for c in inc:
                if c not in (a, b):
                    rows.append(_row([(a, 1), (b, 1), (c, -1)], GE, 0, "steiner"))
    rows += _stab_rows(A, edges, k)
    return LinearProgram(RPST, tuple(variables), tuple(rows))


def _touches_only_at_endpoint(s: Segment, t: Segment) -> bool:
    hit = segment_intersection(s, t)
    if hit is None:
        return True
    return isinstance(hit, Point) and hit in (s.p, s.q, t.p, t.q)


def build_rpst2(A: Arrangement) -> LinearProgram:
    """Extended-edge model: reflex cover, planarity, Steiner continuation, stab rows."""
    edges = A.extended_edges
    variables = _variables(A, RPST2)
    k = variables[-1].id
    rows = []
    for u in sorted(A.reflex):
        inc = [i for i, s in enumerate(edges) if u in s.endpoints]
        rows.append(_row([(i, 1) for i in inc], GE, 1, "reflex"))
    for i, j in combinations(range(len(edges)), 2):
        if not _touches_only_at_endpoint(edges[i], edges[j]):
            rows.append(_row([(i, 1), (j, 1)], LE, 1, "planarity"))
    for i, ab in enumerate(edges):
        for a, b in (ab.endpoints, ab.endpoints[::-1]):
            if a in A.reflex and b in A.steiner:
                through = [
                    j for j, uv in enumerate(edges)
                    if _perpendicular(uv, ab) and uv.contains(b, strict=True)
                ]
                rows.append(_row([(j, 1) for j in through] + [(i, -1)], GE, 0, "steiner"))
    rows += _stab_rows(A, edges, k)
    return LinearProgram(RPST2, tuple(variables), tuple(rows))


def build_conforming(A: Arrangement) -> LinearProgram:
    """Border-to-border model: one horizontal plus one vertical segment per reflex vertex."""
    edges = A.grid_segments
    variables = _variables(A, CONFORMING)
    k = variables[-1].id
    rows = []
    for u in sorted(A.reflex):
        inc = [i for i, s in enumerate(edges) if u in s.endpoints]
        rows.append(_row([(i, 1) for i in inc], GE, 1, "reflex"))
    rows += _stab_rows(A, edges, k)
    return LinearProgram(CONFORMING, tuple(variables), tuple(rows))


BUILDERS = {RPST: build_rpst, RPST2: build_rpst2, CONFORMING: build_conforming}


def build_model(A: Arrangement, model_kind: str) -> LinearProgram:
    try:
        return BUILDERS[model_kind.upper()](A)
    except KeyError:
        raise ValueError(f"unknown model kind {model_kind!r}") from None


def relax(ip: LinearProgram) -> LinearProgram:
    if ip.relaxed:
        return ip
    return replace(
        ip,
        variables=tuple(replace(v, integral=False) for v in ip.variables),
        relaxed=True,
    )


def fmt_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_coef(c: Fraction) -> str:
    return ("+" if c >= 0 else "-") + fmt_rational(abs(c))


def export_lp_text(lp: LinearProgram) -> str:
    names = {v.id: v.name for v in lp.variables}
    out = [
        f"model {lp.model_kind}",
        f"relaxed {'true' if lp.relaxed else 'false'}",
        f"minimize {lp.stab_var.name}",
        "variables",
    ]
    for v in lp.variables:
        line = f"{v.name} {v.kind} {v.orientation}"
        if v.cover:
            line += " cover " + ",".join(map(str, v.cover))
        out.append(line)
    out.append("subject to")
    for c in lp.constraints:
        terms = " ".join(f"{_fmt_coef(a)} {names[j]}" for j, a in c.coefficients)
        out.append(f"{c.tag}: {terms} {c.sense} {fmt_rational(c.rhs)}")
    out.append("bounds")
    for v in lp.variables:
        if v.lower is None:
            hi = "" if v.upper is None else f" <= {fmt_rational(v.upper)}"
            out.append(f"{v.name} free{hi}")
        elif v.upper is None:
            out.append(f"{fmt_rational(v.lower)} <= {v.name}")
        else:
            out.append(f"{fmt_rational(v.lower)} <= {v.name} <= {fmt_rational(v.upper)}")
    out.append("integers")
    ints = [v.name for v in lp.variables if v.integral]
    if ints:
        out.append(" ".join(ints))
    out.append("end")
    return "\n".join(out) + "\n"


_TERM = re.compile(r"([+-])(\d+(?:/\d+)?)\s+(\S+)")


def parse_lp_text(text: str) -> LinearProgram:
    """Inverse of :func:`export_lp_text`."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    it = iter(lines)
    header = {}
    for ln in it:
        if ln == "variables":
            break
        key, _, val = ln.partition(" ")
        header[key] = val
    specs = []
    for ln in it:
        if ln == "subject to":
            break
        parts = ln.split()
        cover = tuple(int(c) for c in parts[4].split(",")) if len(parts) > 4 else ()
        specs.append((parts[0], parts[1], parts[2], cover))
    ids = {name: i for i, (name, *_rest) in enumerate(specs)}
    rows = []
    for ln in it:
        if ln == "bounds":
            break
        tag, _, body = ln.partition(": ")
        body, sense, rhs = body.rsplit(" ", 2)
        terms = [
            (ids[name], Fraction(num) * (1 if sign == "+" else -1))
            for sign, num, name in _TERM.findall(body)
        ]
        rows.append(Constraint(tuple(terms), sense, Fraction(rhs), tag))
    bounds = {}
    for ln in it:
        if ln == "integers":
            break
        parts = ln.split(" <= ")
        if parts[0].endswith(" free"):
            name = parts[0][: -len(" free")]
            bounds[name] = (None, Fraction(parts[1]) if len(parts) > 1 else None)
        else:
            bounds[parts[1]] = (Fraction(parts[0]), Fraction(parts[2]) if len(parts) > 2 else None)
    integral = set()
    for ln in it:
        if ln == "end":
            break
        integral.update(ln.split())
    variables = tuple(
        Variable(i, name, kind, orient, *bounds[name], name in integral, cover)
        for i, (name, kind, orient, cover) in enumerate(specs)
    )
    return LinearProgram(
        header["model"], variables, tuple(rows), header.get("relaxed") == "true"
    )


def is_horizontal(v: Variable) -> bool:
    return v.orientation == HORIZONTAL
