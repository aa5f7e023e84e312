"""Rectangular partitions: validation, faces, stabbing numbers, dragging normalization.

A partition is a set of interior axis-parallel segments inside a polygon.
Internally everything works on *pieces*: elementary segments between
consecutive coordinates of the refined grid (polygon vertex coordinates plus
segment endpoint coordinates).
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

from .formulation import RPST2, EdgeSelection
from .geometry import (
    HORIZONTAL,
    Arrangement,
    OrthoPolygon,
    Point,
    Segment,
    StabLine,
    build_arrangement,
    classify_vertices,
    direction_code,
    segment_intersection,
    strip_lines,
)

KNEE_AT_REFLEX = "knee_at_reflex"
KNEE_AT_STEINER = "knee_at_steiner"
ISLAND = "island"
PLANARITY_OVERLAP = "planarity_overlap"
CROSSING = "crossing"
OUTSIDE = "outside"
KIND_ORDER = (KNEE_AT_REFLEX, KNEE_AT_STEINER, ISLAND, PLANARITY_OVERLAP, CROSSING, OUTSIDE)

_STEP = ((1, 0), (0, 1), (-1, 0), (0, -1))


class Violation(NamedTuple):
    kind: str
    location: object  # Point, or a pair of Segments for planarity kinds

    def sort_key(self):
        return (KIND_ORDER.index(self.kind), repr(self.location))


@dataclass(frozen=True)
class DiagnosticReport:
    violations: tuple[Violation, ...] = ()

    @property
    def feasible(self) -> bool:
        return not self.violations

    @property
    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    @classmethod
    def of(cls, violations) -> DiagnosticReport:
        return cls(tuple(sorted(set(violations), key=Violation.sort_key)))


class NotAPartition(ValueError):
    def __init__(self, report: DiagnosticReport):
        super().__init__(f"not a rectangular partition: {list(report.violations)}")
        self.report = report


class IterationGuardExceeded(RuntimeError):
    pass


class Rect(NamedTuple):
    x0: int
    y0: int
    x1: int
    y1: int

    @property
    def area(self):
        return (self.x1 - self.x0) * (self.y1 - self.y0)


def gap_violation(wedge: int | None, offsets) -> bool:
    """Angular criterion at one node, in quarter turns.

    ``wedge`` is the interior angle of the boundary at the node (1, 2 or 3),
    or ``None`` for a node strictly inside the polygon. ``offsets`` are the
    directions of the selected segments leaving the node, measured CCW from
    the outgoing boundary direction (or from east for interior nodes).
    A face corner wider than a straight angle is a violation.
    """
    offs = sorted(set(offsets))
    if wedge is None:
        if not offs:
            return False
        gaps = [b - a for a, b in zip(offs, offs[1:])] + [offs[0] + 4 - offs[-1]]
    else:
        stops = [0] + offs + [wedge]
        gaps = [b - a for a, b in zip(stops, stops[1:])]
    return max(gaps) > 2


def boundary_wedges(P: OrthoPolygon) -> dict[Point, tuple[int, int]]:
    """(outgoing boundary direction, interior angle) at every polygon vertex."""
    vs = P.vertices
    n = len(vs)
    out = {}
    for i, v in enumerate(vs):
        d_out = direction_code(v, vs[(i + 1) % n])
        d_prev = direction_code(v, vs[i - 1])
        out[v] = (d_out, (d_prev - d_out) % 4)
    return out


class _Grid:
    """Refined coordinate grid of a polygon plus a set of segments."""

    def __init__(self, P: OrthoPolygon, segments=()):
        self.P = P
        xs, ys = set(P.xs), set(P.ys)
        for s in segments:
            xs.update((s.p.x, s.q.x))
            ys.update((s.p.y, s.q.y))
        self.xs, self.ys = sorted(xs), sorted(ys)
        self.wedges = boundary_wedges(P)
        self.boundary = set()
        self.boundary_dir: dict[Point, int] = {}
        for a, b in P.edges():
            for piece in self.split(Segment(a, b)):
                self.boundary.add(piece)
            d = direction_code(a, b)
            for c in self._cuts(Segment(a, b)):
                if c != a and c != b:
                    self.boundary_dir[c] = d

    def _cuts(self, s: Segment) -> list[Point]:
        if s.axis == HORIZONTAL:
            lo = bisect.bisect_left(self.xs, s.p.x)
            hi = bisect.bisect_right(self.xs, s.q.x)
            return [Point(x, s.p.y) for x in self.xs[lo:hi]]
        lo = bisect.bisect_left(self.ys, s.p.y)
        hi = bisect.bisect_right(self.ys, s.q.y)
        return [Point(s.p.x, y) for y in self.ys[lo:hi]]

    def split(self, s: Segment) -> list[Segment]:
        cuts = self._cuts(s)
        return [Segment(a, b) for a, b in zip(cuts, cuts[1:])]

    def wedge_at(self, u: Point):
        """(outgoing boundary direction, interior angle) or None for interior nodes."""
        if u in self.wedges:
            return self.wedges[u]
        if u in self.boundary_dir:
            return self.boundary_dir[u], 2
        return None


def _node_violations(grid: _Grid, pieces, reflex) -> list[Violation]:
    dirs: dict[Point, set[int]] = {}
    for s in pieces:
        dirs.setdefault(s.p, set()).add(direction_code(s.p, s.q))
        dirs.setdefault(s.q, set()).add(direction_code(s.q, s.p))
    for v in reflex:
        dirs.setdefault(v, set())
    out = []
    for u, ds in dirs.items():
        w = grid.wedge_at(u)
        if w is None:
            if gap_violation(None, ds):
                out.append(Violation(ISLAND if len(ds) == 1 else KNEE_AT_STEINER, u))
        else:
            d_out, span = w
            if gap_violation(span, [(d - d_out) % 4 for d in ds]):
                out.append(Violation(KNEE_AT_REFLEX, u))
    return out


def _faces(grid: _Grid, pieces) -> list[list[Point]]:
    """Interior faces of the subdivision, by half-edge traversal."""
    out_edges: dict[Point, dict[int, Point]] = {}
    for s in list(pieces) + list(grid.boundary):
        out_edges.setdefault(s.p, {})[direction_code(s.p, s.q)] = s.q
        out_edges.setdefault(s.q, {})[direction_code(s.q, s.p)] = s.p
    seen = set()
    faces = []
    for u, nbrs in out_edges.items():
        for d, v in nbrs.items():
            if (u, v) in seen:
                continue
            cycle = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                cycle.append(a)
                back = direction_code(b, a)
                opts = out_edges[b]
                # first outgoing edge clockwise from the reverse direction
                for turn in (1, 2, 3, 4):
                    nd = (back - turn) % 4
                    if nd in opts:
                        a, b = b, opts[nd]
                        break
            area2 = sum(
                cycle[i].x * cycle[(i + 1) % len(cycle)].y
                - cycle[(i + 1) % len(cycle)].x * cycle[i].y
                for i in range(len(cycle))
            )
            if area2 > 0:
                faces.append(cycle)
    return faces


def _corners(cycle: list[Point]) -> list[Point]:
    n = len(cycle)
    out = []
    for i in range(n):
        a, b, c = cycle[i - 1], cycle[i], cycle[(i + 1) % n]
        if direction_code(a, b) != direction_code(b, c):
            out.append(b)
    return out


def _merge_runs(pieces) -> list[Segment]:
    """Merge collinear touching pieces into maximal segments."""
    by_line: dict[tuple, list[Segment]] = {}
    for s in pieces:
        key = (s.axis, s.p.y) if s.axis == HORIZONTAL else (s.axis, s.p.x)
        by_line.setdefault(key, []).append(s)
    out = []
    for segs in by_line.values():
        segs.sort()
        cur = segs[0]
        for s in segs[1:]:
            if s.p <= cur.q:
                cur = Segment(cur.p, max(cur.q, s.q))
            else:
                out.append(cur)
                cur = s
        out.append(cur)
    return sorted(out)


@dataclass(frozen=True)
class Partition:
    polygon: OrthoPolygon
    segments: frozenset[Segment]  # maximal interior segments
    rectangles: tuple[Rect, ...]
    internal: frozenset[int] | None = None  # arrangement internal edges, when derived from one
    pieces: frozenset[Segment] = field(default=frozenset(), compare=False, repr=False)


def partition_from_segments(P: OrthoPolygon, segments, internal=None) -> Partition:
    """Validate arbitrary interior segments as a rectangular partition of ``P``."""
    segments = list(segments)
    grid = _Grid(P, segments)
    pieces = {piece for s in segments for piece in grid.split(s)}
    bad = []
    for s in pieces:
        mx = Fraction(s.p.x + s.q.x, 2)
        my = Fraction(s.p.y + s.q.y, 2)
        if P.contains(mx, my) != 1:
            bad.append(Violation(OUTSIDE, s.p))
    reflex, _ = classify_vertices(P)
    bad += _node_violations(grid, pieces, reflex)
    if bad:
        raise NotAPartition(DiagnosticReport.of(bad))
    rects = []
    for cycle in _faces(grid, pieces):
        corners = _corners(cycle)
        xs = [c.x for c in corners]
        ys = [c.y for c in corners]
        if len(corners) != 4:
            # the angular criterion above should make this unreachable
            raise NotAPartition(DiagnosticReport.of([Violation(OUTSIDE, corners[0])]))
        rects.append(Rect(min(xs), min(ys), max(xs), max(ys)))
    return Partition(
        P,
        frozenset(_merge_runs(pieces)),
        tuple(sorted(rects)),
        None if internal is None else frozenset(internal),
        frozenset(pieces),
    )


def planarity_violations(sel: EdgeSelection, A: Arrangement) -> list[Violation]:
    """Chosen extended edges meeting anywhere other than at an endpoint of one of them."""
    if sel.model_kind != RPST2:
        return []
    edges = A.extended_edges
    out = []
    for i, j in combinations(sorted(sel.chosen), 2):
        s, t = edges[i], edges[j]
        hit = segment_intersection(s, t)
        if hit is None:
            continue
        if isinstance(hit, Segment):
            out.append(Violation(PLANARITY_OVERLAP, (s, t)))
        elif hit not in s.endpoints and hit not in t.endpoints:
            out.append(Violation(CROSSING, (s, t)))
    return out


def validate_partition(sel: EdgeSelection, A: Arrangement) -> Partition:
    """The partition induced by a model edge selection, or :class:`NotAPartition`."""
    bad = planarity_violations(sel, A)
    segs = [A.internal_edges[i] for i in sorted(sel.derived_internal)]
    try:
        R = partition_from_segments(A.polygon, segs, internal=sel.derived_internal)
    except NotAPartition as exc:
        raise NotAPartition(DiagnosticReport.of(bad + list(exc.report.violations))) from None
    if bad:
        raise NotAPartition(DiagnosticReport.of(bad))
    return R


class LocalChecker:
    """Angular criterion precomputed at every arrangement vertex.

    Used by the enumeration oracle, which tests thousands of selections.
    """

    def __init__(self, A: Arrangement):
        wedges = boundary_wedges(A.polygon)
        self.nodes: dict[Point, tuple[int | None, dict[int, int]]] = {}
        for u in A.vertices:
            if u in wedges:
                d_out, span = wedges[u]
            elif u in A.border:
                d_out, span = self._border_wedge(A.polygon, u), 2
            else:
                d_out, span = 0, None
            offs = {
                i: (direction_code(u, A.internal_edges[i].other(u)) - d_out) % 4
                for i in A.incidence.get(u, ())
            }
            self.nodes[u] = (span, offs)
        self.reflex = A.reflex

    @staticmethod
    def _border_wedge(P: OrthoPolygon, u: Point) -> int:
        for a, b in P.edges():
            if Segment(a, b).contains(u, strict=True):
                return direction_code(a, b)
        raise AssertionError(f"{u} is not on the boundary")

    def violation(self, u: Point, selected) -> str | None:
        span, offs = self.nodes[u]
        chosen = [o for i, o in offs.items() if i in selected]
        if not gap_violation(span, chosen):
            return None
        if span is not None:
            return KNEE_AT_REFLEX
        return ISLAND if len(chosen) == 1 else KNEE_AT_STEINER


@dataclass(frozen=True)
class StabbingReport:
    per_line: dict[StabLine, int]
    stabbing_number: int


def _lines_for(R: Partition) -> list[StabLine]:
    xs = {c for s in R.segments for c in (s.p.x, s.q.x)}
    ys = {c for s in R.segments for c in (s.p.y, s.q.y)}
    return strip_lines(R.polygon, xs, ys)


def stabbing_number(R: Partition, A: Arrangement | None = None) -> StabbingReport:
    """Per-line count of rectangles stabbed: one plus the transversal crossings.

    Lines are the arrangement's stab lines when the partition lives on the
    polygon's coordinate grid, otherwise the strip lines of the refined grid.
    """
    lines = _lines_for(R)
    if A is not None and set(lines) == set(A.stab_lines):
        lines = list(A.stab_lines)
    per_line = {ln: 1 + sum(1 for s in R.segments if ln.crosses(s)) for ln in lines}
    return StabbingReport(per_line, max(per_line.values(), default=1))


def rectangles_stabbed(R: Partition, line: StabLine) -> int:
    """Number of rectangles whose closure meets the open stab line."""
    n = 0
    for r in R.rectangles:
        if line.axis == HORIZONTAL:
            if r.y0 < line.level < r.y1 and r.x1 > line.lo and r.x0 < line.hi:
                n += 1
        elif r.x0 < line.level < r.x1 and r.y1 > line.lo and r.y0 < line.hi:
            n += 1
    return n


def maximal_segments(R: Partition) -> list[Segment]:
    return sorted(R.segments)


# --- dragging normalization ----------------------------------------------------------


class _IndexSpace:
    """Pieces as index keys on the refined grid, with optional transposition."""

    def __init__(self, R: Partition):
        self.grid = _Grid(R.polygon, R.segments)
        self.xs, self.ys = self.grid.xs, self.grid.ys
        xi = {x: i for i, x in enumerate(self.xs)}
        yi = {y: j for j, y in enumerate(self.ys)}
        self.xi, self.yi = xi, yi
        reflex, convex = classify_vertices(R.polygon)
        self.reflex = {(xi[v.x], yi[v.y]) for v in reflex}
        self.vertices = {(xi[v.x], yi[v.y]) for v in reflex | convex}
        self.boundary = {self.key(s) for s in self.grid.boundary}

    def key(self, s: Segment):
        i, j = self.xi[s.p.x], self.yi[s.p.y]
        return ("h", i, j) if s.axis == HORIZONTAL else ("v", i, j)

    def segment(self, k) -> Segment:
        o, i, j = k
        if o == "h":
            return Segment(Point(self.xs[i], self.ys[j]), Point(self.xs[i + 1], self.ys[j]))
        return Segment(Point(self.xs[i], self.ys[j]), Point(self.xs[i], self.ys[j + 1]))


def _transpose_key(k):
    o, i, j = k
    return ("v" if o == "h" else "h", j, i)


def _runs(sel) -> list[tuple[str, int, int, int]]:
    """Maximal runs (orientation, line index, start, end) of selected index pieces."""
    lines: dict[tuple[str, int], list[int]] = {}
    for o, i, j in sel:
        if o == "h":
            lines.setdefault(("h", j), []).append(i)
        else:
            lines.setdefault(("v", i), []).append(j)
    out = []
    for (o, line), idx in lines.items():
        idx.sort()
        start = prev = idx[0]
        for c in idx[1:]:
            if c != prev + 1:
                out.append((o, line, start, prev + 1))
                start = c
            prev = c
        out.append((o, line, start, prev + 1))
    return out


def _drag_horizontal(sel, boundary, vertices, j0, ia, ib, ny):
    """Apply one deletion or drag to the horizontal run at row j0, columns [ia, ib)."""
    inner = range(ia + 1, ib)
    up = {i: ("v", i, j0) in sel for i in inner}
    down = {i: ("v", i, j0 - 1) in sel for i in inner}
    n_up = sum(1 for i in inner if up[i] and not down[i])
    n_down = sum(1 for i in inner if down[i] and not up[i])
    for i in range(ia, ib):
        sel.discard(("h", i, j0))
    if n_up == 0 and n_down == 0:
        return

    def event(j):
        if any(("h", i, j) in sel or ("h", i, j) in boundary for i in range(ia, ib)):
            return True
        return any((i, j) in vertices for i in range(ia, ib + 1))

    j_up = next(j for j in range(j0 + 1, ny) if event(j))
    j_down = next(j for j in range(j0 - 1, -1, -1) if event(j))
    # r1 is the side with at least as many attached perpendicular segments;
    # ties go to the side whose rectangle has the smaller lower-left corner.
    if n_up > n_down or (n_up == n_down and (ia, j0) < (ia, j_down)):
        target, rows, keep = j_up, range(j0, j_up), down
    else:
        target, rows, keep = j_down, range(j_down, j0), up
    for i in inner:
        for r in rows:
            k = ("v", i, r)
            if keep[i]:
                sel.add(k)
            else:
                sel.discard(k)
    for i in range(ia, ib):
        k = ("h", i, target)
        if k not in boundary:
            sel.add(k)


def normalize_dragging(R: Partition) -> Partition:
    """Drag or delete maximal segments until each has a reflex endpoint.

    Never increases the stabbing number. Segments are processed in
    lexicographic order of their canonical endpoints.
    """
    space = _IndexSpace(R)
    sel = {space.key(p) for s in R.segments for p in space.grid.split(s)}
    span = (space.xs[-1] - space.xs[0]) + (space.ys[-1] - space.ys[0])
    guard = max(1, len(R.segments)) * max(1, span) + 1
    nx, ny = len(space.xs), len(space.ys)
    t_boundary = {_transpose_key(k) for k in space.boundary}
    t_vertices = {(j, i) for i, j in space.vertices}
    for _ in range(guard):
        loose = []
        for o, line, a, b in _runs(sel):
            ends = [(a, line), (b, line)] if o == "h" else [(line, a), (line, b)]
            if not any(e in space.reflex for e in ends):
                if o == "h":
                    p, q = (space.xs[a], space.ys[line]), (space.xs[b], space.ys[line])
                else:
                    p, q = (space.xs[line], space.ys[a]), (space.xs[line], space.ys[b])
                loose.append(((p, q), o, line, a, b))
        if not loose:
            break
        _, o, line, a, b = min(loose)
        if o == "h":
            _drag_horizontal(sel, space.boundary, space.vertices, line, a, b, ny)
        else:
            tsel = {_transpose_key(k) for k in sel}
            _drag_horizontal(tsel, t_boundary, t_vertices, line, a, b, nx)
            sel = {_transpose_key(k) for k in tsel}
    else:
        raise IterationGuardExceeded(f"dragging did not settle after {guard} steps")
    segs = [space.segment(k) for k in sel]
    internal = None
    if R.internal is not None:
        internal = _internal_cover(R.polygon, set(segs))
    return partition_from_segments(R.polygon, _merge_runs(segs) if segs else [], internal)


def _internal_cover(P: OrthoPolygon, pieces: set[Segment]) -> frozenset[int] | None:
    A = build_arrangement(P)
    grid = _Grid(P)
    chosen, covered = set(), set()
    for i, e in enumerate(A.internal_edges):
        parts = grid.split(e)
        if all(p in pieces for p in parts):
            chosen.add(i)
            covered.update(parts)
    return frozenset(chosen) if covered == pieces else None
