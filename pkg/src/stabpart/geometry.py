"""Rectilinear polygons and the grid arrangement induced by their reflex vertices.

All input coordinates are integers. Derived structures (Steiner points,
border points, internal/extended edges, stab lines) are built once by
:func:`build_arrangement` and never mutated afterwards.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

HORIZONTAL = "horizontal"
VERTICAL = "vertical"

INT32_MIN, INT32_MAX = -(2**31), 2**31 - 1


class GeometryError(ValueError):
    pass


class NonRectilinear(GeometryError):
    pass


class Collinear(GeometryError):
    pass


class SelfIntersecting(GeometryError):
    pass


class TooFewVertices(GeometryError):
    pass


class NoCommonEndpoint(GeometryError):
    pass


class Point(NamedTuple):
    x: int
    y: int

    def __repr__(self):
        return f"({self.x},{self.y})"


@dataclass(frozen=True, order=True)
class Segment:
    """Axis-parallel segment with canonically ordered endpoints (p < q)."""

    p: Point
    q: Point

    def __post_init__(self):
        p, q = Point(*self.p), Point(*self.q)
        if p == q:
            raise GeometryError(f"degenerate segment at {p}")
        if p.x != q.x and p.y != q.y:
            raise NonRectilinear(f"segment {p}-{q} is not axis-parallel")
        if q < p:
            p, q = q, p
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def axis(self) -> str:
        return HORIZONTAL if self.p.y == self.q.y else VERTICAL

    @property
    def length(self):
        return (self.q.x - self.p.x) + (self.q.y - self.p.y)

    @property
    def endpoints(self) -> tuple[Point, Point]:
        return (self.p, self.q)

    def other(self, u: Point) -> Point:
        if u == self.p:
            return self.q
        if u == self.q:
            return self.p
        raise NoCommonEndpoint(f"{u} is not an endpoint of {self}")

    def contains(self, pt, strict: bool = False) -> bool:
        """True when ``pt`` lies on the segment (strictly inside if ``strict``)."""
        x, y = pt
        if self.axis == HORIZONTAL:
            if y != self.p.y:
                return False
            lo, hi, c = self.p.x, self.q.x, x
        else:
            if x != self.p.x:
                return False
            lo, hi, c = self.p.y, self.q.y, y
        return lo < c < hi if strict else lo <= c <= hi

    def __repr__(self):
        return f"{self.p!r}-{self.q!r}"


def seg(x1, y1, x2, y2) -> Segment:
    return Segment(Point(x1, y1), Point(x2, y2))


def segment_intersection(s: Segment, t: Segment):
    """Intersection of two axis-parallel segments.

    Returns ``None``, a :class:`Point`, or a :class:`Segment` (collinear overlap).
    """
    if s.axis == t.axis:
        if s.axis == HORIZONTAL:
            if s.p.y != t.p.y:
                return None
            lo, hi = max(s.p.x, t.p.x), min(s.q.x, t.q.x)
            if lo > hi:
                return None
            y = s.p.y
            return Point(lo, y) if lo == hi else Segment(Point(lo, y), Point(hi, y))
        if s.p.x != t.p.x:
            return None
        lo, hi = max(s.p.y, t.p.y), min(s.q.y, t.q.y)
        if lo > hi:
            return None
        x = s.p.x
        return Point(x, lo) if lo == hi else Segment(Point(x, lo), Point(x, hi))
    h, v = (s, t) if s.axis == HORIZONTAL else (t, s)
    pt = Point(v.p.x, h.p.y)
    if h.contains(pt) and v.contains(pt):
        return pt
    return None


_DIRECTION = {(1, 0): 0, (0, 1): 1, (-1, 0): 2, (0, -1): 3}


def direction_code(u: Point, v: Point) -> int:
    """Quarter-turn index of the direction from ``u`` to ``v`` (0=E, 1=N, 2=W, 3=S)."""
    dx, dy = v[0] - u[0], v[1] - u[1]
    return _DIRECTION[((dx > 0) - (dx < 0), (dy > 0) - (dy < 0))]


def edge_angle(ua: Segment, ub: Segment) -> float:
    """Angle at the shared endpoint of two axis-parallel segments: 0, pi/2 or pi."""
    common = set(ua.endpoints) & set(ub.endpoints)
    if not common:
        raise NoCommonEndpoint(f"{ua} and {ub} share no endpoint")
    if ua == ub:
        return 0.0
    u = common.pop()
    turn = (direction_code(u, ub.other(u)) - direction_code(u, ua.other(u))) % 4
    return (0.0, math.pi / 2, math.pi, math.pi / 2)[turn]


@dataclass(frozen=True)
class OrthoPolygon:
    """Simple rectilinear polygon, counterclockwise."""

    vertices: tuple[Point, ...]

    def __len__(self):
        return len(self.vertices)

    def edges(self) -> list[tuple[Point, Point]]:
        """Directed boundary edges in CCW order."""
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    @property
    def area(self) -> int:
        return signed_area2(self.vertices) // 2

    @property
    def xs(self) -> list[int]:
        return sorted({v.x for v in self.vertices})

    @property
    def ys(self) -> list[int]:
        return sorted({v.y for v in self.vertices})

    def contains(self, x, y) -> int:
        """1 strictly inside, 0 on the boundary, -1 outside. Accepts rationals."""
        inside = False
        for a, b in self.edges():
            if a.x == b.x:
                lo, hi = min(a.y, b.y), max(a.y, b.y)
                if x == a.x and lo <= y <= hi:
                    return 0
                if lo <= y < hi and x < a.x:
                    inside = not inside
            else:
                lo, hi = min(a.x, b.x), max(a.x, b.x)
                if y == a.y and lo <= x <= hi:
                    return 0
        return 1 if inside else -1

    def canonical(self) -> OrthoPolygon:
        """Same polygon, rotated to start at its lexicographically smallest vertex."""
        i = self.vertices.index(min(self.vertices))
        return OrthoPolygon(self.vertices[i:] + self.vertices[:i])


def signed_area2(vertices) -> int:
    n = len(vertices)
    return sum(
        vertices[i][0] * vertices[(i + 1) % n][1] - vertices[(i + 1) % n][0] * vertices[i][1]
        for i in range(n)
    )


def validate_polygon(vertices) -> OrthoPolygon:
    """Check a vertex list and return it as a CCW :class:`OrthoPolygon`."""
    pts = [Point(int(x), int(y)) for x, y in vertices]
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    if len(pts) < 4:
        raise TooFewVertices(f"need at least 4 vertices, got {len(pts)}")
    for p in pts:
        if not (INT32_MIN <= p.x <= INT32_MAX and INT32_MIN <= p.y <= INT32_MAX):
            raise GeometryError(f"coordinate out of 32-bit range at {p}")
    n = len(pts)
    axes = []
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if a == b:
            raise NonRectilinear(f"repeated vertex {a}")
        if a.x != b.x and a.y != b.y:
            raise NonRectilinear(f"edge {a}-{b} is not axis-parallel")
        axes.append(a.y == b.y)
    for i in range(n):
        if axes[i - 1] == axes[i]:
            raise Collinear(f"vertex {pts[i]} is collinear with its neighbours")
    segs = [Segment(pts[i], pts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            hit = segment_intersection(segs[i], segs[j])
            if hit is not None:
                raise SelfIntersecting(f"edges {segs[i]} and {segs[j]} touch at {hit}")
    area2 = signed_area2(pts)
    if area2 < 0:
        pts.reverse()
    return OrthoPolygon(tuple(pts))


def _turns(P: OrthoPolygon):
    vs = P.vertices
    n = len(vs)
    for i, v in enumerate(vs):
        a, b = vs[i - 1], vs[(i + 1) % n]
        cross = (v.x - a.x) * (b.y - v.y) - (v.y - a.y) * (b.x - v.x)
        yield i, v, cross


def classify_vertices(P: OrthoPolygon) -> tuple[frozenset[Point], frozenset[Point]]:
    """Split the vertices into (reflex, convex) by interior angle."""
    reflex, convex = set(), set()
    for _, v, cross in _turns(P):
        (convex if cross > 0 else reflex).add(v)
    return frozenset(reflex), frozenset(convex)


def _shoot(P: OrthoPolygon, start: Point, d: tuple[int, int]) -> Point:
    """First boundary point hit by the open ray from ``start`` in direction ``d``."""
    best = None
    for a, b in P.edges():
        s = Segment(a, b)
        if d[0]:
            if s.axis == VERTICAL:
                if s.p.y <= start.y <= s.q.y:
                    t = (s.p.x - start.x) * d[0]
                    if t > 0 and (best is None or t < best):
                        best = t
            elif s.p.y == start.y:
                for c in (s.p.x, s.q.x):
                    t = (c - start.x) * d[0]
                    if t > 0 and (best is None or t < best):
                        best = t
        else:
            if s.axis == HORIZONTAL:
                if s.p.x <= start.x <= s.q.x:
                    t = (s.p.y - start.y) * d[1]
                    if t > 0 and (best is None or t < best):
                        best = t
            elif s.p.x == start.x:
                for c in (s.p.y, s.q.y):
                    t = (c - start.y) * d[1]
                    if t > 0 and (best is None or t < best):
                        best = t
    assert best is not None, "ray escaped the polygon"
    return Point(start.x + best * d[0], start.y + best * d[1])


def reflex_extensions(P: OrthoPolygon) -> dict[Point, tuple[tuple[int, int], tuple[int, int]]]:
    """For each reflex vertex, the two interior directions continuing its boundary edges."""
    vs = P.vertices
    n = len(vs)
    out = {}
    for i, v, cross in _turns(P):
        if cross > 0:
            continue
        a, b = vs[i - 1], vs[(i + 1) % n]
        d_in = ((v.x > a.x) - (v.x < a.x), (v.y > a.y) - (v.y < a.y))
        d_out = ((b.x > v.x) - (b.x < v.x), (b.y > v.y) - (b.y < v.y))
        out[v] = (d_in, (-d_out[0], -d_out[1]))
    return out


def build_grid(P: OrthoPolygon) -> list[Segment]:
    """Maximal interior extensions of the boundary edges at every reflex vertex."""
    found = set()
    for v, dirs in reflex_extensions(P).items():
        for d in dirs:
            found.add(Segment(v, _shoot(P, v, d)))
    return sorted(found)


class StabLine(NamedTuple):
    """Open axis-parallel segment at ``level`` spanning ``(lo, hi)`` strictly inside P.

    A horizontal line sits at y = level with x in (lo, hi); a vertical one at
    x = level with y in (lo, hi).
    """

    axis: str
    level: Fraction
    lo: int
    hi: int

    def crosses(self, s: Segment) -> bool:
        """Transversal crossing test against an integer segment."""
        if self.axis == HORIZONTAL:
            return (
                s.axis == VERTICAL
                and self.lo < s.p.x < self.hi
                and s.p.y < self.level < s.q.y
            )
        return (
            s.axis == HORIZONTAL
            and self.lo < s.p.y < self.hi
            and s.p.x < self.level < s.q.x
        )

    def __repr__(self):
        name = "y" if self.axis == HORIZONTAL else "x"
        return f"{name}={self.level} ({self.lo},{self.hi})"


def strip_lines(P: OrthoPolygon, xs=(), ys=()) -> list[StabLine]:
    """One stab line per (strip, connected component) of the polygon.

    Strips are bounded by consecutive distinct coordinates of the polygon
    vertices together with the optional extra coordinates ``xs``/``ys``.
    """
    edges = [Segment(a, b) for a, b in P.edges()]
    lines = []
    levels_y = sorted(set(P.ys) | set(ys))
    verticals = [e for e in edges if e.axis == VERTICAL]
    for y0, y1 in zip(levels_y, levels_y[1:]):
        m = Fraction(y0 + y1, 2)
        cuts = sorted(e.p.x for e in verticals if e.p.y < m < e.q.y)
        for lo, hi in zip(cuts[::2], cuts[1::2]):
            lines.append(StabLine(HORIZONTAL, m, lo, hi))
    levels_x = sorted(set(P.xs) | set(xs))
    horizontals = [e for e in edges if e.axis == HORIZONTAL]
    for x0, x1 in zip(levels_x, levels_x[1:]):
        m = Fraction(x0 + x1, 2)
        cuts = sorted(e.p.y for e in horizontals if e.p.x < m < e.q.x)
        for lo, hi in zip(cuts[::2], cuts[1::2]):
            lines.append(StabLine(VERTICAL, m, lo, hi))
    return lines


@dataclass(frozen=True, eq=False)
class Arrangement:
    polygon: OrthoPolygon
    reflex: frozenset[Point]
    convex: frozenset[Point]
    steiner: frozenset[Point]
    border: frozenset[Point]
    grid_segments: tuple[Segment, ...]
    boundary_edges: tuple[Segment, ...]
    internal_edges: tuple[Segment, ...]
    extended_edges: tuple[Segment, ...] = ()
    stab_lines: tuple[StabLine, ...] = ()
    incidence: dict[Point, tuple[int, ...]] = field(default_factory=dict)
    cover_index: dict[int, tuple[int, ...]] = field(default_factory=dict)
    grid_cover: dict[int, tuple[int, ...]] = field(default_factory=dict)

    @property
    def vertices(self) -> frozenset[Point]:
        """V^P: reflex, convex, Steiner and border points together."""
        return self.reflex | self.convex | self.steiner | self.border

    def internal_index(self, s: Segment) -> int:
        return self._index(self.internal_edges, s)

    def extended_index(self, s: Segment) -> int:
        return self._index(self.extended_edges, s)

    @staticmethod
    def _index(edges, s):
        i = bisect.bisect_left(edges, s)
        if i == len(edges) or edges[i] != s:
            raise KeyError(s)
        return i


def _points_on(s: Segment, pts) -> list[Point]:
    return sorted(p for p in pts if s.contains(p))


def _chain(pts: list[Point]) -> list[Segment]:
    return [Segment(a, b) for a, b in zip(pts, pts[1:])]


def build_arrangement(P: OrthoPolygon) -> Arrangement:
    """Vertex classes, edge sets, incidence maps and stab lines of ``P``."""
    reflex, convex = classify_vertices(P)
    grid = build_grid(P)
    poly_vertices = reflex | convex

    steiner = set()
    for i, s in enumerate(grid):
        for t in grid[i + 1:]:
            if s.axis != t.axis:
                hit = segment_intersection(s, t)
                if hit is not None and hit not in poly_vertices:
                    steiner.add(hit)
    border = {
        e for s in grid for e in s.endpoints if e not in poly_vertices
    }
    everything = poly_vertices | steiner | border

    internal = sorted({e for s in grid for e in _chain(_points_on(s, everything))})
    boundary = sorted(
        e for a, b in P.edges() for e in _chain(_points_on(Segment(a, b), everything))
    )
    index = {e: i for i, e in enumerate(internal)}

    incidence: dict[Point, list[int]] = {}
    for i, e in enumerate(internal):
        for u in e.endpoints:
            incidence.setdefault(u, []).append(i)

    extended = set()
    for s in grid:
        on = _points_on(s, everything)
        if on[0] in reflex:
            extended.update(Segment(on[0], v) for v in on[1:])
        if on[-1] in reflex:
            extended.update(Segment(u, on[-1]) for u in on[:-1])
    extended = sorted(extended)

    def cover(s: Segment) -> tuple[int, ...]:
        return tuple(index[e] for e in _chain(_points_on(s, everything)))

    return Arrangement(
        polygon=P,
        reflex=reflex,
        convex=convex,
        steiner=frozenset(steiner),
        border=frozenset(border),
        grid_segments=tuple(grid),
        boundary_edges=tuple(boundary),
        internal_edges=tuple(internal),
        extended_edges=tuple(extended),
        stab_lines=tuple(strip_lines(P)),
        incidence={u: tuple(v) for u, v in sorted(incidence.items())},
        cover_index={i: cover(s) for i, s in enumerate(extended)},
        grid_cover={i: cover(s) for i, s in enumerate(grid)},
    )


def extended_edges(A: Arrangement) -> list[Segment]:
    return list(A.extended_edges)


def stabbing_lines(A: Arrangement) -> list[StabLine]:
    return list(A.stab_lines)
