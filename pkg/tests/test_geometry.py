from fractions import Fraction
import math

import pytest
from hypothesis import given, settings, strategies as st

from stabpart.generator import generate_polygon
from stabpart.geometry import (
    Collinear,
    GeometryError,
    NoCommonEndpoint,
    NonRectilinear,
    Point,
    SelfIntersecting,
    Segment,
    TooFewVertices,
    build_arrangement,
    build_grid,
    classify_vertices,
    edge_angle,
    seg,
    segment_intersection,
    validate_polygon,
)

polygons = st.builds(
    generate_polygon,
    st.sampled_from([4, 6, 8, 10, 12, 14]),
    st.integers(0, 10_000),
)


def test_segment_is_canonical():
    s = seg(3, 1, 0, 1)
    assert s.p == Point(0, 1) and s.q == Point(3, 1)
    assert s.axis == "horizontal" and s.length == 3
    assert s.other(Point(0, 1)) == Point(3, 1)
    with pytest.raises(NoCommonEndpoint):
        s.other(Point(1, 1))


def test_segment_rejects_bad_input():
    with pytest.raises(NonRectilinear):
        seg(0, 0, 1, 1)
    with pytest.raises(GeometryError):
        seg(2, 2, 2, 2)


def test_segment_intersection_cases():
    assert segment_intersection(seg(0, 0, 2, 0), seg(1, -1, 1, 1)) == Point(1, 0)
    assert segment_intersection(seg(0, 0, 2, 0), seg(3, -1, 3, 1)) is None
    assert segment_intersection(seg(0, 0, 2, 0), seg(2, 0, 5, 0)) == Point(2, 0)
    assert segment_intersection(seg(0, 0, 3, 0), seg(1, 0, 5, 0)) == seg(1, 0, 3, 0)
    assert segment_intersection(seg(0, 0, 3, 0), seg(0, 1, 3, 1)) is None


def test_edge_angle():
    assert edge_angle(seg(0, 0, 1, 0), seg(0, 0, 0, 1)) == pytest.approx(math.pi / 2)
    assert edge_angle(seg(0, 0, 1, 0), seg(-1, 0, 0, 0)) == pytest.approx(math.pi)
    assert edge_angle(seg(0, 0, 1, 0), seg(0, 0, 1, 0)) == 0.0
    with pytest.raises(NoCommonEndpoint):
        edge_angle(seg(0, 0, 1, 0), seg(5, 5, 5, 6))


@pytest.mark.parametrize(
    "verts, exc",
    [
        ([(0, 0), (1, 0), (1, 1)], TooFewVertices),
        ([(0, 0), (2, 1), (2, 2), (0, 2)], NonRectilinear),
        ([(0, 0), (1, 0), (2, 0), (2, 1), (0, 1)], Collinear),
        (
            [(0, 0), (3, 0), (3, 2), (1, 2), (1, 1), (2, 1), (2, 3), (0, 3)],
            SelfIntersecting,
        ),
    ],
)
def test_validate_polygon_rejects(verts, exc):
    with pytest.raises(exc):
        validate_polygon(verts)


def test_validate_polygon_orients_ccw(L6):
    cw = list(reversed(L6.vertices))
    assert validate_polygon(cw).canonical() == L6.canonical()
    closed = list(L6.vertices) + [L6.vertices[0]]
    assert validate_polygon(closed) == L6


def test_contains(L6):
    assert L6.contains(Fraction(1, 2), Fraction(1, 2)) == 1
    assert L6.contains(Fraction(3, 2), Fraction(3, 2)) == -1
    assert L6.contains(1, Fraction(3, 2)) == 0
    assert L6.area == 3


def test_l6_arrangement(A_L6):
    A = A_L6
    assert A.reflex == {Point(1, 1)}
    assert len(A.convex) == 5
    assert A.steiner == frozenset()
    assert set(A.grid_segments) == {seg(0, 1, 1, 1), seg(1, 0, 1, 1)}
    assert len(A.stab_lines) == 4


def test_s3_arrangement(A_S3):
    A = A_S3
    assert A.reflex == {Point(1, 2), Point(2, 1)}
    assert A.steiner == {Point(1, 1)}
    assert len(A.border) == 4
    assert len(A.internal_edges) == 6
    assert len(A.extended_edges) == 6
    assert len(A.stab_lines) == 6
    assert sorted(A.incidence[Point(1, 1)]) == sorted(
        A.internal_index(e)
        for e in A.internal_edges
        if Point(1, 1) in e.endpoints
    )


def test_rectangle_has_empty_arrangement(square):
    A = build_arrangement(square)
    assert not A.reflex and not A.internal_edges and not A.grid_segments
    assert len(A.stab_lines) == 2


@settings(max_examples=60, deadline=None)
@given(polygons)
def test_vertex_class_counts(P):
    reflex, convex = classify_vertices(P)
    assert len(convex) - len(reflex) == 4
    assert len(reflex) + len(convex) == len(P)


@settings(max_examples=60, deadline=None)
@given(polygons)
def test_grid_segments_are_interior_chords(P):
    reflex, _ = classify_vertices(P)
    grid = build_grid(P)
    assert len(grid) <= 2 * len(reflex)
    for s in grid:
        assert P.contains(*s.p) == 0 and P.contains(*s.q) == 0
        mid = (Fraction(s.p.x + s.q.x, 2), Fraction(s.p.y + s.q.y, 2))
        assert P.contains(*mid) == 1
        assert s.p in reflex or s.q in reflex


@settings(max_examples=60, deadline=None)
@given(polygons)
def test_internal_edges_tile_the_grid(P):
    A = build_arrangement(P)
    V = A.vertices
    for s in A.internal_edges:
        # no arrangement vertex strictly inside an internal edge
        assert not any(s.contains(v, strict=True) for v in V)
    for i, g in enumerate(A.grid_segments):
        pieces = [A.internal_edges[j] for j in A.grid_cover[i]]
        assert sum(e.length for e in pieces) == g.length
        assert pieces[0].p == g.p and pieces[-1].q == g.q
    for u in A.steiner:
        assert P.contains(*u) == 1
        assert len(A.incidence[u]) == 4
    for u in A.border:
        assert P.contains(*u) == 0


@settings(max_examples=60, deadline=None)
@given(polygons)
def test_extended_edges_start_at_reflex(P):
    A = build_arrangement(P)
    for i, e in enumerate(A.extended_edges):
        assert e.p in A.reflex or e.q in A.reflex
        cov = A.cover_index[i]
        if len(cov) == 1:
            assert A.internal_edges[cov[0]] == e
        assert sum(A.internal_edges[j].length for j in cov) == e.length


@settings(max_examples=60, deadline=None)
@given(polygons)
def test_stab_lines_are_interior(P):
    A = build_arrangement(P)
    for ln in A.stab_lines:
        if ln.axis == "horizontal":
            ends = [(ln.lo, ln.level), (ln.hi, ln.level)]
            mid = (Fraction(ln.lo + ln.hi, 2), ln.level)
        else:
            ends = [(ln.level, ln.lo), (ln.level, ln.hi)]
            mid = (ln.level, Fraction(ln.lo + ln.hi, 2))
        assert all(P.contains(*e) == 0 for e in ends)
        assert P.contains(*mid) == 1


@settings(max_examples=40, deadline=None)
@given(polygons, st.integers(-50, 50), st.integers(-50, 50))
def test_arrangement_is_translation_invariant(P, dx, dy):
    A = build_arrangement(P)
    Q = validate_polygon([(v.x + dx, v.y + dy) for v in P.vertices])
    B = build_arrangement(Q)

    def shift(s):
        return Segment(Point(s.p.x + dx, s.p.y + dy), Point(s.q.x + dx, s.q.y + dy))

    assert [shift(s) for s in A.internal_edges] == list(B.internal_edges)
    assert {Point(u.x + dx, u.y + dy) for u in A.steiner} == B.steiner
    assert len(A.stab_lines) == len(B.stab_lines)
