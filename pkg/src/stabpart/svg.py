"""Standalone SVG figures of polygons, arrangements, LP values and partitions."""
from __future__ import annotations

from .formulation import fmt_rational
from .geometry import build_arrangement

SCALE = 40
MARGIN = 20

_STYLE = """
.polygon { fill: #f4f4f4; stroke: #000; stroke-width: 2; }
.grid { stroke: #888; stroke-width: 1; stroke-dasharray: 4 3; }
.face { fill: #cfe3f7; stroke: none; }
.segment { stroke: #c0392b; stroke-width: 2.5; }
.label { font: 11px sans-serif; fill: #1a5276; text-anchor: middle; }
.reflex { fill: #c0392b; } .convex { fill: #000; }
.steiner { fill: #27ae60; } .border { fill: #8e44ad; }
"""


def render_svg(P, values=None, partition=None, selected=()) -> str:
    """SVG text for polygon ``P``.

    ``values`` maps edge segments to rationals printed at their midpoints;
    ``partition`` shades its rectangles and draws its segments solid;
    ``selected`` is an extra iterable of segments drawn solid.
    """
    A = build_arrangement(P)
    xs, ys = P.xs, P.ys
    w = (xs[-1] - xs[0]) * SCALE + 2 * MARGIN
    h = (ys[-1] - ys[0]) * SCALE + 2 * MARGIN

    def X(x):
        return MARGIN + float(x - xs[0]) * SCALE

    def Y(y):
        return MARGIN + float(ys[-1] - y) * SCALE

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f"<style>{_STYLE}</style>",
    ]
    d = " ".join(
        f"{'M' if i == 0 else 'L'} {X(v.x):g} {Y(v.y):g}" for i, v in enumerate(P.vertices)
    )
    out.append(f'<path class="polygon" d="{d} Z"/>')
    if partition is not None:
        for r in partition.rectangles:
            out.append(
                f'<rect class="face" x="{X(r.x0):g}" y="{Y(r.y1):g}" '
                f'width="{(r.x1 - r.x0) * SCALE:g}" height="{(r.y1 - r.y0) * SCALE:g}"/>'
            )
    for e in A.internal_edges:
        out.append(_line("grid", e, X, Y))
    solid = list(selected) + (sorted(partition.segments) if partition is not None else [])
    for e in solid:
        out.append(_line("segment", e, X, Y))
    for e, val in sorted((values or {}).items()):
        mx, my = (e.p.x + e.q.x) / 2, (e.p.y + e.q.y) / 2
        dy = -4 if e.axis == "horizontal" else 4
        out.append(
            f'<text class="label" x="{X(mx):g}" y="{Y(my) + dy:g}">{fmt_rational(val)}</text>'
        )
    for cls, pts in (
        ("convex", A.convex),
        ("reflex", A.reflex),
        ("steiner", A.steiner),
        ("border", A.border),
    ):
        for v in sorted(pts):
            out.append(f'<circle class="{cls}" cx="{X(v.x):g}" cy="{Y(v.y):g}" r="3"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _line(cls, e, X, Y) -> str:
    return (
        f'<line class="{cls}" x1="{X(e.p.x):g}" y1="{Y(e.p.y):g}" '
        f'x2="{X(e.q.x):g}" y2="{Y(e.q.y):g}"/>'
    )
