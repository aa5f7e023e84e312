"""Reading and writing ``.rect`` polygon files.

Grammar: optional ``#`` comment lines (and blank lines) anywhere; the first
other line is the vertex count ``n``; then ``n`` lines ``x y`` of signed
integers, in either orientation.
"""
from __future__ import annotations

from .geometry import OrthoPolygon, TooFewVertices, validate_polygon


class RectSyntaxError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_rect(text: str) -> OrthoPolygon:
    rows = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), 1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not rows:
        raise RectSyntaxError("missing vertex count", 1)
    no, first = rows[0]
    try:
        n = int(first)
    except ValueError:
        raise RectSyntaxError(f"expected vertex count, got {first!r}", no) from None
    if n < 0:
        raise RectSyntaxError("negative vertex count", no)
    pts = []
    for no, ln in rows[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise RectSyntaxError(f"expected 'x y', got {ln!r}", no)
        try:
            pts.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise RectSyntaxError(f"non-integer coordinate in {ln!r}", no) from None
    if len(pts) != n:
        raise RectSyntaxError(f"header says {n} vertices, found {len(pts)}", rows[-1][0])
    if n < 4:
        raise TooFewVertices(f"need at least 4 vertices, got {n}")
    return validate_polygon(pts)


def write_rect(P: OrthoPolygon, comment: str | None = None) -> str:
    """Canonical text: CCW, starting at the lexicographically smallest vertex."""
    P = P.canonical()
    out = []
    if comment:
        out += [f"# {ln}" for ln in comment.splitlines()]
    out.append(str(len(P)))
    out += [f"{v.x} {v.y}" for v in P.vertices]
    return "\n".join(out) + "\n"


def read_rect(path) -> OrthoPolygon:
    with open(path) as fh:
        return parse_rect(fh.read())
