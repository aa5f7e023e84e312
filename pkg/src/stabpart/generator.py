"""Random rectilinear polygons grown from unit grid cells."""
from __future__ import annotations

import random

from .geometry import OrthoPolygon, Point, validate_polygon

MAX_ATTEMPTS = 200


class GenerationFailed(RuntimeError):
    pass


def _outline(cells: set[tuple[int, int]]) -> list[Point] | None:
    """Boundary of a cell set as a CCW vertex list, or None if it has holes or pinches."""
    # directed unit edges with the cell on their left
    nxt: dict[tuple[int, int], tuple[int, int]] = {}
    for x, y in cells:
        for a, b, nb in (
            ((x, y), (x + 1, y), (x, y - 1)),
            ((x + 1, y), (x + 1, y + 1), (x + 1, y)),
            ((x + 1, y + 1), (x, y + 1), (x, y + 1)),
            ((x, y + 1), (x, y), (x - 1, y)),
        ):
            if nb not in cells:
                if a in nxt:
                    return None  # pinch point: two boundary edges leave one grid point
                nxt[a] = b
    start = min(nxt)
    loop = [start]
    cur = nxt[start]
    while cur != start:
        loop.append(cur)
        cur = nxt[cur]
    if len(loop) != len(nxt):
        return None  # more than one boundary cycle: a hole
    n = len(loop)
    corners = []
    for i, p in enumerate(loop):
        a, b = loop[i - 1], loop[(i + 1) % n]
        if (p[0] - a[0], p[1] - a[1]) != (b[0] - p[0], b[1] - p[1]):
            corners.append(Point(*p))
    return corners


def generate_polygon(n: int, seed: int, max_attempts: int = MAX_ATTEMPTS) -> OrthoPolygon:
    """A simple rectilinear polygon with exactly ``n`` vertices, deterministic in (n, seed).

    Cells are added one at a time next to the current shape; an addition is
    rejected if it creates a hole or pinch or overshoots ``n`` vertices.
    """
    if n < 4 or n % 2:
        raise ValueError(f"vertex count must be even and >= 4, got {n}")
    side = max(2, n // 2 + 1)
    for attempt in range(max_attempts):
        rng = random.Random(f"{n}:{seed}:{attempt}")
        cells = {(rng.randrange(side), rng.randrange(side))}
        outline = _outline(cells)
        for _ in range(8 * side * side):
            if len(outline) == n:
                return validate_polygon(outline)
            frontier = sorted(
                {
                    (x + dx, y + dy)
                    for x, y in cells
                    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))
                    if 0 <= x + dx < side and 0 <= y + dy < side
                }
                - cells
            )
            if not frontier:
                break
            cell = rng.choice(frontier)
            trial = _outline(cells | {cell})
            if trial is not None and len(trial) <= n:
                cells.add(cell)
                outline = trial
        if len(outline) == n:
            return validate_polygon(outline)
    raise GenerationFailed(f"no {n}-vertex polygon for seed {seed} after {max_attempts} attempts")
