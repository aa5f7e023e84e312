"""Dragging a partition onto the reflex grid.

Any rectangular partition can be pushed, one maximal segment at a time,
until every segment ends at a reflex vertex. Segments with nothing attached
vanish. The others slide toward the side with more attached perpendicular
segments until they hit something. The stabbing number never goes up, which
is why optimal partitions can be searched for on the grid alone.

Run:  python demos/dragging.py
"""
from stabpart import normalize_dragging, stabbing_number, validate_polygon
from stabpart.geometry import seg
from stabpart.partition import partition_from_segments

# an L shape scaled by 4, with cuts placed off the reflex grid
P = validate_polygon([(0, 0), (8, 0), (8, 4), (4, 4), (4, 8), (0, 8)])
R = partition_from_segments(
    P,
    [
        seg(0, 1, 8, 1),  # full-width cut below the reflex level
        seg(2, 1, 2, 8),
        seg(2, 4, 4, 4),  # already ends at the reflex vertex (4,4)
        seg(6, 1, 6, 4),
        seg(2, 6, 4, 6),
    ],
)


def show(title, part):
    print(title)
    for s in sorted(part.segments):
        print("  segment", s)
    print("  rectangles:", len(part.rectangles))
    print("  stabbing number:", stabbing_number(part).stabbing_number)


show("before", R)
N = normalize_dragging(R)
# Most cuts have nothing on one side and disappear; the one left over is
# the horizontal extension of the reflex vertex.
show("after", N)
print("idempotent:", normalize_dragging(N) == N)
