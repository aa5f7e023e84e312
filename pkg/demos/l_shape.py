"""Walk through the whole pipeline on the smallest interesting polygon.

The L-shaped hexagon has a single reflex vertex. Its two grid extensions
give two candidate edges, and the relaxation already sits half way between
the one-cut and two-cut partitions.

Run:  python demos/l_shape.py [figure.svg]
"""
import sys
from pathlib import Path

from stabpart import RPST, branch_and_bound, build_arrangement, build_model, relax, simplex
from stabpart.formulation import export_lp_text
from stabpart.rectio import read_rect
from stabpart.rounding import round_and_check
from stabpart.svg import render_svg

HERE = Path(__file__).resolve().parent
P = read_rect(HERE.parent / "tests" / "data" / "L6.rect")
A = build_arrangement(P)

print("reflex vertices:", sorted(A.reflex))
print("candidate edges:", list(A.internal_edges))
print()

ip = build_model(A, RPST)
print(export_lp_text(ip))

lp = relax(ip)
sol = simplex(lp).require_optimal()
print("LP optimum k* =", sol.objective)
for v in lp.edge_vars:
    print(f"  {v.name} ({v.orientation}) = {sol.values[v.id]}")

res = branch_and_bound(ip)
print("integer optimum:", res.k_opt, "after", res.nodes, "nodes")

out = round_and_check(A, RPST)
print("rounded selection feasible:", out.report.feasible)
print("rounded stabbing number:", out.rounded_stab, "ratio", out.ratio)

if len(sys.argv) > 1:
    values = {A.internal_edges[v.id]: sol.values[v.id] for v in lp.edge_vars}
    Path(sys.argv[1]).write_text(render_svg(P, values=values))
    print("figure written to", sys.argv[1])
