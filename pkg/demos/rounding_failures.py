"""Why threshold rounding breaks outside the conforming model.

The staircase S3 has two reflex vertices whose extensions cross at one
Steiner point. With free edges the LP spreads weight thinly. Rounding then
leaves a knee at the Steiner point (edge-based model) or uncovers both
reflex vertices (extended-edge model). The conforming model, where every
cut runs wall to wall, survives the same rounding.

A small random hunt follows, counting failures per model and kind.

Run:  python demos/rounding_failures.py [seeds]
"""
import sys
from collections import Counter
from pathlib import Path

from stabpart import CONFORMING, RPST, RPST2, build_arrangement
from stabpart.formulation import fmt_rational
from stabpart.hunt import HuntConfig, hunt
from stabpart.rectio import read_rect
from stabpart.rounding import round_and_check

HERE = Path(__file__).resolve().parent
A = build_arrangement(read_rect(HERE.parent / "tests" / "data" / "S3.rect"))

for kind in (RPST, RPST2, CONFORMING):
    out = round_and_check(A, kind)
    print(f"{kind:<11} LP {fmt_rational(out.lp_objective):>4}  ", end="")
    if out.report.feasible:
        print("rounding is a partition with stabbing number", out.rounded_stab)
    else:
        print("; ".join(f"{v.kind} at {v.location}" for v in out.report.violations))

count = int(sys.argv[1]) if len(sys.argv) > 1 else 100
records = hunt(HuntConfig(20, count, seed=7))
print(f"\n{len(records)} failing roundings over {count} random 20-gons:")
for (kind, what), n in sorted(Counter((r.model_kind, r.kind) for r in records).items()):
    print(f"  {kind:<6} {what:<16} {n}")
