"""Search random polygons for LP roundings that are not rectangular partitions."""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .formulation import RPST, RPST2, fmt_rational
from .generator import GenerationFailed, generate_polygon
from .geometry import (
    OrthoPolygon,
    Point,
    Segment,
    build_arrangement,
    segment_intersection,
    validate_polygon,
)
from .rectio import write_rect
from .rounding import round_and_check

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HuntConfig:
    vertex_target: int
    instance_count: int
    seed: int = 0
    model_kinds: tuple[str, ...] = (RPST, RPST2)
    output_dir: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.vertex_target < 4 or self.vertex_target % 2:
            raise ValueError("vertex_target must be even and >= 4")
        if self.instance_count < 1:
            raise ValueError("instance_count must be >= 1")


@dataclass(frozen=True)
class FailureRecord:
    seed: int | None
    polygon: OrthoPolygon
    model_kind: str
    lp_objective: Fraction
    vertex: Point
    kind: str
    values: dict[int, Fraction] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "seed": self.seed,
                "polygon": [list(v) for v in self.polygon.canonical().vertices],
                "model": self.model_kind,
                "lp_objective": fmt_rational(self.lp_objective),
                "vertex": list(self.vertex),
                "kind": self.kind,
                "values": {f"x{j}": fmt_rational(v) for j, v in sorted(self.values.items())},
            },
            separators=(", ", ": "),
        )

    @classmethod
    def from_json(cls, line: str) -> FailureRecord:
        d = json.loads(line)
        return cls(
            seed=d["seed"],
            polygon=validate_polygon(d["polygon"]).canonical(),
            model_kind=d["model"],
            lp_objective=Fraction(d["lp_objective"]),
            vertex=Point(*d["vertex"]),
            kind=d["kind"],
            values={int(k[1:]): Fraction(v) for k, v in d["values"].items()},
        )


def _location_point(loc) -> Point:
    if isinstance(loc, Point):
        return loc
    s, t = loc
    hit = segment_intersection(s, t)
    return hit.p if isinstance(hit, Segment) else hit


def check_polygon(P: OrthoPolygon, model_kind: str, seed: int | None = None) -> FailureRecord | None:
    """Run the rounding pipeline once; a record when the rounding is infeasible."""
    out = round_and_check(build_arrangement(P), model_kind)
    if out.report.feasible:
        return None
    first = out.report.violations[0]
    values = out.solution.values
    edge_values = {j: v for j, v in values.items() if j != len(values) - 1}
    return FailureRecord(
        seed,
        P.canonical(),
        model_kind,
        out.lp_objective,
        _location_point(first.location),
        first.kind,
        edge_values,
    )


def replay(record: FailureRecord) -> FailureRecord | None:
    return check_polygon(record.polygon, record.model_kind, record.seed)


def _one_seed(args) -> list[FailureRecord]:
    n, seed, kinds = args
    try:
        P = generate_polygon(n, seed)
    except GenerationFailed as exc:
        log.warning("skipping seed %d: %s", seed, exc)
        return []
    return [r for r in (check_polygon(P, kind, seed) for kind in kinds) if r is not None]


def hunt(cfg: HuntConfig) -> list[FailureRecord]:
    """Failures over seeds ``seed .. seed + instance_count - 1``, in seed order."""
    jobs = [
        (cfg.vertex_target, cfg.seed + i, tuple(cfg.model_kinds))
        for i in range(cfg.instance_count)
    ]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            batches = list(pool.map(_one_seed, jobs, chunksize=16))
    else:
        batches = [_one_seed(job) for job in jobs]
    records = [r for batch in batches for r in batch]
    if cfg.output_dir:
        write_records(records, cfg.output_dir)
    return records


def write_records(records, output_dir) -> None:
    os.makedirs(output_dir, exist_ok=True)
    with open(os.path.join(output_dir, "failures.jsonl"), "w") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")
    for r in records:
        name = f"random-{len(r.polygon)}-{r.seed}.rect"
        with open(os.path.join(output_dir, name), "w") as fh:
            fh.write(write_rect(r.polygon, comment=f"seed {r.seed}"))
