"""Asymmetric LP rounding and diagnosis of the selections it produces.

Horizontal edge variables are kept when their LP value exceeds 1/2, vertical
ones when it is at least 1/2. Nothing is said about Steiner vertices, and in
the general (non-conforming) models the rounded edge set can fail to be a
rectangular partition; :func:`diagnose` reports where and why.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .formulation import (
    EdgeSelection,
    LinearProgram,
    build_model,
    is_horizontal,
    relax,
)
from .geometry import Arrangement, build_arrangement
from .partition import (
    ISLAND,
    KNEE_AT_REFLEX,
    KNEE_AT_STEINER,
    DiagnosticReport,
    Violation,
    planarity_violations,
    stabbing_number,
    validate_partition,
)
from .solver import LpSolution, simplex

HALF = Fraction(1, 2)

__all__ = [
    "DiagnosticReport",
    "RoundingOutcome",
    "Violation",
    "diagnose",
    "round_and_check",
    "round_dm",
    "round_value",
]


def round_value(value: Fraction, horizontal: bool) -> int:
    if horizontal:
        return 1 if value > HALF else 0
    return 1 if value >= HALF else 0


def round_dm(sol: LpSolution, lp: LinearProgram) -> EdgeSelection:
    chosen = frozenset(
        v.id for v in lp.edge_vars if round_value(sol.values[v.id], is_horizontal(v))
    )
    internal = frozenset(i for v in lp.edge_vars if v.id in chosen for i in v.cover)
    return EdgeSelection(lp.model_kind, chosen, internal)


def diagnose(sel: EdgeSelection, A: Arrangement) -> DiagnosticReport:
    """Knees, islands and planarity faults of a selection, by incidence counting."""
    found = []
    edges = A.internal_edges
    for u in sorted(A.reflex):
        if not any(i in sel.derived_internal for i in A.incidence.get(u, ())):
            found.append(Violation(KNEE_AT_REFLEX, u))
    for u in sorted(A.steiner):
        on = [i for i in A.incidence[u] if i in sel.derived_internal]
        if len(on) == 1:
            found.append(Violation(ISLAND, u))
        elif len(on) == 2 and edges[on[0]].axis != edges[on[1]].axis:
            found.append(Violation(KNEE_AT_STEINER, u))
    found += planarity_violations(sel, A)
    return DiagnosticReport.of(found)


@dataclass(frozen=True)
class RoundingOutcome:
    selection: EdgeSelection
    report: DiagnosticReport
    lp_objective: Fraction
    rounded_stab: int | None
    solution: LpSolution

    @property
    def ratio(self) -> Fraction | None:
        if self.rounded_stab is None:
            return None
        return self.rounded_stab / self.lp_objective


def round_and_check(A: Arrangement, model_kind: str) -> RoundingOutcome:
    """Build, relax, solve, round and diagnose one model on one arrangement."""
    lp = relax(build_model(A, model_kind))
    sol = simplex(lp).require_optimal()
    sel = round_dm(sol, lp)
    report = diagnose(sel, A)
    stab = None
    if report.feasible:
        R = validate_partition(sel, A)
        stab = stabbing_number(R, A).stabbing_number
    return RoundingOutcome(sel, report, sol.objective, stab, sol)


def round_polygon(P, model_kind: str) -> RoundingOutcome:
    return round_and_check(build_arrangement(P), model_kind)
