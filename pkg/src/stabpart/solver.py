"""Exact rational LP/IP solving and a brute-force enumeration oracle.

The simplex works on a sparse tableau of ``gmpy2.mpq`` rationals (dict per
row) and uses Bland's rule in both phases, so it terminates on degenerate
problems and is deterministic given the variable order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator

from gmpy2 import mpq

from .formulation import (
    GE,
    LE,
    RPST2,
    EdgeSelection,
    LinearProgram,
    make_selection,
    model_covers,
    model_edges,
)
from .geometry import Arrangement, Segment, segment_intersection
from .partition import LocalChecker

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

ENUMERATION_LIMIT = 24


class SolverError(RuntimeError):
    pass


class Infeasible(SolverError):
    pass


class Unbounded(SolverError):
    pass


class TooLarge(SolverError):
    pass


@dataclass(frozen=True)
class LpSolution:
    status: str
    objective: Fraction | None = None
    values: dict[int, Fraction] | None = None
    iterations: int = 0

    def require_optimal(self) -> LpSolution:
        if self.status == INFEASIBLE:
            raise Infeasible("linear program is infeasible")
        if self.status == UNBOUNDED:
            raise Unbounded("linear program is unbounded")
        return self


@dataclass(frozen=True)
class MipSolution:
    status: str
    k_opt: int | None
    incumbent: EdgeSelection | None
    dual_bound: Fraction | None
    nodes: int


def _q(x) -> mpq:
    x = Fraction(x)
    return mpq(x.numerator, x.denominator)


def _f(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class _Tableau:
    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, c: int, obj: dict, obj_val: list):
        prow = self.rows[r]
        piv = prow[c]
        if piv != 1:
            inv = 1 / piv
            prow = {j: v * inv for j, v in prow.items()}
            self.rows[r] = prow
            self.rhs[r] *= inv
        b = self.rhs[r]
        items = list(prow.items())
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row.get(c)
            if f is None:
                continue
            for j, v in items:
                nv = row.get(j, 0) - f * v
                if nv:
                    row[j] = nv
                else:
                    del row[j]
            self.rhs[i] -= f * b
        f = obj.get(c)
        if f is not None:
            for j, v in items:
                nv = obj.get(j, 0) - f * v
                if nv:
                    obj[j] = nv
                else:
                    del obj[j]
            obj_val[0] -= f * b
        self.basis[r] = c
        self.pivots += 1

    def bland(self, obj: dict, obj_val: list, allowed) -> str:
        """Minimise; ``obj`` holds reduced costs, ``obj_val[0]`` the negated objective."""
        while True:
            entering = min((j for j, d in obj.items() if d < 0 and allowed(j)), default=None)
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is not None and a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering, obj, obj_val)


def simplex(lp: LinearProgram) -> LpSolution:
    """Exact optimum of ``min k`` over the (relaxed) program, two-phase with Bland's rule."""
    variables = lp.variables
    fixed = {}
    cols = {}
    for v in variables:
        if v.upper is not None and v.upper == v.lower:
            fixed[v.id] = _q(v.lower)
        else:
            cols[v.id] = len(cols)
    # free variables are split into a positive and a negative part
    neg = {}
    for v in variables:
        if v.lower is None:
            neg[v.id] = len(cols) + len(neg)
    n_struct = len(cols) + len(neg)
    lower = {v.id: mpq(0) if v.lower is None else _q(v.lower) for v in variables}

    raw = []  # (coeffs over cols, sense, rhs)
    for c in lp.constraints:
        coeffs = {}
        rhs = _q(c.rhs)
        for j, a in c.coefficients:
            a = _q(a)
            rhs -= a * lower[j]
            if j in cols:
                coeffs[cols[j]] = a
            if j in neg:
                coeffs[neg[j]] = -a
        raw.append((coeffs, c.sense, rhs))
    for v in variables:
        if v.id in cols and v.upper is not None:
            row = {cols[v.id]: mpq(1)}
            if v.id in neg:
                row[neg[v.id]] = mpq(-1)
            raw.append((row, LE, _q(v.upper) - lower[v.id]))

    rows, rhs, basis, artificial_rows = [], [], [], []
    n = n_struct
    for coeffs, sense, b in raw:
        if not coeffs:
            ok = b == 0 if sense == "=" else (b <= 0 if sense == GE else b >= 0)
            if not ok:
                return LpSolution(INFEASIBLE)
            continue
        if (sense == GE and b <= 0) or (sense == LE and b < 0):
            coeffs = {j: -a for j, a in coeffs.items()}
            b = -b
            sense = LE if sense == GE else GE
        elif sense == "=" and b < 0:
            coeffs = {j: -a for j, a in coeffs.items()}
            b = -b
        rows.append(dict(coeffs))
        rhs.append(b)
        basis.append(None)
        if sense == LE:
            rows[-1][n] = mpq(1)
            basis[-1] = n
            n += 1
        else:
            if sense == GE:
                rows[-1][n] = mpq(-1)
                n += 1
            artificial_rows.append(len(rows) - 1)
    first_artificial = n
    for r in artificial_rows:
        rows[r][n] = mpq(1)
        basis[r] = n
        n += 1

    tab = _Tableau(rows, rhs, basis)
    if artificial_rows:
        obj: dict[int, mpq] = {}
        obj_val = [mpq(0)]
        for r in artificial_rows:
            for j, a in rows[r].items():
                if j < first_artificial:
                    obj[j] = obj.get(j, 0) - a
            obj_val[0] -= rhs[r]
        obj = {j: d for j, d in obj.items() if d}
        tab.bland(obj, obj_val, lambda j: True)
        if obj_val[0] != 0:
            return LpSolution(INFEASIBLE, iterations=tab.pivots)
        for r in range(len(tab.rows)):
            if tab.basis[r] is not None and tab.basis[r] >= first_artificial:
                c = min((j for j in tab.rows[r] if j < first_artificial), default=None)
                if c is not None:
                    tab.pivot(r, c, {}, [mpq(0)])
        keep = [r for r in range(len(tab.rows)) if tab.basis[r] < first_artificial]
        tab.rows = [
            {j: a for j, a in tab.rows[r].items() if j < first_artificial} for r in keep
        ]
        tab.rhs = [tab.rhs[r] for r in keep]
        tab.basis = [tab.basis[r] for r in keep]

    k = lp.stab_var.id
    obj, obj_val = {}, [mpq(0)]
    if k in cols:
        cost = {cols[k]: mpq(1)}
        if k in neg:
            cost[neg[k]] = mpq(-1)
        obj = dict(cost)
        for r, bcol in enumerate(tab.basis):
            if bcol in cost:
                c_b = cost[bcol]
                for j, a in tab.rows[r].items():
                    obj[j] = obj.get(j, 0) - c_b * a
                obj_val[0] -= c_b * tab.rhs[r]
        obj = {j: d for j, d in obj.items() if d}
    status = tab.bland(obj, obj_val, lambda j: j < first_artificial)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, iterations=tab.pivots)

    y = [mpq(0)] * n_struct
    for r, bcol in enumerate(tab.basis):
        if bcol < n_struct:
            y[bcol] = tab.rhs[r]
    values = {}
    for v in variables:
        if v.id in fixed:
            values[v.id] = _f(fixed[v.id])
        else:
            x = y[cols[v.id]] + lower[v.id]
            if v.id in neg:
                x -= y[neg[v.id]]
            values[v.id] = _f(x)
    return LpSolution(OPTIMAL, values[k], values, tab.pivots)


def _with_bounds(lp: LinearProgram, bounds: dict[int, tuple]) -> LinearProgram:
    variables = tuple(
        replace(v, lower=bounds[v.id][0], upper=bounds[v.id][1]) if v.id in bounds else v
        for v in lp.variables
    )
    return replace(lp, variables=variables)


def branch_and_bound(ip: LinearProgram, node_limit: int | None = None) -> MipSolution:
    """Exact integer optimum by depth-first branch and bound over LP relaxations.

    Branches on the most fractional edge variable (ties: lowest index) and
    tightens ``k >= ceil(node bound)`` in the children since ``k`` is integral.
    """
    relaxed = replace(ip, relaxed=True)
    k = ip.stab_var.id
    edge_ids = [v.id for v in ip.edge_vars]
    half = Fraction(1, 2)
    best_k = None
    best_sel = None
    root_bound = None
    nodes = 0
    stack: list[dict] = [{}]
    while stack:
        bounds = stack.pop()
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise SolverError(f"node limit {node_limit} exceeded")
        sol = simplex(_with_bounds(relaxed, bounds))
        if sol.status != OPTIMAL:
            if sol.status == UNBOUNDED:
                raise Unbounded("relaxation is unbounded")
            continue
        if root_bound is None:
            root_bound = sol.objective
        kb = math.ceil(sol.objective)
        if best_k is not None and kb >= best_k:
            continue
        frac = [
            (abs(sol.values[j] - half), j)
            for j in edge_ids
            if sol.values[j].denominator != 1
        ]
        if not frac:
            best_k = kb
            best_sel = frozenset(j for j in edge_ids if sol.values[j] == 1)
            continue
        _, j = min(frac)
        kbound = (Fraction(kb), None)
        zero = {**bounds, j: (Fraction(0), Fraction(0)), k: kbound}
        one = {**bounds, j: (Fraction(1), Fraction(1)), k: kbound}
        # depth-first; the child nearer the LP value is explored first
        if sol.values[j] >= half:
            stack += [zero, one]
        else:
            stack += [one, zero]
    if best_k is None:
        return MipSolution(INFEASIBLE, None, None, root_bound, nodes)
    covers = [v.cover for v in ip.edge_vars]
    sel = EdgeSelection(
        ip.model_kind, best_sel, frozenset(i for j in best_sel for i in covers[j])
    )
    return MipSolution(OPTIMAL, best_k, sel, root_bound, nodes)


# --- enumeration oracle ----------------------------------------------------------------


def _conflicts(edges: tuple[Segment, ...]) -> dict[int, list[int]]:
    """For each extended edge, the earlier edges it may not coexist with."""
    out: dict[int, list[int]] = {}
    for j, t in enumerate(edges):
        for i in range(j):
            s = edges[i]
            hit = segment_intersection(s, t)
            if hit is None:
                continue
            if isinstance(hit, Segment) or (hit not in s.endpoints and hit not in t.endpoints):
                out.setdefault(j, []).append(i)
    return out


def enumerate_selections(
    A: Arrangement, model_kind: str, limit: int = ENUMERATION_LIMIT
) -> Iterator[EdgeSelection]:
    """Every selection of model edges that induces a rectangular partition.

    Exhaustive over all subsets; partial assignments are cut as soon as a
    vertex whose incident edges are all decided fails the local angular test.
    Independent of the constraint matrices.
    """
    edges = model_edges(A, model_kind)
    if len(edges) > limit:
        raise TooLarge(f"{len(edges)} edges exceed the enumeration limit {limit}")
    covers = model_covers(A, model_kind)
    checker = LocalChecker(A)
    conflicts = _conflicts(edges) if model_kind == RPST2 else {}
    n = len(edges)
    due: dict[int, list] = {}
    for u in A.vertices:
        touching = [i for i in range(n) if any(u in A.internal_edges[c].endpoints for c in covers[i])]
        due.setdefault(max(touching, default=-1), []).append(u)
    chosen: list[int] = []
    internal: dict[int, int] = {}

    def vertices_ok(i: int) -> bool:
        return all(checker.violation(u, internal) is None for u in due.get(i, ()))

    def rec(i: int):
        if i == n:
            yield make_selection(A, model_kind, chosen)
            return
        for take in (False, True):
            if take:
                if any(c in chosen for c in conflicts.get(i, ())):
                    continue
                chosen.append(i)
                for c in covers[i]:
                    internal[c] = internal.get(c, 0) + 1
            if vertices_ok(i):
                yield from rec(i + 1)
            if take:
                chosen.pop()
                for c in covers[i]:
                    internal[c] -= 1
                    if not internal[c]:
                        del internal[c]

    if vertices_ok(-1):
        yield from rec(0)


def selection_stabbing(A: Arrangement, internal) -> int:
    """Stabbing number of an internal-edge set by direct per-line counting."""
    best = 1
    for line in A.stab_lines:
        best = max(best, 1 + sum(1 for i in internal if line.crosses(A.internal_edges[i])))
    return best


def brute_force(A: Arrangement, model_kind: str, limit: int = ENUMERATION_LIMIT) -> MipSolution:
    """Minimum stabbing number over all valid selections, by enumeration."""
    best = None
    count = 0
    for sel in enumerate_selections(A, model_kind, limit):
        count += 1
        k = selection_stabbing(A, sel.derived_internal)
        if best is None or k < best[0]:
            best = (k, sel)
    if best is None:
        return MipSolution(INFEASIBLE, None, None, None, count)
    return MipSolution(OPTIMAL, best[0], best[1], Fraction(best[0]), count)
