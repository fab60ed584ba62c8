"""MinA computation on the partial MaxSAT instance.

All MinAs come from MCS enumeration followed by minimal hitting set
dualization: every MUS of the instance is a minimal hitting set of its
MCSes, and the MUSes over the soft selector clauses are exactly the MinAs.
A single MinA is extracted directly by core-guided deletion.

Sets handed in and out of this module are frozensets of normalized-axiom ids.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations

from ._gcpause import without_gc
from .classify import classify, holds
from .encode import (
    CONST_TRUE,
    PinpointInstance,
    build_instance,
    build_pinpoint_formula,
    coi_reduce,
    is_trivial_query,
)
from .errors import GuardError, InstanceSatisfiable, QueryNotEntailed
from .normalize import NormalizedTBox
from .satcore import Solver, new_solver

BRUTE_FORCE_LIMIT = 20


@dataclass
class Budget:
    """Limits checked between solver calls; ``None`` means unlimited."""

    time_limit: float = None
    max_solver_calls: int = None
    max_mcses: int = None


class BudgetExceeded(Exception):
    pass


class _Meter:
    """Counts solver calls and enforces a budget at call boundaries."""

    def __init__(self, budget: Budget = None):
        self.budget = budget or Budget()
        self.start = time.monotonic()
        self.calls = 0

    def check(self):
        b = self.budget
        if b.max_solver_calls is not None and self.calls >= b.max_solver_calls:
            raise BudgetExceeded("solver call limit")
        if b.time_limit and time.monotonic() - self.start >= b.time_limit:
            raise BudgetExceeded("time limit")

    def solve(self, solver: Solver, assumptions, enforce=True):
        if enforce:
            self.check()
        self.calls += 1
        return solver.solve_under(assumptions)


@dataclass
class EnumerationReport:
    minas: list
    mcses: list
    complete: bool
    stats: dict = field(default_factory=dict)


def _sort_sets(sets) -> list:
    return sorted(set(sets), key=lambda s: sorted(s))


def _hard_solver(i: PinpointInstance) -> Solver:
    return new_solver(i.var_count, i.hard)


def _selectors(i: PinpointInstance, axioms) -> list:
    sel = i.formula.axiom_selector
    return sorted(sel[a] for a in axioms if sel[a] != CONST_TRUE)


def extract_one_mina(i: PinpointInstance, solver: Solver = None, meter: _Meter = None) -> frozenset:
    """One MinA by deletion, starting from the core of all soft assumptions."""
    solver = solver or _hard_solver(i)
    meter = meter or _Meter()
    res = meter.solve(solver, i.soft)
    if res.sat:
        raise InstanceSatisfiable("hard and soft clauses are jointly satisfiable")
    cand = sorted(lit for lit in set(res.core) if lit > 0)
    k = 0
    while k < len(cand):
        trial = cand[:k] + cand[k + 1:]
        res = meter.solve(solver, trial)
        if res.sat:
            k += 1
        else:
            # necessary elements survive in every core, and stay the k smallest
            core = set(res.core)
            cand = [s for s in trial if s in core]
    return i.axioms_of(cand)


def enumerate_mcses(i: PinpointInstance, budget: Budget = None, meter: _Meter = None):
    """All MCSes by repeated grow-to-MSS with blocking clauses.

    Returns ``(mcses, complete)``.  ``complete`` is False when the budget ran
    out; the MCSes found so far are still returned.
    """
    meter = meter or _Meter(budget)
    solver = _hard_solver(i)
    soft = i.soft
    mcses = []
    try:
        while True:
            res = meter.solve(solver, [])
            if not res.sat:
                return mcses, True
            max_mcses = meter.budget.max_mcses
            if max_mcses is not None and len(mcses) >= max_mcses:
                return mcses, False
            satisfied = {s for s in soft if res.model[s]}
            for s in soft:
                if s in satisfied:
                    continue
                res = meter.solve(solver, sorted(satisfied) + [s])
                if res.sat:
                    satisfied = {t for t in soft if res.model[t]}
            mcs = [s for s in soft if s not in satisfied]
            if not mcs:
                return [], True
            mcses.append(i.axioms_of(mcs))
            solver.add_clause(mcs)
    except BudgetExceeded:
        return mcses, False


def minimal_hitting_sets(sets) -> list:
    """All inclusion-minimal sets hitting every set in ``sets``.

    Branch on the element hitting the most remaining sets (include, then
    exclude); leaves are kept only if every chosen element is critical.
    """
    family = [frozenset(s) for s in sets]
    if any(not s for s in family):
        return []
    results = []

    def minimal(chosen):
        for e in chosen:
            rest = chosen - {e}
            if all(s & rest for s in family):
                return False
        return True

    def rec(chosen, remaining, excluded):
        if not remaining:
            if minimal(chosen):
                results.append(chosen)
            return
        counts = {}
        for s in remaining:
            if s <= excluded:
                return
            for e in s:
                if e not in excluded:
                    counts[e] = counts.get(e, 0) + 1
        e = min(counts, key=lambda x: (-counts[x], x))
        rec(chosen | {e}, [s for s in remaining if e not in s], excluded)
        rec(chosen, remaining, excluded | {e})

    rec(frozenset(), family, frozenset())
    return _sort_sets(results)


def verify_mina(i: PinpointInstance, m, solver: Solver = None, meter: _Meter = None) -> bool:
    """True iff hard clauses plus ``m``'s selectors are minimally unsatisfiable."""
    solver = solver or _hard_solver(i)
    meter = meter or _Meter()
    m = frozenset(m)
    sel = i.formula.axiom_selector
    if any(sel.get(a, CONST_TRUE) == CONST_TRUE for a in m):
        return False
    assumptions = _selectors(i, m)
    if meter.solve(solver, assumptions, enforce=False).sat:
        return False
    for s in assumptions:
        if not meter.solve(solver, [t for t in assumptions if t != s], enforce=False).sat:
            return False
    return True


def enumerate_minas(i: PinpointInstance, budget: Budget = None) -> EnumerationReport:
    """MCS enumeration followed by hitting-set dualization."""
    meter = _Meter(budget)
    mcses, complete = enumerate_mcses(i, meter=meter)
    if complete and not mcses:
        candidates = []
    else:
        candidates = minimal_hitting_sets(mcses)
    checker = _hard_solver(i)
    minas = []
    rejected = 0
    for m in candidates:
        if verify_mina(i, m, checker, meter):
            minas.append(m)
        elif complete:
            raise AssertionError(f"hitting set {sorted(m)} of a complete MCS family is not a MUS")
        else:
            rejected += 1
    stats = {
        "solver_calls": meter.calls,
        "rejected_candidates": rejected,
        "wall_time": time.monotonic() - meter.start,
    }
    return EnumerationReport(minas, mcses, complete, stats)


def brute_force_minas(t: NormalizedTBox, query) -> list:
    """Every inclusion-minimal sub-TBox entailing ``query``, by re-classification.

    Trivial axioms are always kept; only the non-trivial ones are enumerated.
    """
    ids = t.nontrivial_ids()
    if len(ids) > BRUTE_FORCE_LIMIT:
        raise GuardError(f"{len(ids)} non-trivial axioms exceed the limit of {BRUTE_FORCE_LIMIT}")
    trivial = [a.id for a in t.axioms if a.is_trivial]
    sub, sup = query
    found = []
    for size in range(len(ids) + 1):
        for combo in combinations(ids, size):
            s = frozenset(combo)
            if any(m <= s for m in found):
                continue
            if holds(classify(t.restrict(list(s) + trivial)), sub, sup):
                found.append(s)
    return _sort_sets(found)


@dataclass
class Explanation:
    """Result of a full query: MinAs plus the instance they were computed on."""

    query: tuple
    entailed: bool
    minas: list
    mcses: list
    complete: bool
    instance: PinpointInstance = None
    stats: dict = field(default_factory=dict)


@without_gc
def explain(
    t: NormalizedTBox,
    query,
    mode: str = "all",
    coi: bool = True,
    budget: Budget = None,
    formula=None,
) -> Explanation:
    """Classify, encode and pinpoint ``query`` over ``t``.

    ``mode`` is ``"all"`` or ``"one"``.  Trivial queries are entailed by the
    empty set; unentailed queries have no MinAs.
    """
    start = time.monotonic()
    if is_trivial_query(*query):
        return Explanation(query, True, [frozenset()], [], True, stats={"wall_time": 0.0})
    if formula is None:
        formula = build_pinpoint_formula(classify(t))
    try:
        inst = build_instance(formula, query)
    except QueryNotEntailed:
        return Explanation(query, False, [], [], True, stats={"wall_time": time.monotonic() - start})
    full_size = len(inst.hard)
    if coi:
        inst = coi_reduce(inst)
    if mode == "one":
        meter = _Meter(budget)
        try:
            m = extract_one_mina(inst, meter=meter)
            minas, complete = [m], False
        except BudgetExceeded:
            minas, complete = [], False
        stats = {"solver_calls": meter.calls}
        mcses = []
    else:
        report = enumerate_minas(inst, budget)
        minas, mcses, complete, stats = report.minas, report.mcses, report.complete, report.stats
    stats = dict(stats)
    stats.update(
        wall_time=time.monotonic() - start,
        hard_clauses=len(inst.hard),
        hard_clauses_full=full_size,
        soft_clauses=len(inst.soft),
    )
    return Explanation(query, True, minas, mcses, complete, inst, stats)
