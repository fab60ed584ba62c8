"""Horn encoding of a closure trace and the partial MaxSAT instance built on it.

Each non-trivial normalized axiom gets a selector variable; NF1/NF3 axioms
share their variable with the assertion they state.  Every rule application
becomes one Horn clause ``body -> head``.  Trivial assertions (``C ⊑ C``,
``C ⊑ ⊤``) are constant true and disappear from the clauses.

An instance for query ``C ⊑ D`` has the formula plus ``¬s[C ⊑ D]`` as hard
clauses and one positive unit per axiom selector as soft clauses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from ._gcpause import without_gc
from .classify import SUBS, ClosureTrace
from .errors import QueryNotEntailed
from .normalize import NormalizedTBox, render_normal
from .ontology import TOP

CONST_TRUE = 0


class SelectorVar(NamedTuple):
    index: int
    kind: str  # 'axiom' or 'derived'
    ref: int  # normalized-axiom id or assertion id


class HornClause(NamedTuple):
    body: tuple  # sorted selector indices
    head: int  # selector index, or 0 for ⊥

    def literals(self) -> tuple:
        """DIMACS literals, head last."""
        lits = tuple([-b for b in self.body])
        return lits + (self.head,) if self.head else lits


@dataclass(frozen=True)
class PinpointFormula:
    clauses: tuple
    selectors: tuple  # SelectorVar per index, position 0 unused
    axiom_selector: dict  # normalized-axiom id -> index (0 = constant true)
    assertion_selector: list  # assertion id -> index (0 = constant true)
    trace: ClosureTrace = field(repr=False)

    @property
    def tbox(self) -> NormalizedTBox:
        return self.trace.tbox

    @property
    def var_count(self) -> int:
        return len(self.selectors) - 1


@dataclass(frozen=True)
class PinpointInstance:
    hard: tuple  # clauses as DIMACS literal tuples
    soft: tuple  # positive selector indices
    soft_axiom: dict  # selector index -> normalized-axiom id
    query: int  # selector index of the queried assertion
    var_count: int
    formula: PinpointFormula = field(repr=False, compare=False)

    def axioms_of(self, selectors) -> frozenset:
        return frozenset(self.soft_axiom[s] for s in selectors)

    def selectors_of(self, axioms) -> frozenset:
        index = self.formula.axiom_selector
        return frozenset(index[a] for a in axioms)


@without_gc
def build_pinpoint_formula(c: ClosureTrace) -> PinpointFormula:
    tbox = c.tbox
    selectors = [None]
    axiom_selector = {}
    assertion_selector = [CONST_TRUE] * len(c)
    clauses = []
    seen = set()

    for ax in tbox.axioms:
        if ax.is_trivial:
            axiom_selector[ax.id] = CONST_TRUE
            continue
        idx = len(selectors)
        selectors.append(SelectorVar(idx, "axiom", ax.id))
        axiom_selector[ax.id] = idx

    # NF1/NF3 axioms share the variable of the assertion they state; a second
    # axiom stating the same assertion is linked by an implication instead.
    links = []
    for ax in tbox.axioms:
        aid = c.axiom_assertions.get(ax.id)
        if aid is None or ax.is_trivial:
            continue
        if assertion_selector[aid] == CONST_TRUE:
            assertion_selector[aid] = axiom_selector[ax.id]
        else:
            links.append((axiom_selector[ax.id], aid))

    for aid, (sub, role, sup) in enumerate(c.keys):
        if assertion_selector[aid] != CONST_TRUE:
            continue
        if role == SUBS and (sub == sup or sup == TOP):
            continue
        idx = len(selectors)
        selectors.append(SelectorVar(idx, "derived", aid))
        assertion_selector[aid] = idx

    def add(body, head):
        clause = HornClause(body, head)
        if clause not in seen:
            seen.add(clause)
            clauses.append(clause)

    for sel, aid in links:
        add((sel,), assertion_selector[aid])
    for _, ants, axs, cons in c.applications:
        head = assertion_selector[cons]
        if head == CONST_TRUE:
            continue
        if len(ants) == 1 and len(axs) == 1:
            # the common shape: one premise assertion plus one axiom
            b1 = assertion_selector[ants[0]]
            b2 = axiom_selector[axs[0]]
            if b1 == CONST_TRUE:
                body = (b2,) if b2 else ()
            elif b2 == CONST_TRUE or b1 == b2:
                body = (b1,)
            else:
                body = (b1, b2) if b1 < b2 else (b2, b1)
        else:
            body = [assertion_selector[a] for a in ants]
            body += [axiom_selector[x] for x in axs]
            body = tuple(sorted({b for b in body if b != CONST_TRUE}))
        if head not in body:
            add(body, head)

    return PinpointFormula(tuple(clauses), tuple(selectors), axiom_selector, assertion_selector, c)


def is_trivial_query(sub: int, sup: int) -> bool:
    return sub == sup or sup == TOP


def query_selector(f: PinpointFormula, sub: int, sup: int) -> int:
    aid = f.trace.lookup(sub, sup)
    if aid is None:
        raise QueryNotEntailed(
            f"{f.tbox.symbols.concepts[sub]} <= {f.tbox.symbols.concepts[sup]} is not entailed"
        )
    return f.assertion_selector[aid]


@without_gc
def build_instance(f: PinpointFormula, query: tuple) -> PinpointInstance:
    """Partial MaxSAT instance for ``query = (sub, sup)``.

    Trivial queries have no instance; callers short-circuit them with
    :func:`is_trivial_query` (the answer is the empty MinA).
    """
    sub, sup = query
    if is_trivial_query(sub, sup):
        raise ValueError("trivial query: entailed by the empty axiom set")
    q = query_selector(f, sub, sup)
    hard = tuple(c.literals() for c in f.clauses) + ((-q,),)
    soft = tuple(sorted(s for s in f.axiom_selector.values() if s != CONST_TRUE))
    soft_axiom = {f.axiom_selector[a]: a for a in f.axiom_selector if f.axiom_selector[a]}
    return PinpointInstance(hard, soft, soft_axiom, q, f.var_count, f)


def instance_with_axioms(f: PinpointFormula, query: tuple, axioms) -> tuple:
    """Hard clauses and assumptions testing whether ``axioms`` entail ``query``.

    Returns ``(clauses, assumptions)``, or None when the query is not derived
    at all (then no subset entails it).  Trivial queries return an
    unsatisfiable pair.
    """
    sub, sup = query
    if is_trivial_query(sub, sup):
        return [()], []
    aid = f.trace.lookup(sub, sup)
    if aid is None:
        return None
    q = f.assertion_selector[aid]
    clauses = [c.literals() for c in f.clauses]
    assumptions = [f.axiom_selector[a] for a in sorted(axioms) if f.axiom_selector[a]]
    return clauses, assumptions + [-q]


@without_gc
def coi_reduce(i: PinpointInstance) -> PinpointInstance:
    """Keep only clauses backward-reachable from the query selector."""
    # hard clauses are Horn with the head (if any) as last literal
    by_head = {}
    for k, cl in enumerate(i.hard):
        if cl and cl[-1] > 0:
            by_head.setdefault(cl[-1], []).append(k)
    marked = {i.query}
    stack = [i.query]
    keep = []
    while stack:
        v = stack.pop()
        for k in by_head.get(v, ()):
            keep.append(k)
            for lit in i.hard[k]:
                if lit < 0 and -lit not in marked:
                    marked.add(-lit)
                    stack.append(-lit)
    for k, cl in enumerate(i.hard):
        if (not cl or cl[-1] < 0) and all(-lit in marked for lit in cl):
            keep.append(k)
    hard = tuple(i.hard[k] for k in sorted(keep))
    soft = tuple(s for s in i.soft if s in marked)
    soft_axiom = {s: i.soft_axiom[s] for s in soft}
    return PinpointInstance(hard, soft, soft_axiom, i.query, i.var_count, i.formula)


def emit_wcnf(i: PinpointInstance) -> str:
    top = len(i.soft) + 1
    lines = []
    if i.formula is not None:
        tbox = i.formula.tbox
        for s in i.soft:
            lines.append(f"c s{s} := {render_normal(tbox.axiom(i.soft_axiom[s]), tbox.symbols)}")
    lines.append(f"p wcnf {i.var_count} {len(i.hard) + len(i.soft)} {top}")
    for cl in i.hard:
        lines.append(" ".join([str(top), *map(str, cl), "0"]))
    for s in i.soft:
        lines.append(f"1 {s} 0")
    return "\n".join(lines) + "\n"


def empty_instance() -> PinpointInstance:
    return PinpointInstance((), (), {}, 0, 0, None)
