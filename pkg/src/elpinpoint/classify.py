"""Completion-rule classification with a full record of rule applications.

Rules over a normalized TBox, with ``X ⊑ A`` written Subs(X, A) and
``X ⊑ ∃r.Y`` written ExSubs(X, r, Y)::

    R0  for each concept name A:  Subs(A, A), Subs(A, ⊤)
    R1  Subs(X, A), A ⊑ B                          -> Subs(X, B)
    R2  Subs(X, A1), Subs(X, A2), A1 ⊓ A2 ⊑ B      -> Subs(X, B)
    R3  Subs(X, A), A ⊑ ∃r.B                       -> ExSubs(X, r, B)
    R4  ExSubs(X, r, Y), Subs(Y, A), ∃r.A ⊑ B      -> Subs(X, B)
    R5  ExSubs(X, r, Y), r ⊑ s                     -> ExSubs(X, s, Y)
    R6  ExSubs(X, r1, Y), ExSubs(Y, r2, Z), r1 ∘ r2 ⊑ s -> ExSubs(X, s, Z)

The worklist is semi-naive: a rule instance fires when the last of its
premises is taken off the FIFO queue, so every instance over the final
closure is seen exactly once, including those whose conclusion was already
known.  Those duplicate derivations matter for enumerating all MinAs.
"""

from __future__ import annotations

from collections import defaultdict, deque
from typing import NamedTuple

from ._gcpause import without_gc
from .normalize import NF1, NF2, NF3, NF4, NF5, NF6, NormalizedTBox
from .ontology import TOP, SymbolTable

SUBS = -1  # role slot of a Subs assertion key


class Assertion(NamedTuple):
    id: int
    sub: int
    role: int  # SUBS for plain subsumption
    sup: int

    @property
    def is_subs(self) -> bool:
        return self.role == SUBS

    @property
    def is_trivial(self) -> bool:
        return self.role == SUBS and (self.sub == self.sup or self.sup == TOP)


class RuleApplication(NamedTuple):
    rule: str
    antecedent_assertions: tuple
    antecedent_axioms: tuple
    consequent: int


class ClosureTrace:
    """Classification closure plus every recorded rule firing."""

    def __init__(self, tbox, keys, index, applications, stats):
        self.tbox = tbox
        self._keys = keys
        self._index = index
        self.applications = applications
        self.stats = stats
        self.axiom_assertions = {}
        for ax in tbox.axioms:
            f = ax.form
            if isinstance(f, NF1):
                key = (f.sub, SUBS, f.sup)
            elif isinstance(f, NF3):
                key = (f.sub, f.role, f.filler)
            else:
                continue
            self.axiom_assertions[ax.id] = index[key]

    def __len__(self):
        return len(self._keys)

    @property
    def keys(self) -> list:
        """``(sub, role, sup)`` per assertion id; role is SUBS for Subs."""
        return self._keys

    @property
    def assertions(self) -> list:
        return [Assertion(i, *k) for i, k in enumerate(self._keys)]

    def assertion(self, aid: int) -> Assertion:
        return Assertion(aid, *self._keys[aid])

    def lookup(self, sub: int, sup: int, role: int = SUBS):
        """Assertion id of Subs(sub, sup) / ExSubs(sub, role, sup), or None."""
        return self._index.get((sub, role, sup))

    def subsumptions(self) -> set:
        return {(k[0], k[2]) for k in self._keys if k[1] == SUBS}


@without_gc
def classify(t: NormalizedTBox) -> ClosureTrace:
    nf1 = defaultdict(list)
    nf2 = defaultdict(list)
    nf3 = defaultdict(list)
    nf4_by_filler = defaultdict(list)
    nf4_by_role_filler = defaultdict(list)
    nf5 = defaultdict(list)
    nf6_first = defaultdict(list)
    nf6_second = defaultdict(list)
    names = set()
    for ax in t.axioms:
        f = ax.form
        if isinstance(f, NF1):
            nf1[f.sub].append((ax.id, f.sup))
            names.update((f.sub, f.sup))
        elif isinstance(f, NF2):
            nf2[f.left].append((ax.id, f.right, f.sup))
            if f.right != f.left:
                nf2[f.right].append((ax.id, f.left, f.sup))
            names.update((f.left, f.right, f.sup))
        elif isinstance(f, NF3):
            nf3[f.sub].append((ax.id, f.role, f.filler))
            names.update((f.sub, f.filler))
        elif isinstance(f, NF4):
            nf4_by_filler[f.filler].append((ax.id, f.role, f.sup))
            nf4_by_role_filler[(f.role, f.filler)].append((ax.id, f.sup))
            names.update((f.filler, f.sup))
        elif isinstance(f, NF5):
            nf5[f.sub].append((ax.id, f.sup))
        elif isinstance(f, NF6):
            nf6_first[f.first].append((ax.id, f.second, f.sup))
            nf6_second[f.second].append((ax.id, f.first, f.sup))
    if t.axioms:
        names.add(TOP)

    keys = []
    index = {}
    queue = deque()
    applications = []
    seen = set()

    def add(key):
        aid = index.get(key)
        if aid is None:
            aid = len(keys)
            keys.append(key)
            index[key] = aid
            queue.append(aid)
        return aid

    def fire(rule, ants, ax_id, key):
        cid = index.get(key)
        if cid is None:
            cid = len(keys)
            keys.append(key)
            index[key] = cid
            queue.append(cid)
        rec = RuleApplication(rule, ants, (ax_id,), cid)
        if rec not in seen:
            seen.add(rec)
            applications.append(rec)

    for a in sorted(names):
        for key in ((a, SUBS, a), (a, SUBS, TOP)):
            cid = add(key)
            rec = RuleApplication("R0", (), (), cid)
            if rec not in seen:
                seen.add(rec)
                applications.append(rec)

    # processed premises, as insertion-ordered dicts
    proc_subs = defaultdict(dict)  # X -> {A}
    proc_ex_out = defaultdict(lambda: defaultdict(dict))  # X -> r -> {Y}
    proc_ex_in = defaultdict(lambda: defaultdict(dict))  # Y -> r -> {X}

    def pair(a, b):
        return (a,) if a == b else ((a, b) if a < b else (b, a))

    while queue:
        aid = queue.popleft()
        x, r, y = keys[aid]
        if r == SUBS:
            proc_subs[x][y] = None
            for ax_id, sup in nf1.get(y, ()):
                fire("R1", (aid,), ax_id, (x, SUBS, sup))
            for ax_id, other, sup in nf2.get(y, ()):
                if other in proc_subs[x]:
                    fire("R2", pair(aid, index[(x, SUBS, other)]), ax_id, (x, SUBS, sup))
            for ax_id, role, filler in nf3.get(y, ()):
                fire("R3", (aid,), ax_id, (x, role, filler))
            if y in nf4_by_filler and x in proc_ex_in:
                incoming = proc_ex_in[x]
                for ax_id, role, sup in nf4_by_filler[y]:
                    for w in incoming.get(role, ()):
                        fire("R4", pair(index[(w, role, x)], aid), ax_id, (w, SUBS, sup))
        else:
            proc_ex_out[x][r][y] = None
            proc_ex_in[y][r][x] = None
            for a in proc_subs.get(y, ()):
                for ax_id, sup in nf4_by_role_filler.get((r, a), ()):
                    fire("R4", pair(aid, index[(y, SUBS, a)]), ax_id, (x, SUBS, sup))
            for ax_id, sup in nf5.get(r, ()):
                fire("R5", (aid,), ax_id, (x, sup, y))
            for ax_id, second, sup in nf6_first.get(r, ()):
                if y in proc_ex_out:
                    for z in proc_ex_out[y].get(second, ()):
                        fire("R6", pair(aid, index[(y, second, z)]), ax_id, (x, sup, z))
            for ax_id, first, sup in nf6_second.get(r, ()):
                if x in proc_ex_in:
                    for w in proc_ex_in[x].get(first, ()):
                        fire("R6", pair(index[(w, first, x)], aid), ax_id, (w, sup, y))

    stats = {"assertions": len(keys), "applications": len(applications)}
    return ClosureTrace(t, keys, index, applications, stats)


def holds(c: ClosureTrace, sub: int, sup: int) -> bool:
    return sub == sup or sup == TOP or c.lookup(sub, sup) is not None


def render_assertion(a: Assertion, symbols: SymbolTable) -> str:
    c = symbols.concepts
    if a.is_subs:
        return f"{c[a.sub]} <= {c[a.sup]}"
    return f"{c[a.sub]} <= ({symbols.roles[a.role]} some {c[a.sup]})"
