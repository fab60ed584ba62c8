"""Linear-time normalization of EL+ ontologies.

Every source axiom is rewritten into the six normal forms::

    NF1  A ⊑ B          NF4  ∃r.A ⊑ B
    NF2  A1 ⊓ A2 ⊑ B    NF5  r ⊑ s
    NF3  A ⊑ ∃r.B       NF6  r1 ∘ r2 ⊑ s

Fresh concepts are named ``_N0, _N1, ...`` and fresh roles ``_r0, _r1, ...``
in one left-to-right pass.  The result is ordered by form (NF1, NF3, NF2,
NF4, NF5, NF6) and, within a form, by emission order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .ontology import (
    TOP,
    Conj,
    Equiv,
    Exists,
    Gci,
    Name,
    Ontology,
    RoleInc,
    SymbolTable,
    Top,
    axiom_size,
    conjuncts,
)


@dataclass(frozen=True)
class NF1:
    sub: int
    sup: int


@dataclass(frozen=True)
class NF2:
    left: int
    right: int
    sup: int


@dataclass(frozen=True)
class NF3:
    sub: int
    role: int
    filler: int


@dataclass(frozen=True)
class NF4:
    role: int
    filler: int
    sup: int


@dataclass(frozen=True)
class NF5:
    sub: int
    sup: int


@dataclass(frozen=True)
class NF6:
    first: int
    second: int
    sup: int


NormalForm = Union[NF1, NF2, NF3, NF4, NF5, NF6]

_FORM_RANK = {NF1: 0, NF3: 1, NF2: 2, NF4: 3, NF5: 4, NF6: 5}


@dataclass(frozen=True)
class NormalAxiom:
    id: int
    form: NormalForm

    @property
    def is_role_inclusion(self) -> bool:
        return isinstance(self.form, (NF5, NF6))

    @property
    def is_trivial(self) -> bool:
        """``C ⊑ C`` and ``C ⊑ ⊤`` carry no information."""
        f = self.form
        return isinstance(f, NF1) and (f.sub == f.sup or f.sup == TOP)


@dataclass(frozen=True)
class NormalizedTBox:
    symbols: SymbolTable
    axioms: tuple
    origin: dict
    fresh_concepts: frozenset
    fresh_roles: frozenset

    def __len__(self):
        return len(self.axioms)

    def axiom(self, axiom_id: int) -> NormalAxiom:
        return self._by_id[axiom_id]

    @property
    def _by_id(self):
        # axioms may be a restricted subset, so ids are not positions
        cache = self.__dict__.get("_id_cache")
        if cache is None:
            cache = {a.id: a for a in self.axioms}
            object.__setattr__(self, "_id_cache", cache)
        return cache

    def restrict(self, keep) -> "NormalizedTBox":
        """Sub-TBox with only the axioms whose ids are in ``keep``."""
        keep = set(keep)
        axioms = tuple(a for a in self.axioms if a.id in keep)
        origin = {a.id: self.origin[a.id] for a in axioms}
        return NormalizedTBox(self.symbols, axioms, origin, self.fresh_concepts, self.fresh_roles)

    def nontrivial_ids(self) -> list:
        return [a.id for a in self.axioms if not a.is_trivial]


class _Normalizer:
    def __init__(self, symbols: SymbolTable):
        self.symbols = symbols
        self.out = []  # (form, source id)
        self.fresh_concepts = set()
        self.fresh_roles = set()
        self.source = -1

    def emit(self, form):
        self.out.append((form, self.source))

    def fresh(self) -> int:
        cid = self.symbols.fresh_concept("_N")
        self.fresh_concepts.add(cid)
        return cid

    @staticmethod
    def atom(c):
        """Concept id if ``c`` is a name or top, else None."""
        if isinstance(c, Top):
            return TOP
        if isinstance(c, Name):
            return c.id
        return None

    def gci(self, lhs, rhs):
        a, b = self.atom(lhs), self.atom(rhs)
        if a is not None:
            self._atom_lhs(a, rhs)
        elif b is not None:
            self._atom_rhs(lhs, b)
        else:
            x = self.fresh()
            self.gci(lhs, Name(x))
            self.gci(Name(x), rhs)

    def _atom_lhs(self, a, rhs):
        if isinstance(rhs, Conj):
            for c in conjuncts(rhs):
                self._atom_lhs(a, c)
        elif isinstance(rhs, Exists):
            filler = self.atom(rhs.filler)
            if filler is None:
                filler = self.fresh()
                self.emit(NF3(a, rhs.role, filler))
                self._atom_lhs(filler, rhs.filler)
            else:
                self.emit(NF3(a, rhs.role, filler))
        else:
            self.emit(NF1(a, self.atom(rhs)))

    def _atom_rhs(self, lhs, b):
        if isinstance(lhs, Exists):
            filler = self.atom(lhs.filler)
            if filler is None:
                filler = self.fresh()
                self._atom_rhs(lhs.filler, filler)
            self.emit(NF4(lhs.role, filler, b))
            return
        # conjunction: name complex conjuncts, then fold pairwise
        names = []
        for c in conjuncts(lhs):
            n = self.atom(c)
            if n is None:
                n = self.fresh()
                self._atom_rhs(c, n)
            names.append(n)
        acc = names[0]
        for n in names[1:-1]:
            x = self.fresh()
            self.emit(NF2(acc, n, x))
            acc = x
        self.emit(NF2(acc, names[-1], b))

    def role_inclusion(self, chain, sup):
        if len(chain) == 1:
            self.emit(NF5(chain[0], sup))
            return
        acc = chain[0]
        for r in chain[1:-1]:
            u = self.symbols.fresh_role("_r")
            self.fresh_roles.add(u)
            self.emit(NF6(acc, r, u))
            acc = u
        self.emit(NF6(acc, chain[-1], sup))

    def run(self, o: Ontology):
        for ax in o.axioms:
            self.source = ax.id
            if isinstance(ax, RoleInc):
                self.role_inclusion(ax.chain, ax.super)
            elif isinstance(ax, Equiv):
                self.gci(ax.lhs, ax.rhs)
                self.gci(ax.rhs, ax.lhs)
            else:
                assert isinstance(ax, Gci)
                self.gci(ax.lhs, ax.rhs)


def normalize(o: Ontology) -> NormalizedTBox:
    """Rewrite ``o`` into normal form, tracking the source axiom of each result."""
    symbols = o.symbols.copy()
    n = _Normalizer(symbols)
    n.run(o)
    ordered = sorted(range(len(n.out)), key=lambda i: (_FORM_RANK[type(n.out[i][0])], i))
    axioms = []
    origin = {}
    for new_id, i in enumerate(ordered):
        form, src = n.out[i]
        axioms.append(NormalAxiom(new_id, form))
        origin[new_id] = frozenset({src})
    return NormalizedTBox(
        symbols,
        tuple(axioms),
        origin,
        frozenset(n.fresh_concepts),
        frozenset(n.fresh_roles),
    )


def explain_origin(t: NormalizedTBox, ids) -> frozenset:
    """Source axiom ids that the given normalized axioms were produced from."""
    out = set()
    for i in ids:
        if i not in t.origin:
            raise KeyError(f"invalid normalized axiom id {i}")
        out |= t.origin[i]
    return frozenset(out)


def source_size(o: Ontology) -> int:
    return sum(axiom_size(a) for a in o.axioms)


def render_normal(a: NormalAxiom, symbols: SymbolTable) -> str:
    """Render in the ontology text format (fresh names included)."""
    c, r = symbols.concepts, symbols.roles
    f = a.form
    if isinstance(f, NF1):
        return f"{c[f.sub]} <= {c[f.sup]}"
    if isinstance(f, NF2):
        return f"{c[f.left]} and {c[f.right]} <= {c[f.sup]}"
    if isinstance(f, NF3):
        return f"{c[f.sub]} <= ({r[f.role]} some {c[f.filler]})"
    if isinstance(f, NF4):
        return f"({r[f.role]} some {c[f.filler]}) <= {c[f.sup]}"
    if isinstance(f, NF5):
        return f"{r[f.sub]} <= {r[f.sup]}"
    return f"{r[f.first]} o {r[f.second]} <= {r[f.sup]}"


def render_tbox(t: NormalizedTBox) -> str:
    return "".join(render_normal(a, t.symbols) + "\n" for a in t.axioms)
