"""EL+ abstract syntax, symbol interning, and the line-based text format.

One statement per line, ``#`` starts a comment::

    Endocarditis <= Inflammation and (hasLoc some Endocardium)
    HeartDisease == Disease and (hasLoc some Heart)
    hasLoc o contIn <= hasLoc

Existential restrictions are always parenthesised, ``and`` is n-ary and
parsed right-nested.  ``X <= Y`` between two bare names is a role inclusion
only when both names were already used as roles.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import ParseError, UnknownName

TOP = 0
KEYWORDS = frozenset({"top", "and", "some", "o"})


class SymbolTable:
    """Interned concept and role names in first-occurrence order.

    Concept id 0 is the top concept.
    """

    def __init__(self):
        self.concepts = ["top"]
        self.roles = []
        self._concept_ids = {"top": TOP}
        self._role_ids = {}

    def copy(self) -> "SymbolTable":
        other = SymbolTable()
        other.concepts = list(self.concepts)
        other.roles = list(self.roles)
        other._concept_ids = dict(self._concept_ids)
        other._role_ids = dict(self._role_ids)
        return other

    def __eq__(self, other):
        if not isinstance(other, SymbolTable):
            return NotImplemented
        return self.concepts == other.concepts and self.roles == other.roles

    def __repr__(self):
        return f"SymbolTable(concepts={self.concepts!r}, roles={self.roles!r})"

    def has_concept(self, name: str) -> bool:
        return name in self._concept_ids

    def has_role(self, name: str) -> bool:
        return name in self._role_ids

    def concept_id(self, name: str) -> int:
        try:
            return self._concept_ids[name]
        except KeyError:
            raise UnknownName(f"unknown concept name {name!r}") from None

    def role_id(self, name: str) -> int:
        try:
            return self._role_ids[name]
        except KeyError:
            raise UnknownName(f"unknown role name {name!r}") from None

    def intern_concept(self, name: str) -> int:
        if name in self._role_ids:
            raise ValueError(f"{name!r} is already used as a role")
        cid = self._concept_ids.get(name)
        if cid is None:
            cid = len(self.concepts)
            self.concepts.append(name)
            self._concept_ids[name] = cid
        return cid

    def intern_role(self, name: str) -> int:
        if name in self._concept_ids:
            raise ValueError(f"{name!r} is already used as a concept")
        rid = self._role_ids.get(name)
        if rid is None:
            rid = len(self.roles)
            self.roles.append(name)
            self._role_ids[name] = rid
        return rid

    def fresh_concept(self, prefix: str = "_N") -> int:
        """Intern the next unused ``<prefix><k>`` concept name."""
        k = 0
        while f"{prefix}{k}" in self._concept_ids or f"{prefix}{k}" in self._role_ids:
            k += 1
        return self.intern_concept(f"{prefix}{k}")

    def fresh_role(self, prefix: str = "_r") -> int:
        k = 0
        while f"{prefix}{k}" in self._role_ids or f"{prefix}{k}" in self._concept_ids:
            k += 1
        return self.intern_role(f"{prefix}{k}")


# Concept expressions -------------------------------------------------------


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Name:
    id: int


@dataclass(frozen=True)
class Conj:
    left: "ConceptExpr"
    right: "ConceptExpr"


@dataclass(frozen=True)
class Exists:
    role: int
    filler: "ConceptExpr"


ConceptExpr = Union[Top, Name, Conj, Exists]


def conjuncts(c: ConceptExpr) -> list:
    """Flatten nested conjunctions into a list of non-Conj operands."""
    if isinstance(c, Conj):
        return conjuncts(c.left) + conjuncts(c.right)
    return [c]


def node_count(c: ConceptExpr) -> int:
    if isinstance(c, Conj):
        return 1 + node_count(c.left) + node_count(c.right)
    if isinstance(c, Exists):
        return 1 + node_count(c.filler)
    return 1


# Source axioms -------------------------------------------------------------


@dataclass(frozen=True)
class Gci:
    lhs: ConceptExpr
    rhs: ConceptExpr
    id: int = field(default=0, compare=False)
    span: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Equiv:
    lhs: ConceptExpr
    rhs: ConceptExpr
    id: int = field(default=0, compare=False)
    span: tuple = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class RoleInc:
    chain: tuple
    super: int
    id: int = field(default=0, compare=False)
    span: tuple = field(default=(0, 0), compare=False)


SourceAxiom = Union[Gci, Equiv, RoleInc]


def axiom_size(a: SourceAxiom) -> int:
    if isinstance(a, RoleInc):
        return len(a.chain) + 1
    return node_count(a.lhs) + node_count(a.rhs)


@dataclass(frozen=True)
class Ontology:
    symbols: SymbolTable
    axioms: tuple

    def __len__(self):
        return len(self.axioms)


# Lexer ---------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#.*)|(?P<op><=|==)|(?P<paren>[()])"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
)


@dataclass
class _Token:
    kind: str  # 'name', 'kw', '<=', '==', '(', ')', 'eol'
    text: str
    line: int
    col: int


def _tokenize(line_text: str, lineno: int) -> list:
    tokens = []
    pos = 0
    while pos < len(line_text):
        m = _TOKEN_RE.match(line_text, pos)
        if m is None:
            raise ParseError(f"unexpected character {line_text[pos]!r}", lineno, pos + 1)
        kind = m.lastgroup
        text = m.group()
        if kind == "name":
            tokens.append(_Token("kw" if text in KEYWORDS else "name", text, lineno, pos + 1))
        elif kind in ("op", "paren"):
            tokens.append(_Token(text, text, lineno, pos + 1))
        pos = m.end()
    tokens.append(_Token("eol", "", lineno, len(line_text) + 1))
    return tokens


# Parser --------------------------------------------------------------------


class _StatementParser:
    def __init__(self, tokens, symbols: SymbolTable):
        self.tokens = tokens
        self.pos = 0
        self.symbols = symbols

    def peek(self, offset=0) -> _Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self, expected: str, tok: _Token | None = None):
        tok = tok or self.peek()
        found = tok.text or "end of line"
        raise ParseError(f"expected {expected}, found {found!r}", tok.line, tok.col)

    def expect(self, kind: str, expected: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(expected)
        return self.next()

    def concept_name(self, tok: _Token) -> int:
        try:
            return self.symbols.intern_concept(tok.text)
        except ValueError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None

    def role_name(self, tok: _Token) -> int:
        try:
            return self.symbols.intern_role(tok.text)
        except ValueError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None

    def concept(self) -> ConceptExpr:
        terms = [self.term()]
        while self.peek().kind == "kw" and self.peek().text == "and":
            self.next()
            terms.append(self.term())
        expr = terms[-1]
        for t in reversed(terms[:-1]):
            expr = Conj(t, expr)
        return expr

    def term(self) -> ConceptExpr:
        tok = self.peek()
        if tok.kind == "kw" and tok.text == "top":
            self.next()
            return Top()
        if tok.kind == "name":
            self.next()
            return Name(self.concept_name(tok))
        if tok.kind == "(":
            self.next()
            nxt, after = self.peek(), self.peek(1)
            if nxt.kind == "name" and after.kind == "kw" and after.text == "some":
                self.next()
                self.next()
                role = self.role_name(nxt)
                filler = self.concept()
                self.expect(")", "')'")
                return Exists(role, filler)
            inner = self.concept()
            self.expect(")", "')'")
            return inner
        self.fail("a concept")

    def statement(self, axiom_id: int) -> SourceAxiom:
        first = self.peek()
        span = (first.line, first.col)
        is_chain = any(t.kind == "kw" and t.text == "o" for t in self.tokens)
        if is_chain or self._is_simple_ri():
            return self.role_inclusion(axiom_id, span)
        lhs = self.concept()
        op = self.peek()
        if op.kind not in ("<=", "=="):
            self.fail("'<=' or '=='")
        self.next()
        rhs = self.concept()
        if self.peek().kind != "eol":
            self.fail("end of statement")
        if op.kind == "==":
            return Equiv(lhs, rhs, axiom_id, span)
        return Gci(lhs, rhs, axiom_id, span)

    def _is_simple_ri(self) -> bool:
        toks = self.tokens
        return (
            len(toks) == 4
            and toks[0].kind == "name"
            and toks[1].kind == "<="
            and toks[2].kind == "name"
            and self.symbols.has_role(toks[0].text)
            and self.symbols.has_role(toks[2].text)
        )

    def role_inclusion(self, axiom_id, span) -> RoleInc:
        chain = [self.role_name(self.expect("name", "a role name"))]
        while self.peek().kind == "kw" and self.peek().text == "o":
            self.next()
            chain.append(self.role_name(self.expect("name", "a role name")))
        self.expect("<=", "'<='")
        sup = self.role_name(self.expect("name", "a role name"))
        if self.peek().kind != "eol":
            self.fail("end of statement")
        return RoleInc(tuple(chain), sup, axiom_id, span)


def _statements(text: str) -> Iterator[list]:
    for lineno, line_text in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(line_text, lineno)
        if len(tokens) > 1:
            yield tokens


def parse_ontology(text: str, symbols: SymbolTable | None = None) -> Ontology:
    """Parse ontology text; ``symbols`` (copied) pre-seeds the name tables."""
    table = symbols.copy() if symbols is not None else SymbolTable()
    axioms = []
    for tokens in _statements(text):
        axioms.append(_StatementParser(tokens, table).statement(len(axioms)))
    return Ontology(table, tuple(axioms))


def parse_axiom(text: str, symbols: SymbolTable) -> SourceAxiom:
    """Parse exactly one statement against an existing symbol table."""
    o = parse_ontology(text, symbols)
    if len(o.axioms) != 1:
        raise ParseError(f"expected exactly one statement, got {len(o.axioms)}", 1, 1)
    return o.axioms[0]


def parse_query(text: str, symbols: SymbolTable) -> tuple:
    """Parse ``Sub <= Super`` over known concept names."""
    tokens = _tokenize(text.strip(), 1)
    shape = [t.kind for t in tokens]
    if shape != ["name", "<=", "name", "eol"]:
        bad = next(
            (t for t, want in zip(tokens, ["name", "<=", "name", "eol"]) if t.kind != want),
            tokens[-1],
        )
        raise ParseError(
            "query must have the form 'Name <= Name' (complex concepts are not supported)",
            bad.line,
            bad.col,
        )
    sub, sup = tokens[0], tokens[2]
    for tok in (sub, sup):
        if not symbols.has_concept(tok.text):
            raise UnknownName(f"unknown concept name {tok.text!r}", tok.line, tok.col)
    return symbols.concept_id(sub.text), symbols.concept_id(sup.text)


# Rendering -----------------------------------------------------------------


def render_concept(c: ConceptExpr, symbols: SymbolTable) -> str:
    if isinstance(c, Top):
        return "top"
    if isinstance(c, Name):
        return symbols.concepts[c.id]
    if isinstance(c, Exists):
        return f"({symbols.roles[c.role]} some {render_concept(c.filler, symbols)})"
    left = render_concept(c.left, symbols)
    if isinstance(c.left, Conj):
        left = f"({left})"
    return f"{left} and {render_concept(c.right, symbols)}"


def render_source_axiom(a: SourceAxiom, symbols: SymbolTable) -> str:
    if isinstance(a, RoleInc):
        chain = " o ".join(symbols.roles[r] for r in a.chain)
        return f"{chain} <= {symbols.roles[a.super]}"
    op = "==" if isinstance(a, Equiv) else "<="
    return f"{render_concept(a.lhs, symbols)} {op} {render_concept(a.rhs, symbols)}"


def render_axiom(o: Ontology, axiom_id: int) -> str:
    if not 0 <= axiom_id < len(o.axioms):
        raise IndexError(f"axiom id {axiom_id} out of range (0..{len(o.axioms) - 1})")
    return render_source_axiom(o.axioms[axiom_id], o.symbols)


def render_ontology(o: Ontology) -> str:
    return "".join(render_axiom(o, i) + "\n" for i in range(len(o.axioms)))
