import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elpinpoint.errors import ParseError, UnknownName
from elpinpoint.ontology import (
    Conj,
    Equiv,
    Exists,
    Gci,
    Name,
    RoleInc,
    SymbolTable,
    Top,
    parse_axiom,
    parse_ontology,
    parse_query,
    render_axiom,
    render_ontology,
    render_source_axiom,
)

from gen import random_ontology_text


def test_galen_has_seven_statements(galen):
    assert len(galen.axioms) == 7
    kinds = [type(a).__name__ for a in galen.axioms]
    assert kinds == ["Gci", "Gci", "Gci", "Gci", "Equiv", "RoleInc", "RoleInc"]
    assert [a.id for a in galen.axioms] == list(range(7))


def test_galen_symbols_in_first_occurrence_order(galen):
    assert galen.symbols.concepts == [
        "top", "Endocarditis", "Inflammation", "Endocardium", "Disease",
        "Tissue", "HeartValve", "Heart", "HeartDisease",
    ]
    assert galen.symbols.roles == ["hasLoc", "actsOn", "contIn"]


def test_empty_text():
    o = parse_ontology("")
    assert o.axioms == ()
    assert o.symbols.concepts == ["top"]
    assert o.symbols.roles == []


def test_top_on_the_right():
    (a,) = parse_ontology("A <= top").axioms
    assert isinstance(a, Gci)
    assert a.rhs == Top()


def test_conjunction_is_right_nested():
    (a,) = parse_ontology("A <= B and C and D").axioms
    assert a.rhs == Conj(Name(2), Conj(Name(3), Name(4)))


def test_existential_nesting():
    (a,) = parse_ontology("A <= (r some (s some B) and C)").axioms
    assert a.rhs == Exists(0, Conj(Exists(1, Name(2)), Name(3)))


def test_role_chain_and_plain_role_inclusion():
    o = parse_ontology("A <= (r some B)\nA <= (s some B)\nr <= s\nr o s o r <= s\n")
    assert o.axioms[2] == RoleInc((0,), 1)
    assert o.axioms[3] == RoleInc((0, 1, 0), 1)


def test_bare_names_are_a_gci_unless_both_are_roles():
    o = parse_ontology("A <= B\n")
    assert isinstance(o.axioms[0], Gci)
    # r is a role, so reading "r <= A" as a GCI makes r a concept too
    with pytest.raises(ParseError):
        parse_ontology("A <= (r some B)\nr <= A\n")
    # before any use as a role, bare names are concepts
    o = parse_ontology("r <= s\nA <= (t some B)\n")
    assert isinstance(o.axioms[0], Gci)


def test_comments_and_blank_lines():
    o = parse_ontology("# header\n\nA <= B  # trailing\n   \n")
    assert len(o.axioms) == 1
    assert o.axioms[0].span[0] == 3


def test_equivalence():
    (a,) = parse_ontology("A == B and C").axioms
    assert isinstance(a, Equiv)


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("A <=", 1, 5),
        ("A B", 1, 3),
        ("\n(r some) <= B", 2, 8),
        ("A <= (B", 1, 8),
        ("A <= B <= C", 1, 8),
    ],
)
def test_syntax_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse_ontology(text)
    assert (exc.value.line, exc.value.column) == (line, col)
    assert str(exc.value).startswith(f"{line}:{col}:")


def test_name_used_as_concept_and_role_is_an_error():
    with pytest.raises(ParseError):
        parse_ontology("A <= (r some B)\nr <= (A some B)\n")
    with pytest.raises(ParseError):
        parse_ontology("A <= (r some r)\n")


def test_parse_query(galen):
    s = galen.symbols
    assert parse_query("Endocarditis <= HeartDisease", s) == (1, 8)
    assert parse_query("Tissue <= Tissue", s) == (5, 5)


def test_parse_query_errors(galen):
    with pytest.raises(UnknownName):
        parse_query("Endocarditis <= Unknown", galen.symbols)
    with pytest.raises(ParseError):
        parse_query("Endocarditis <= Disease and Heart", galen.symbols)
    with pytest.raises(ParseError):
        parse_query("Endocarditis <= (hasLoc some Heart)", galen.symbols)


def test_render_first_galen_axiom(galen):
    assert render_axiom(galen, 0) == "Endocarditis <= Inflammation and (hasLoc some Endocardium)"
    assert render_axiom(galen, 4) == "HeartDisease == Disease and (hasLoc some Heart)"
    assert render_axiom(galen, 6) == "hasLoc o contIn <= hasLoc"
    with pytest.raises(IndexError):
        render_axiom(galen, 7)


def test_render_top_top():
    o = parse_ontology("top <= top")
    assert render_axiom(o, 0) == "top <= top"


def test_left_nested_conjunction_renders_with_parentheses():
    s = SymbolTable()
    for n in "ABC":
        s.intern_concept(n)
    a = Gci(Conj(Conj(Name(1), Name(2)), Name(3)), Name(1))
    assert render_source_axiom(a, s) == "(A and B) and C <= A"
    assert parse_axiom(render_source_axiom(a, s), s) == a


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_render_round_trip(rng):
    o = parse_ontology(random_ontology_text(rng))
    again = parse_ontology(render_ontology(o))
    assert again.symbols == o.symbols
    assert again.axioms == o.axioms
    for k, a in enumerate(o.axioms):
        assert parse_axiom(render_axiom(o, k), o.symbols.copy()) == a


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False))
def test_parsing_is_deterministic(rng):
    text = random_ontology_text(rng)
    a, b = parse_ontology(text), parse_ontology(text)
    assert a.symbols == b.symbols and a.axioms == b.axioms


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_every_id_is_interned(rng):
    o = parse_ontology(random_ontology_text(rng))
    nc, nr = len(o.symbols.concepts), len(o.symbols.roles)

    def walk(c):
        if isinstance(c, Name):
            assert 0 <= c.id < nc
        elif isinstance(c, Conj):
            walk(c.left)
            walk(c.right)
        elif isinstance(c, Exists):
            assert 0 <= c.role < nr
            walk(c.filler)

    for a in o.axioms:
        if isinstance(a, RoleInc):
            assert all(0 <= r < nr for r in (*a.chain, a.super))
        else:
            walk(a.lhs)
            walk(a.rhs)
