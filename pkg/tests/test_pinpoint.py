import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elpinpoint import (
    Budget,
    brute_force_minas,
    build_instance,
    build_pinpoint_formula,
    classify,
    enumerate_mcses,
    enumerate_minas,
    explain,
    extract_one_mina,
    minimal_hitting_sets,
    normalize,
    parse_ontology,
    parse_query,
    verify_mina,
)
from elpinpoint.encode import PinpointFormula, PinpointInstance, coi_reduce
from elpinpoint.errors import GuardError, InstanceSatisfiable
from elpinpoint.satcore import new_solver

from conftest import GALEN_MINA
from gen import chain_text, random_tbox, source_concepts
from oracles import hitting_sets_by_powerset, mcses_by_powerset, naive_entails


@pytest.fixture(scope="module")
def galen_instance(galen_formula, galen_query):
    return build_instance(galen_formula, galen_query)


def test_brute_force_on_galen(galen_tbox, galen_query):
    assert brute_force_minas(galen_tbox, galen_query) == [GALEN_MINA]


def test_printed_mina_is_not_a_mina(galen_instance):
    # the printed {s1, s5, s8, s10, s11, s13}, 0-based
    printed = frozenset({0, 4, 7, 9, 10, 12})
    assert not verify_mina(galen_instance, printed)
    assert printed < GALEN_MINA


def test_extract_one_on_galen(galen_instance):
    assert extract_one_mina(galen_instance) == GALEN_MINA


def test_enumerate_on_galen(galen_instance):
    report = enumerate_minas(galen_instance)
    assert report.complete
    assert report.minas == [GALEN_MINA]
    assert sorted(map(sorted, report.mcses)) == sorted([a] for a in GALEN_MINA)
    assert report.stats["wall_time"] < 1.0


def test_mcses_on_galen_match_powerset(galen_tbox, galen_instance, galen_query):
    ids = galen_tbox.nontrivial_ids()
    expected = mcses_by_powerset(ids, lambda s: naive_entails(galen_tbox.restrict(s).axioms, *galen_query))
    got, complete = enumerate_mcses(galen_instance)
    assert complete and set(got) == expected


def test_verify_mina_examples(galen_instance):
    assert verify_mina(galen_instance, GALEN_MINA)
    assert not verify_mina(galen_instance, GALEN_MINA | {2})
    assert not verify_mina(galen_instance, frozenset())


def _toy_instance():
    # s1 -> q, s2 -> q, hard not q
    hard = ((-1, 3), (-2, 3), (-3,))
    return PinpointInstance(hard, (1, 2), {1: 0, 2: 1}, 3, 3, _toy_formula())


def _toy_formula():
    return PinpointFormula((), (None, None, None, None), {0: 1, 1: 2}, [], None)


def test_two_independent_derivations():
    inst = _toy_instance()
    mcses, complete = enumerate_mcses(inst)
    assert complete and mcses == [frozenset({0, 1})]
    report = enumerate_minas(inst)
    assert report.minas == [frozenset({0}), frozenset({1})]


def test_single_support_singleton():
    inst = PinpointInstance(((-1, 2), (-2,)), (1,), {1: 0}, 2, 2, _toy_formula())
    assert extract_one_mina(inst) == frozenset({0})


def test_satisfiable_instance():
    inst = PinpointInstance(((-1, -2),), (1,), {1: 0}, 2, 2, _toy_formula())
    assert enumerate_mcses(inst) == ([], True)
    with pytest.raises(InstanceSatisfiable):
        extract_one_mina(inst)


def test_chain_mina():
    t = normalize(parse_ontology(chain_text(5)))
    q = (t.symbols.concept_id("A0"), t.symbols.concept_id("A5"))
    assert brute_force_minas(t, q) == [frozenset(range(5))]
    inst = build_instance(build_pinpoint_formula(classify(t)), q)
    assert extract_one_mina(inst) == frozenset(range(5))


def test_single_axiom_brute_force():
    t = normalize(parse_ontology("A <= B"))
    assert brute_force_minas(t, (1, 2)) == [frozenset({0})]


def test_brute_force_guard():
    t = normalize(parse_ontology(chain_text(21)))
    with pytest.raises(GuardError):
        brute_force_minas(t, (1, 2))


@pytest.mark.parametrize(
    "family, expected",
    [
        ([{1, 2}, {2, 3}], [{1, 3}, {2}]),
        ([], [set()]),
        ([{1}, set()], []),
        ([{1, 2, 3}], [{1}, {2}, {3}]),
    ],
)
def test_minimal_hitting_sets_examples(family, expected):
    assert minimal_hitting_sets(family) == [frozenset(e) for e in expected]


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sets(st.integers(0, 6), min_size=1, max_size=4), max_size=6))
def test_minimal_hitting_sets_vs_powerset(family):
    got = minimal_hitting_sets(family)
    assert set(got) == hitting_sets_by_powerset(family)
    assert got == sorted(got, key=sorted)


def test_explain_trivial_and_unentailed(galen, galen_tbox):
    s = galen.symbols
    r = explain(galen_tbox, parse_query("Tissue <= Tissue", s))
    assert r.entailed and r.minas == [frozenset()] and r.complete
    r = explain(galen_tbox, parse_query("Tissue <= Endocarditis", s))
    assert not r.entailed and r.minas == [] and r.complete


def test_explain_one_mode(galen_tbox, galen_query):
    r = explain(galen_tbox, galen_query, mode="one")
    assert r.minas == [GALEN_MINA]
    assert not r.complete


def test_budget_exhaustion_returns_partial():
    text = "".join(f"A <= B{i}\nB{i} <= C\n" for i in range(6))
    t = normalize(parse_ontology(text))
    q = (t.symbols.concept_id("A"), t.symbols.concept_id("C"))
    full = explain(t, q)
    assert full.complete and len(full.minas) == 6
    part = explain(t, q, budget=Budget(max_solver_calls=5))
    assert not part.complete
    assert set(part.minas) <= set(full.minas)
    few = explain(t, q, budget=Budget(max_mcses=2))
    assert not few.complete and len(few.mcses) == 2


def _check_duality(report):
    minas, mcses = report.minas, report.mcses
    assert set(minimal_hitting_sets(mcses)) == set(minas)
    assert set(minimal_hitting_sets(minas)) == set(mcses)


def _check_blocking(inst, mcses):
    blocks = [sorted(inst.selectors_of(m)) for m in mcses]
    s = new_solver(inst.var_count, list(inst.hard) + blocks)
    assert not s.solve_under(inst.soft).sat
    for k, m in enumerate(mcses):
        others = blocks[:k] + blocks[k + 1:]
        sel = inst.selectors_of(m)
        rest = [x for x in inst.soft if x not in sel]
        res = new_solver(inst.var_count, list(inst.hard) + others).solve_under(rest)
        assert res.sat
        assert {x for x in inst.soft if not res.model[x]} == sel


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_pipeline_matches_oracle(rng):
    o, t = random_tbox(rng, max_axioms=12)
    c = classify(t)
    f = build_pinpoint_formula(c)
    names = source_concepts(o)
    queries = [(a, b) for a in names for b in names if a != b and (a, b) in c.subsumptions()]
    for q in queries[:3]:
        inst = build_instance(f, q)
        report = enumerate_minas(inst)
        assert report.complete
        assert report.minas == brute_force_minas(t, q)
        for m in report.minas:
            assert verify_mina(inst, m)
        _check_duality(report)
        _check_blocking(inst, report.mcses)
        reduced = enumerate_minas(coi_reduce(inst))
        assert reduced.minas == report.minas
        assert set(reduced.mcses) == set(report.mcses)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_minas_of_a_sub_tbox_are_minas_of_the_whole(rng):
    o, t = random_tbox(rng, max_axioms=12)
    c = classify(t)
    names = source_concepts(o)
    queries = [(a, b) for a in names for b in names if a != b and (a, b) in c.subsumptions()]
    if not queries:
        return
    q = queries[0]
    whole = set(explain(t, q).minas)
    keep = [a.id for a in t.axioms if rng.random() < 0.7]
    part = explain(t.restrict(keep), q)
    assert set(part.minas) <= whole
    assert set(part.minas) == {m for m in whole if m <= set(keep)}
