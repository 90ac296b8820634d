import pytest
from hypothesis import given, settings

from morphic_ap.automatic import (
    DeciderConfig,
    EquivalenceRelation,
    bell_number,
    decide_automatic,
    double_pair_graph,
    initial_pair_graph,
    occurrence_sets_at,
    pair_graph_at,
    pair_graph_relation,
    relation_at_level,
    relation_sequence_profile,
    relation_step,
    stable_class_of_start,
    start_class_by_recurrence,
)
from morphic_ap.errors import ConsistencyError, PreconditionError, ResourceLimitError, UnsupportedInputError
from morphic_ap.pure import Verdict
from morphic_ap.words import Coding, Morphism, power_apply, trim_reachable

from conftest import uniform_morphisms

AB_BB = Morphism.from_rules({"a": "ab", "b": "bb"})


def constant(m):
    return Coding(m.alphabet, tuple("x" for _ in m.letters))


def classes(rel):
    return sorted(sorted(c) for c in rel.classes())


def test_bell_numbers():
    assert [bell_number(n) for n in range(7)] == [1, 1, 2, 5, 15, 52, 203]


def test_equivalence_relation_canonical_form():
    rel = EquivalenceRelation.from_keys("abcd", ["x", "y", "x", "z"])
    assert rel.labels == (0, 1, 0, 3)
    assert rel.equivalent("a", "c") and not rel.equivalent("a", "b")
    assert rel.class_of("c") == {"a", "c"}
    with pytest.raises(ConsistencyError):
        EquivalenceRelation.from_related("abc", lambda i, j: (i, j) in {(0, 1), (1, 2)})


def test_relation_at_level(thue_morse):
    h = Coding.from_dict({"0": "a", "1": "b"}, "01")
    assert classes(relation_at_level(thue_morse, h, 0)) == [["0"], ["1"]]
    assert classes(relation_at_level(thue_morse, None, 1)) == [["0"], ["1"]]
    for l in range(4):
        assert classes(relation_at_level(thue_morse, constant(thue_morse), l)) == [["0", "1"]]


def test_relation_at_level_errors(phi1, thue_morse):
    with pytest.raises(PreconditionError):
        relation_at_level(phi1, None, 1)
    with pytest.raises(ResourceLimitError):
        relation_at_level(thue_morse, None, 30)


def test_initial_pair_graph(thue_morse):
    t = initial_pair_graph(thue_morse)
    assert t.size == 1
    assert t.neighbors("0", "1") == {("0", "1")}
    same = Morphism.from_rules({"0": "01", "1": "01"})
    assert initial_pair_graph(same).neighbors("0", "1") == frozenset()
    assert initial_pair_graph(AB_BB).neighbors("a", "b") == {("a", "b")}


def test_initial_pair_graph_needs_uniform(phi1):
    with pytest.raises(PreconditionError):
        initial_pair_graph(phi1)


def test_double_pair_graph(thue_morse):
    edgeless = initial_pair_graph(Morphism.from_rules({"0": "01", "1": "01"}))
    assert not double_pair_graph(edgeless).adjacency.any()
    t1 = double_pair_graph(initial_pair_graph(thue_morse))
    assert t1.level == 1 and t1.neighbors("0", "1") == {("0", "1")}
    t0 = initial_pair_graph(AB_BB)
    assert (double_pair_graph(t0).adjacency == t0.adjacency).all()


def test_stable_class_of_start(thue_morse):
    assert stable_class_of_start(thue_morse, constant(thue_morse), "0") == {"0", "1"}
    assert stable_class_of_start(thue_morse, None, "0") == {"0"}
    assert stable_class_of_start(AB_BB, None, "a") == {"a"}


def test_occurrence_sets(thue_morse):
    for e in range(4):
        assert occurrence_sets_at(thue_morse, e).sets == {"0": {"0", "1"}, "1": {"0", "1"}}
    ident = Morphism.identity("abc")
    assert occurrence_sets_at(ident, 3).sets == {"a": {"a"}, "b": {"b"}, "c": {"c"}}
    occ = occurrence_sets_at(AB_BB, 2)
    assert occ.exponent == 4
    assert occ.sets == {"a": {"a", "b"}, "b": {"b"}}


def test_decide_automatic_examples(thue_morse):
    assert decide_automatic(thue_morse, None, "0").verdict is Verdict.AP
    d = decide_automatic(AB_BB, None, "a")
    assert d.verdict is Verdict.NOT_AP
    assert d.witness["start_class"] == ["a"]
    assert d.witness["uncovered"] == ["b"]
    assert decide_automatic(AB_BB, constant(AB_BB), "a").is_ap


def test_decide_automatic_coded():
    rs = Morphism.from_rules({"a": "ab", "b": "ac", "c": "db", "d": "dc"})
    h = Coding.from_dict({"a": "0", "b": "0", "c": "1", "d": "1"}, rs.alphabet)
    assert decide_automatic(rs, h, "a").is_ap
    m = Morphism.from_rules({"a": "ab", "b": "bc", "c": "cc"})
    h = Coding.from_dict({"a": "0", "b": "1", "c": "1"}, m.alphabet)
    d = decide_automatic(m, h, "a")
    assert not d.is_ap and d.witness["uncovered"] == ["b", "c"]


def test_decide_automatic_errors(phi1, thue_morse):
    with pytest.raises(UnsupportedInputError):
        decide_automatic(phi1, None, "0")
    with pytest.raises(PreconditionError):
        decide_automatic(thue_morse, None, "0", DeciderConfig(0, 5))
    with pytest.raises(ValueError):
        decide_automatic(thue_morse, None, "0", method="magic")


def test_profile_examples(thue_morse):
    p = relation_sequence_profile(thue_morse, None, 10)
    assert (p.preperiod, p.period) == (0, 1)
    assert all(classes(r) == [["0"], ["1"]] for r in p.relations)
    p = relation_sequence_profile(thue_morse, constant(thue_morse), 10)
    assert (p.preperiod, p.period) == (0, 1)
    assert p.at(1000) == p.relations[0]


def test_decider_config_bounds():
    for n in range(1, 9):
        cfg = DeciderConfig.for_size(n)
        cfg.validate(n)
        assert 2**cfg.r_iterations >= bell_number(n)
        assert cfg.coverage_squarings == n * n + 1


@given(uniform_morphisms(max_letters=4, max_k=3, prolongable=False))
@settings(max_examples=120, deadline=None)
def test_pair_graph_semantics_against_expansion(m):
    h = Coding(m.alphabet, tuple(str(i % 2) for i in range(m.n)))
    for i in range(3):
        expected = relation_at_level(m, h, 2**i)
        if m.n == 1:
            continue
        assert pair_graph_relation(pair_graph_at(m, i), h) == expected


@given(uniform_morphisms(max_letters=4, max_k=3, prolongable=False))
@settings(max_examples=120, deadline=None)
def test_recurrence_step_against_expansion(m):
    for l in range(4):
        assert relation_step(m, relation_at_level(m, None, l)) == relation_at_level(m, None, l + 1)


@given(uniform_morphisms(max_letters=4, max_k=3, prolongable=False))
@settings(max_examples=120, deadline=None)
def test_profile_repeat_within_bell_bound(m):
    p = relation_sequence_profile(m, Coding(m.alphabet, tuple(str(i % 2) for i in range(m.n))), bell_number(m.n) + 1)
    assert p.period is not None
    assert p.preperiod + p.period <= bell_number(m.n)


@given(uniform_morphisms(max_letters=4, max_k=3))
@settings(max_examples=120, deadline=None)
def test_recurrence_and_pair_graph_agree(m):
    m = trim_reachable(m, "0")
    h = Coding(m.alphabet, tuple(str(i % 2) for i in range(m.n)))
    cfg = DeciderConfig.for_size(m.n)
    by_rec = start_class_by_recurrence(m, h, "0", 2**cfg.r_iterations, cfg.recurrence_budget)
    assert by_rec == stable_class_of_start(m, h, "0", cfg)
    a = decide_automatic(m, h, "0")
    b = decide_automatic(m, h, "0", method="pairgraph")
    assert a.verdict == b.verdict
    assert a.details["start_class"] == b.details["start_class"]


@given(uniform_morphisms(max_letters=3, max_k=2))
@settings(max_examples=60, deadline=None)
def test_coverage_is_monotone(m):
    m = trim_reachable(m, "0")
    start_class = stable_class_of_start(m, None, "0")
    covered = []
    for e in range(1, 7):
        covered.append(all(set(power_apply(m, (b,), e)) & start_class for b in m.letters))
    for now, later in zip(covered, covered[1:]):
        assert later or not now
