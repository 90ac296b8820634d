import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from morphic_ap.graphs import (
    bool_square,
    cycle_gcd,
    is_primitive,
    is_strongly_connected,
    occurrence_graph,
    occurrence_graph_power,
    repeated_square,
    scc_decomposition,
    square_graph,
)
from morphic_ap.words import Morphism, matrix_of

from conftest import morphisms


def succ(g):
    return {b: set(g.successors(b)) for b in g.letters}


def test_occurrence_graph_examples(phi1, thue_morse):
    assert succ(occurrence_graph(phi1)) == {"0": {"0", "1"}, "1": {"0", "1", "2"}, "2": {"2"}}
    assert succ(occurrence_graph(thue_morse)) == {"0": {"0", "1"}, "1": {"0", "1"}}
    empty = occurrence_graph(Morphism.from_rules({"a": "", "b": ""}))
    assert empty.edges() == []


def test_strong_connectivity(phi1):
    g = occurrence_graph(phi1)
    assert is_strongly_connected(g, ["0", "1"])
    assert not is_strongly_connected(g)
    assert is_strongly_connected(g, ["2"])
    assert is_strongly_connected(g, [])


def test_primitivity(phi1, thue_morse):
    assert is_primitive(thue_morse)
    assert not is_primitive(phi1)
    assert not is_primitive(Morphism.from_rules({"0": "1", "1": "0"}))


def test_square_graph(phi1, thue_morse):
    g = square_graph(occurrence_graph(phi1))
    assert succ(g) == {"0": {"0", "1", "2"}, "1": {"0", "1", "2"}, "2": {"2"}}
    tm = occurrence_graph(thue_morse)
    assert square_graph(tm) == tm
    empty = occurrence_graph(Morphism.from_rules({"a": "", "b": ""}))
    assert square_graph(empty) == empty


def test_scc_decomposition(phi1):
    d = scc_decomposition(occurrence_graph(phi1))
    assert sorted(map(sorted, d.components())) == [["0", "1"], ["2"]]
    assert len(d.condensation_edges) == 1


def test_to_dot(phi1):
    dot = occurrence_graph(phi1).to_dot()
    assert dot.startswith("digraph G {")
    assert '"1" -> "2";' in dot


def _closure(adj):
    n = len(adj)
    reach = adj | np.eye(n, dtype=bool)
    for _ in range(n):
        reach = reach | (reach.astype(int) @ reach.astype(int) > 0)
    return reach


@given(morphisms(max_letters=4, max_len=3))
@settings(max_examples=80, deadline=None)
def test_square_matches_composed_morphism(m):
    assert square_graph(occurrence_graph(m)) == occurrence_graph(m.compose(m))


@given(morphisms(max_letters=5, max_len=3))
@settings(max_examples=80, deadline=None)
def test_primitive_matches_matrix_powers(m):
    mat = matrix_of(m)
    n = m.n
    p = np.eye(n, dtype=object)
    positive = False
    for _ in range((n - 1) ** 2 + 1):
        p = (p.dot(mat) > 0).astype(object)
        if (p > 0).all():
            positive = True
            break
    assert is_primitive(m) == positive


@given(st.integers(1, 7).flatmap(lambda n: st.lists(st.booleans(), min_size=n * n, max_size=n * n)))
@settings(max_examples=80, deadline=None)
def test_strong_connectivity_matches_closure(bits):
    n = int(round(len(bits) ** 0.5))
    adj = np.array(bits, dtype=bool).reshape(n, n)
    letters = tuple(str(i) for i in range(n))
    rules = {b: tuple(letters[j] for j in np.flatnonzero(adj[i])) for i, b in enumerate(letters)}
    g = occurrence_graph(Morphism.from_rules(rules, letters))
    assert is_strongly_connected(g) == bool(_closure(adj).all())


@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.booleans(), min_size=n * n, max_size=n * n)),
       st.integers(0, 40))
@settings(max_examples=80, deadline=None)
def test_repeated_square_shortcut_is_exact(bits, times):
    n = int(round(len(bits) ** 0.5))
    adj = np.array(bits, dtype=bool).reshape(n, n)
    cur = adj
    for _ in range(times):
        cur = bool_square(cur)
    assert np.array_equal(repeated_square(adj, times), cur)


def test_cycle_gcd():
    ring = np.roll(np.eye(4, dtype=bool), 1, axis=1)
    assert cycle_gcd(ring, range(4)) == 4
    ring[0, 0] = True
    assert cycle_gcd(ring, range(4)) == 1


def test_occurrence_graph_power(thue_morse):
    g = occurrence_graph(thue_morse)
    assert occurrence_graph_power(g, 5) == g
