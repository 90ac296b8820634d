import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from morphic_ap.errors import PreconditionError, ResourceLimitError
from morphic_ap.oracle import (
    PREFIX_CAP_ENV,
    PrefixStream,
    aligned_occurrences,
    ap_evidence,
    factor_gaps,
    generate_prefix,
    prefix_cap,
    product_with_periodic,
    regulator_estimate,
)
from morphic_ap.words import Coding, Morphism, is_prolongable, power_apply

from conftest import PHI1, PHI2, THUE_MORSE, naive_iterate, starts_with_start


def s(w):
    return "".join(w)


def naive_positions(w, u):
    return [i for i in range(len(w) - len(u) + 1) if tuple(w[i:i + len(u)]) == tuple(u)]


def naive_prefix(rules, n):
    w = "0"
    while len(w) < n:
        nxt = naive_iterate(rules, w, 1, cut=n)
        if nxt == w:
            break
        w = nxt
    return w[:n]


def test_generate_prefix_examples(phi1, thue_morse):
    assert s(generate_prefix(phi1, "0", n=8)) == "01120120"
    assert s(generate_prefix(phi1, "0", n=8)) == naive_iterate(PHI1, "0", 8)[:8]
    assert s(generate_prefix(thue_morse, "0", n=8)) == "01101001"
    assert generate_prefix(phi1, "0", n=1) == ("0",)


def test_generate_prefix_with_coding(thue_morse):
    h = Coding.from_dict({"0": "a", "1": "b"}, "01")
    assert s(generate_prefix(thue_morse, "0", h, 8)) == "abbabaab"


def test_generate_prefix_errors(phi1, thue_morse, monkeypatch):
    with pytest.raises(PreconditionError):
        generate_prefix(phi1, "2", n=5)
    with pytest.raises(ResourceLimitError):
        generate_prefix(thue_morse, "0", n=101, cap=100)
    monkeypatch.setenv(PREFIX_CAP_ENV, "50")
    assert prefix_cap() == 50
    with pytest.raises(ResourceLimitError):
        generate_prefix(thue_morse, "0", n=51)


def test_prefix_stream_is_append_only(phi2):
    stream = PrefixStream(phi2, "0")
    a = stream.prefix(37)
    b = stream.prefix(5000)
    assert b[:37] == a
    assert s(b) == naive_prefix(PHI2, 5000)


def test_eventually_periodic_tiling():
    m = Morphism.from_rules({"0": "01", "1": "2", "2": "1"})
    stream = PrefixStream(m, "0")
    assert s(stream.prefix(7)) == "0121212"
    assert s(stream.prefix(12)) == "012121212121"
    erasing = Morphism.from_rules({"0": "010", "1": ""})
    assert s(generate_prefix(erasing, "0", n=10)) == "0100100100"


@given(starts_with_start(max_letters=4, max_len=3), st.integers(1, 400))
@settings(max_examples=120, deadline=None)
def test_generate_prefix_matches_string_rewriting(m, n):
    assume(is_prolongable(m, "0"))
    rules = {b: s(w) for b, w in m.rules().items()}
    got = generate_prefix(m, "0", n=n)
    assert s(got) == naive_prefix(rules, n)
    assert generate_prefix(m, "0", n=2 * n)[:n] == got


def test_factor_gaps_examples(thue_morse, phi2):
    rep = factor_gaps("0101", "01")
    assert rep.positions == (0, 2) and rep.max_gap == 2
    tm = generate_prefix(thue_morse, "0", n=10**4)
    assert factor_gaps(tm, "0").max_gap == 3
    w = generate_prefix(phi2, "0", n=10**4)
    assert factor_gaps(w[:1000], "0").max_gap == 12
    assert factor_gaps(w, "0").max_gap == 14
    assert factor_gaps("0111", "0").max_gap == math.inf
    with pytest.raises(PreconditionError):
        factor_gaps("01", "")


@given(st.text("abc", max_size=300), st.text("abc", min_size=1, max_size=3))
@settings(max_examples=150, deadline=None)
def test_factor_gaps_against_naive_scan(w, u):
    rep = factor_gaps(w, u)
    pos = naive_positions(w, u)
    assert list(rep.positions) == pos
    gaps = [b - a for a, b in zip(pos, pos[1:])]
    assert rep.max_gap == (max(gaps) if gaps else math.inf)


@given(st.text("ab", max_size=200), st.text("ab", min_size=1, max_size=3), st.integers(1, 5))
@settings(max_examples=100, deadline=None)
def test_aligned_subset(w, u, k):
    got = aligned_occurrences(w, u, k)
    assert got == [p for p in factor_gaps(w, u).positions if p % k == 0]


def test_aligned_examples(thue_morse):
    assert aligned_occurrences("010101", "01", 2) == [0, 2, 4]
    assert aligned_occurrences("01", "0110", 1) == []
    tm = generate_prefix(thue_morse, "0", n=64)
    block = power_apply(thue_morse, "0", 2)
    expected = [i for i in range(0, 64, 4) if tm[i:i + 4] == block]
    assert aligned_occurrences(tm, block, 4) == expected == [0, 12, 20, 24, 36, 40, 48, 60]


def test_ap_evidence_examples(phi1, phi2):
    ev = ap_evidence(phi1, "0", None, 10**4, 10**5, 3)
    assert ev.consistent and ev.finite_scale
    ev = ap_evidence(phi2, "0", None, 10**4, 10**5, 3)
    assert ev.status == "GREW"
    assert ("0",) in ev.grew_factors()
    const = Morphism.from_rules({"0": "00"})
    assert ap_evidence(const, "0", None, 100, 1000, 3).consistent
    with pytest.raises(PreconditionError):
        ap_evidence(phi1, "0", None, 10, 10)


def test_ap_evidence_single_occurrence_grows():
    m = Morphism.from_rules({"0": "01", "1": "1"})
    assert ("0",) in ap_evidence(m, "0", None, 100, 1000, 1).grew_factors()


def test_regulator_examples(thue_morse):
    assert regulator_estimate("01" * 50, 1)[1] == 2
    tm = generate_prefix(thue_morse, "0", n=10**4)
    est = regulator_estimate(tm, 3)
    assert est.values == (3, 9, 11)
    assert regulator_estimate("0111111", 1)[1] is None


def _window_regulator(w, n, n_max):
    """Brute force: least L so every window over the scanned range holds every factor."""
    limit = len(w) - n_max + 1
    facs = {w[i:i + n] for i in range(limit)}
    for L in range(n, len(w) + 1):
        if all(all(f in w[j:j + L] for f in facs) for j in range(0, limit + n - L)):
            return L
    return None


@given(st.sampled_from([PHI1, THUE_MORSE, {"0": "01", "1": "0"}]), st.integers(1, 3))
@settings(max_examples=20, deadline=None)
def test_regulator_against_window_scan(rules, n):
    w = naive_prefix(rules, 600)
    assert regulator_estimate(w, 3)[n] == _window_regulator(w, n, 3)


@given(st.text("abc", min_size=1, max_size=6), st.integers(1, 4))
@settings(max_examples=80, deadline=None)
def test_regulator_on_periodic_word(unit, n_max):
    w = unit * (200 // len(unit) + 2)
    T = len(unit)
    est = regulator_estimate(w, n_max)
    defined = [v for v in est.values if v is not None]
    assert defined == sorted(defined)
    for n, v in enumerate(est.values, 1):
        assert v is not None and v <= T + n - 1


def test_product_with_periodic(thue_morse):
    w = tuple("0110")
    assert [b for b, _ in product_with_periodic(w, 1)] == list(w)
    prod = product_with_periodic(w, len(w))
    assert len(set(prod)) == len(w)
    tm = generate_prefix(thue_morse, "0", n=256)
    prod = product_with_periodic(tm, 2)
    tagged = ((tm[0], 0), (tm[1], 1))
    assert [p for p in factor_gaps(prod, tagged).positions] == aligned_occurrences(tm, tm[:2], 2)
    with pytest.raises(PreconditionError):
        product_with_periodic(w, 0)
