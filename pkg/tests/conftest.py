import pytest
from hypothesis import strategies as st

from morphic_ap.words import Morphism

PHI1 = {"0": "01", "1": "120", "2": "2"}
PHI2 = {"0": "01", "1": "210", "2": "2"}
THUE_MORSE = {"0": "01", "1": "10"}


@pytest.fixture
def phi1():
    return Morphism.from_rules(PHI1)


@pytest.fixture
def phi2():
    return Morphism.from_rules(PHI2)


@pytest.fixture
def thue_morse():
    return Morphism.from_rules(THUE_MORSE)


def naive_iterate(rules: dict, w: str, t: int, cut: int | None = None) -> str:
    """String rewriting, used as an independent oracle for word-level results."""
    for _ in range(t):
        w = "".join(rules[c] for c in w)
        if cut is not None:
            w = w[:cut]
    return w


@st.composite
def morphisms(draw, max_letters=4, max_len=3, min_len=0):
    n = draw(st.integers(1, max_letters))
    letters = [str(i) for i in range(n)]
    rules = {
        b: tuple(draw(st.lists(st.sampled_from(letters), min_size=min_len, max_size=max_len)))
        for b in letters
    }
    return Morphism.from_rules(rules, letters)


@st.composite
def starts_with_start(draw, max_letters=4, max_len=3):
    """Morphisms (erasing allowed) whose image of 0 is 0 followed by at least one letter."""
    m = draw(morphisms(max_letters=max_letters, max_len=max_len))
    tail = draw(st.lists(st.sampled_from(m.letters), min_size=1, max_size=max(max_len - 1, 1)))
    rules = m.rules()
    rules["0"] = ("0",) + tuple(tail)
    return Morphism.from_rules(rules, m.letters)


@st.composite
def prolongable_nonerasing(draw, max_letters=4, max_len=3):
    """Non-erasing morphisms over 0..n-1 prolongable on 0."""
    n = draw(st.integers(1, max_letters))
    letters = [str(i) for i in range(n)]
    rules = {}
    for b in letters:
        w = draw(st.lists(st.sampled_from(letters), min_size=1, max_size=max_len))
        rules[b] = tuple(w)
    tail = draw(st.lists(st.sampled_from(letters), min_size=1, max_size=max(max_len - 1, 1)))
    rules["0"] = ("0",) + tuple(tail)
    return Morphism.from_rules(rules, letters)


@st.composite
def uniform_morphisms(draw, max_letters=4, max_k=3, prolongable=True):
    n = draw(st.integers(1, max_letters))
    k = draw(st.integers(2 if prolongable else 1, max_k))
    letters = [str(i) for i in range(n)]
    rules = {b: tuple(draw(st.lists(st.sampled_from(letters), min_size=k, max_size=k))) for b in letters}
    if prolongable:
        rules["0"] = ("0",) + rules["0"][1:]
    return Morphism.from_rules(rules, letters)


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES = []


def record_criterion(number: int, ok: bool, detail: str):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
