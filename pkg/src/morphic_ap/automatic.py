"""Almost periodicity of automatic sequences h(phi^inf(s)), phi k-uniform.

Letters b, c are level-l equivalent when h(phi^l(b)) = h(phi^l(c)).  The
sequence is almost periodic iff, for a level r at least the Bell number B_n,
some power phi^m puts a letter level-r equivalent to s into the image of
every letter.  Both ingredients are computed without materializing words:
the level-2^r relation through repeated doubling of a graph on letter
pairs, the coverage through repeated squaring of the occurrence graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    ConsistencyError,
    PreconditionError,
    ResourceLimitError,
    UnsupportedInputError,
)
from .graphs import bool_square, occurrence_graph, repeated_square
from .pure import Decision, Verdict
from .words import Coding, Morphism, is_prolongable, is_trimmed, power_apply

EXPANSION_CAP = 10**6


@lru_cache(maxsize=None)
def bell_number(n: int) -> int:
    """Number of partitions of an n-element set (Bell triangle)."""
    if n == 0:
        return 1
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[-1]


@dataclass(frozen=True)
class EquivalenceRelation:
    """Partition of an alphabet; ``labels[i]`` is the index of the least member of i's class."""

    letters: tuple
    labels: tuple

    @classmethod
    def from_keys(cls, letters, keys) -> "EquivalenceRelation":
        first = {}
        labels = tuple(first.setdefault(key, i) for i, key in enumerate(keys))
        return cls(tuple(letters), labels)

    @classmethod
    def from_related(cls, letters, related) -> "EquivalenceRelation":
        """Build from a symmetric predicate ``related(i, j)`` on indices, checking transitivity."""
        letters = tuple(letters)
        n = len(letters)
        labels = list(range(n))
        for i in range(n):
            for j in range(i):
                if related(j, i):
                    labels[i] = labels[j]
                    break
        rel = cls(letters, tuple(labels))
        for i in range(n):
            for j in range(i):
                if related(j, i) != (labels[i] == labels[j]):
                    raise ConsistencyError("relation is not an equivalence")
        return rel

    def equivalent(self, b, c) -> bool:
        return self.labels[self.letters.index(b)] == self.labels[self.letters.index(c)]

    def class_of(self, b) -> frozenset:
        lab = self.labels[self.letters.index(b)]
        return frozenset(x for x, y in zip(self.letters, self.labels) if y == lab)

    def classes(self) -> list:
        groups = {}
        for b, lab in zip(self.letters, self.labels):
            groups.setdefault(lab, []).append(b)
        return [frozenset(g) for g in groups.values()]


def _uniform_length(m: Morphism, error=PreconditionError) -> int:
    k = m.uniform_length()
    if k is None:
        raise error("morphism is not uniform")
    return k


def _coding_for(m: Morphism, h: Coding | None) -> Coding:
    if h is None:
        return Coding.identity(m.alphabet)
    if h.source != m.alphabet:
        raise PreconditionError("coding must be defined on the morphism's alphabet")
    return h


def relation_at_level(m: Morphism, h: Coding | None, l: int, cap: int = EXPANSION_CAP) -> EquivalenceRelation:
    """Level-l relation by direct expansion of phi^l on every letter (test oracle)."""
    k = _uniform_length(m)
    h = _coding_for(m, h)
    if k**l > cap:
        raise ResourceLimitError(f"k**l = {k**l} exceeds expansion cap {cap}")
    keys = [h.apply(power_apply(m, (b,), l, cap=cap)) for b in m.letters]
    return EquivalenceRelation.from_keys(m.letters, keys)


def relation_step(m: Morphism, rel: EquivalenceRelation) -> EquivalenceRelation:
    """b ~_{l+1} c iff phi(b) and phi(c) are letterwise ~_l."""
    codes = m.image_codes()
    keys = [tuple(rel.labels[x] for x in w) for w in codes]
    return EquivalenceRelation.from_keys(m.letters, keys)


@dataclass(frozen=True)
class RelationProfile:
    relations: tuple
    preperiod: int | None
    period: int | None

    def at(self, level: int) -> EquivalenceRelation:
        """Relation at any level, using the detected repeat for levels past the computed range."""
        if level < len(self.relations):
            return self.relations[level]
        if self.period is None:
            raise ValueError("no repeat detected; level out of computed range")
        p, q = self.preperiod, self.period
        return self.relations[p + (level - p) % q]


def relation_sequence_profile(
    m: Morphism, h: Coding | None, l_max: int, stop_at_repeat: bool = False
) -> RelationProfile:
    """Relations at levels 0..l_max and the first repeat as (preperiod, period)."""
    _uniform_length(m)
    h = _coding_for(m, h)
    rel = EquivalenceRelation.from_keys(m.letters, h.values)
    relations = [rel]
    seen = {rel.labels: 0}
    pre = per = None
    for l in range(1, l_max + 1):
        rel = relation_step(m, rel)
        relations.append(rel)
        if per is None:
            if rel.labels in seen:
                pre = seen[rel.labels]
                per = l - pre
                if stop_at_repeat:
                    break
            else:
                seen[rel.labels] = l
    return RelationProfile(tuple(relations), pre, per)


# -- pair graphs ------------------------------------------------------------


def _pair_table(n: int):
    """Index arrays for the unordered pairs (i, j), i < j, and the inverse lookup."""
    first, second = np.triu_indices(n, k=1)
    lookup = np.full((n, n), -1, dtype=np.int64)
    ids = np.arange(len(first))
    lookup[first, second] = ids
    lookup[second, first] = ids
    return first, second, lookup


class PairGraph:
    """Graph on unordered pairs of distinct letters.

    At level i the successors of (b, c) are the pairs of distinct letters
    found at a common position of phi^(2^i)(b) and phi^(2^i)(c).
    """

    __slots__ = ("letters", "first", "second", "lookup", "adjacency", "level")

    def __init__(self, letters, adjacency, level: int):
        n = len(letters)
        first, second, lookup = _pair_table(n)
        adjacency = np.array(adjacency, dtype=bool)
        if adjacency.shape != (len(first), len(first)):
            raise ValueError("pair graph adjacency has the wrong shape")
        if level < 0:
            raise ValueError("level must be non-negative")
        adjacency.setflags(write=False)
        self.letters = tuple(letters)
        self.first, self.second, self.lookup = first, second, lookup
        self.adjacency = adjacency
        self.level = level

    @property
    def size(self) -> int:
        return len(self.first)

    def pair(self, v: int) -> tuple:
        return (self.letters[self.first[v]], self.letters[self.second[v]])

    def vertex(self, b, c) -> int:
        i, j = self.letters.index(b), self.letters.index(c)
        if i == j:
            raise ValueError("pair graph vertices are pairs of distinct letters")
        return int(self.lookup[i, j])

    def neighbors(self, b, c) -> frozenset:
        """V_i(b, c) as a set of letter pairs ordered by alphabet position."""
        row = self.adjacency[self.vertex(b, c)]
        return frozenset(self.pair(v) for v in np.flatnonzero(row))

    def __eq__(self, other):
        if not isinstance(other, PairGraph):
            return NotImplemented
        return (
            self.letters == other.letters
            and self.level == other.level
            and np.array_equal(self.adjacency, other.adjacency)
        )

    __hash__ = None


def initial_pair_graph(m: Morphism) -> PairGraph:
    _uniform_length(m)
    n = m.n
    first, second, lookup = _pair_table(n)
    images = np.array(m.image_codes(), dtype=np.int64).reshape(n, -1)
    x, y = images[first], images[second]
    rows, cols = np.nonzero(x != y)
    adj = np.zeros((len(first), len(first)), dtype=bool)
    adj[rows, lookup[x[rows, cols], y[rows, cols]]] = True
    return PairGraph(m.letters, adj, 0)


def double_pair_graph(t: PairGraph) -> PairGraph:
    return PairGraph(t.letters, bool_square(t.adjacency), t.level + 1)


def pair_graph_at(m: Morphism, level: int) -> PairGraph:
    t0 = initial_pair_graph(m)
    return PairGraph(m.letters, repeated_square(t0.adjacency, level), level)


def pair_graph_relation(t: PairGraph, h: Coding) -> EquivalenceRelation:
    """b ~ c iff every pair reachable from (b, c) in ``t`` has equal codes."""
    codes = h.class_codes()
    bad = codes[t.first] != codes[t.second]
    ok = ~(t.adjacency & bad[None, :]).any(axis=1)

    def related(i, j):
        return bool(ok[t.lookup[i, j]])

    return EquivalenceRelation.from_related(t.letters, related)


@dataclass(frozen=True)
class DeciderConfig:
    """``r_iterations`` pair-graph doublings, ``coverage_squarings`` occurrence-graph squarings.

    ``recurrence_budget`` caps the levels tried by the relation recurrence
    before falling back to pair-graph doubling.
    """

    r_iterations: int
    coverage_squarings: int
    recurrence_budget: int = 0

    @classmethod
    def for_size(cls, n: int) -> "DeciderConfig":
        r = math.ceil(n * math.log2(max(n, 2))) + 1
        return cls(r, n * n + 1, max(64, n * n))

    def validate(self, n: int):
        if 2**self.r_iterations < bell_number(n):
            raise PreconditionError(f"2**{self.r_iterations} is below the Bell number B_{n}")
        if self.coverage_squarings < n * n + 1:
            raise PreconditionError(f"coverage_squarings must be at least {n * n + 1}")


def _class_of_start(letters, s, related) -> frozenset:
    return frozenset([s] + [b for b in letters if b != s and related(b)])


def stable_class_of_start(m: Morphism, h: Coding | None, s, cfg: DeciderConfig | None = None) -> frozenset:
    """Letters level-2^r equivalent to ``s``, read off the r-times doubled pair graph."""
    h = _coding_for(m, h)
    cfg = cfg or DeciderConfig.for_size(m.n)
    cfg.validate(m.n)
    if m.n == 1:
        return frozenset([s])
    t = pair_graph_at(m, cfg.r_iterations)
    codes = h.class_codes()
    bad = codes[t.first] != codes[t.second]
    ok = ~(t.adjacency & bad[None, :]).any(axis=1)
    return _class_of_start(m.letters, s, lambda b: ok[t.vertex(s, b)])


def start_class_by_recurrence(m: Morphism, h: Coding | None, s, level: int, budget: int):
    """Class of ``s`` at ``level`` via the relation recurrence, or None if no repeat within ``budget``."""
    profile = relation_sequence_profile(m, h, min(level, budget), stop_at_repeat=True)
    if level >= len(profile.relations) and profile.period is None:
        return None
    rel = profile.at(level)
    return rel.class_of(s)


@dataclass(frozen=True)
class OccurrenceSets:
    """``sets[b]``: letters occurring in phi^M(b) with M = 2**exponent_log."""

    sets: dict
    exponent_log: int

    @property
    def exponent(self) -> int:
        return 2**self.exponent_log


def occurrence_sets_at(m: Morphism, exponent_log: int) -> OccurrenceSets:
    adj = repeated_square(occurrence_graph(m).adjacency, exponent_log)
    letters = m.letters
    sets = {b: frozenset(letters[j] for j in np.flatnonzero(adj[i])) for i, b in enumerate(letters)}
    return OccurrenceSets(sets, exponent_log)


def decide_automatic(
    m: Morphism,
    h: Coding | None,
    s,
    cfg: DeciderConfig | None = None,
    method: str = "auto",
) -> Decision:
    """Decide almost periodicity of h(phi^inf(s)) for uniform phi.

    ``method`` picks how the class of ``s`` is found: ``"pairgraph"`` always
    doubles the pair graph; ``"auto"`` first follows the relation recurrence
    for at most ``cfg.recurrence_budget`` levels and falls back to doubling
    when no repeat shows up.  Both give the same set.
    """
    if method not in ("auto", "pairgraph"):
        raise ValueError(f"unknown method {method!r}")
    k = _uniform_length(m, UnsupportedInputError)
    h = _coding_for(m, h)
    if not is_prolongable(m, s):
        raise PreconditionError(f"morphism is not prolongable on {s!r}")
    if not is_trimmed(m, s):
        raise PreconditionError(f"alphabet has letters unreachable from {s!r}; trim first")
    cfg = cfg or DeciderConfig.for_size(m.n)
    cfg.validate(m.n)

    used = "pairgraph"
    start_class = None
    if method == "auto":
        start_class = start_class_by_recurrence(m, h, s, 2**cfg.r_iterations, cfg.recurrence_budget)
        if start_class is not None:
            used = "recurrence"
    if start_class is None:
        start_class = stable_class_of_start(m, h, s, cfg)

    occ = occurrence_sets_at(m, cfg.coverage_squarings)
    covered = {b: bool(occ.sets[b] & start_class) for b in m.letters}
    missing = [b for b in m.letters if not covered[b]]
    order = list(m.letters)
    details = {
        "k": k,
        "start_class": [b for b in order if b in start_class],
        "r_iterations": cfg.r_iterations,
        "coverage_squarings": cfg.coverage_squarings,
        "class_method": used,
        "covered": {str(b): covered[b] for b in order},
    }
    clauses = ({"clause": "start_class_in_every_image", "holds": not missing},)
    if not missing:
        return Decision(Verdict.AP, "automatic", clauses, None, details)
    witness = {
        "clause": "start_class_in_every_image",
        "start_class": details["start_class"],
        "uncovered": missing,
    }
    return Decision(Verdict.NOT_AP, "automatic", clauses, witness, details)
