"""Occurrence graphs of morphisms, strong connectivity, primitivity, squaring."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable

import numpy as np

from .words import Alphabet, Morphism


def bool_square(adj: np.ndarray) -> np.ndarray:
    """Boolean matrix product ``adj @ adj``.

    float32 BLAS is exact here: entries are path counts bounded by the
    dimension, far below 2**24 for any graph we build.
    """
    a = adj.astype(np.float32)
    return (a @ a) > 0


def _frozen(adj: np.ndarray) -> np.ndarray:
    adj = np.array(adj, dtype=bool)
    adj.setflags(write=False)
    return adj


class OccurrenceGraph:
    """Directed graph on letters; edge b -> c iff c occurs in the image of b.

    ``adjacency[i, j]`` is the edge from letter i to letter j, in alphabet order.
    """

    __slots__ = ("alphabet", "adjacency")

    def __init__(self, alphabet: Alphabet, adjacency):
        adjacency = _frozen(adjacency)
        n = len(alphabet)
        if adjacency.shape != (n, n):
            raise ValueError(f"adjacency must be {n}x{n}, got {adjacency.shape}")
        self.alphabet = alphabet
        self.adjacency = adjacency

    @property
    def letters(self):
        return self.alphabet.letters

    def successors(self, b) -> frozenset:
        row = self.adjacency[self.alphabet.index(b)]
        return frozenset(self.letters[j] for j in np.flatnonzero(row))

    def edges(self) -> list:
        return [(self.letters[i], self.letters[j]) for i, j in zip(*np.nonzero(self.adjacency))]

    def to_dot(self, name="G") -> str:
        lines = [f"digraph {name} {{"]
        for b in self.letters:
            lines.append(f'  "{b}";')
        for b, c in self.edges():
            lines.append(f'  "{b}" -> "{c}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, OccurrenceGraph):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash((self.alphabet, self.adjacency.tobytes()))

    def __repr__(self):
        succ = {b: sorted(map(str, self.successors(b))) for b in self.letters}
        return f"OccurrenceGraph({succ})"


def occurrence_graph(m: Morphism) -> OccurrenceGraph:
    n = m.n
    adj = np.zeros((n, n), dtype=bool)
    for i, w in enumerate(m.image_codes()):
        adj[i, w] = True
    return OccurrenceGraph(m.alphabet, adj)


def square_graph(g: OccurrenceGraph) -> OccurrenceGraph:
    return OccurrenceGraph(g.alphabet, bool_square(g.adjacency))


def _successor_lists(adj: np.ndarray) -> list:
    return [np.flatnonzero(row).tolist() for row in adj]


def tarjan_scc(adj: np.ndarray) -> list:
    """Component id per vertex; ids are in reverse topological order (sinks first)."""
    n = adj.shape[0]
    succ = _successor_lists(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


@dataclass(frozen=True)
class SCCDecomposition:
    letters: tuple
    component: tuple
    condensation_edges: frozenset

    @property
    def count(self) -> int:
        return max(self.component) + 1 if self.component else 0

    def members(self, cid: int) -> frozenset:
        return frozenset(b for b, c in zip(self.letters, self.component) if c == cid)

    def components(self) -> list:
        return [self.members(c) for c in range(self.count)]


def scc_decomposition(g: OccurrenceGraph) -> SCCDecomposition:
    comp = tarjan_scc(g.adjacency)
    cond = {(comp[i], comp[j]) for i, j in zip(*np.nonzero(g.adjacency)) if comp[i] != comp[j]}
    return SCCDecomposition(g.letters, tuple(comp), frozenset(cond))


def _restricted(g: OccurrenceGraph, restrict: Iterable | None):
    if restrict is None:
        return g.adjacency, list(range(len(g.letters)))
    idx = sorted({g.alphabet.index(b) for b in restrict})
    return g.adjacency[np.ix_(idx, idx)], idx


def is_strongly_connected(g: OccurrenceGraph, restrict: Iterable | None = None) -> bool:
    adj, idx = _restricted(g, restrict)
    if len(idx) <= 1:
        return True
    comp = tarjan_scc(adj)
    return max(comp) == 0


def reachable_from(adj: np.ndarray, sources: Iterable[int]) -> set:
    succ = _successor_lists(adj)
    seen = set(sources)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def cycle_gcd(adj: np.ndarray, vertices: Iterable[int]) -> int:
    """gcd of cycle lengths inside the (strongly connected) vertex set; 0 if acyclic.

    BFS levels from one vertex; every edge u -> v inside the set contributes
    level[u] + 1 - level[v].
    """
    vs = sorted(vertices)
    if not vs:
        return 0
    inside = set(vs)
    succ = _successor_lists(adj)
    level = {vs[0]: 0}
    queue = [vs[0]]
    for v in queue:
        for w in succ[v]:
            if w in inside and w not in level:
                level[w] = level[v] + 1
                queue.append(w)
    g = 0
    for v in vs:
        if v not in level:
            continue
        for w in succ[v]:
            if w in level:
                g = gcd(g, abs(level[v] + 1 - level[w]))
    return g


def is_primitive(m: Morphism) -> bool:
    """Some power of the incidence matrix is entrywise positive.

    Equivalent to: occurrence graph strongly connected and its cycle lengths coprime.
    """
    g = occurrence_graph(m)
    if not is_strongly_connected(g):
        return False
    return cycle_gcd(g.adjacency, range(m.n)) == 1


def repeated_square(adj: np.ndarray, times: int) -> np.ndarray:
    """``adj`` squared ``times`` times, i.e. the walk relation of length 2**times.

    Squaring is a deterministic map on a finite set of Boolean matrices, so
    once a matrix repeats the rest of the sequence is periodic and the answer
    for any ``times`` follows from the cycle without further products.
    """
    seen = {}
    history = []
    cur = np.asarray(adj, dtype=bool)
    for step in range(times + 1):
        if step == times:
            return cur
        key = np.packbits(cur).tobytes()
        if key in seen:
            first = seen[key]
            period = step - first
            return history[first + (times - first) % period]
        seen[key] = step
        history.append(cur)
        cur = bool_square(cur)
    return cur


def occurrence_graph_power(g: OccurrenceGraph, exponent_log: int) -> OccurrenceGraph:
    """Occurrence graph of the 2**exponent_log-th power of the morphism."""
    return OccurrenceGraph(g.alphabet, repeated_square(g.adjacency, exponent_log))
