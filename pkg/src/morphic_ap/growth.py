"""Split the alphabet of a non-erasing morphism into growing and bounded letters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .graphs import occurrence_graph, reachable_from, tarjan_scc
from .words import Morphism


@dataclass(frozen=True)
class GrowthClassification:
    """``growing`` (I): image lengths diverge.  ``bounded`` (F): they stay bounded.

    ``single`` (E) holds the letters with one-letter images and ``stable`` (D)
    the letters lying on cycles made of such letters.
    """

    growing: frozenset
    bounded: frozenset
    single: frozenset
    stable: frozenset

    # short aliases matching the usual notation
    @property
    def I(self):  # noqa: E743
        return self.growing

    @property
    def F(self):
        return self.bounded

    @property
    def E(self):
        return self.single

    @property
    def D(self):
        return self.stable

    def to_dict(self, order) -> dict:
        def listed(s):
            return [b for b in order if b in s]

        return {
            "I": listed(self.growing),
            "F": listed(self.bounded),
            "E": listed(self.single),
            "D": listed(self.stable),
        }


def classify_letters(m: Morphism) -> GrowthClassification:
    if not m.is_non_erasing():
        raise PreconditionError("growth classification needs a non-erasing morphism")
    n = m.n
    codes = m.image_codes()
    single = [i for i in range(n) if len(codes[i]) == 1]
    in_single = set(single)

    # one-letter images form a functional graph on E; D collects its cycles
    stable = set()
    for start in single:
        path = []
        pos = {}
        v = start
        while v in in_single and v not in pos and v not in stable:
            pos[v] = len(path)
            path.append(v)
            v = codes[v][0]
        if v in pos:
            stable.update(path[pos[v]:])

    # a vertex on a cycle outside D forces growth for everything that reaches it
    adj = occurrence_graph(m).adjacency
    comp = tarjan_scc(adj)
    sizes = np.bincount(comp)
    cyclic = [i for i in range(n) if sizes[comp[i]] > 1 or adj[i, i]]
    seeds = [i for i in cyclic if i not in stable]
    growing = reachable_from(adj.T, seeds)

    letters = m.letters
    return GrowthClassification(
        growing=frozenset(letters[i] for i in growing),
        bounded=frozenset(letters[i] for i in range(n) if i not in growing),
        single=frozenset(letters[i] for i in single),
        stable=frozenset(letters[i] for i in stable),
    )


def bounded_length_bound(m: Morphism, c: GrowthClassification) -> int:
    """Crude upper bound n * k**n on the image lengths of bounded letters."""
    if not c.bounded:
        return 0
    return m.n * m.k ** m.n
