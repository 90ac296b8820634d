"""Almost periodicity of fixed points of non-erasing morphisms.

phi^inf(s) is almost periodic iff the occurrence graph restricted to the
growing letters is strongly connected and, in both tail graphs, every edge
lying on a cycle carries the empty word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import ConsistencyError, PreconditionError, UnsupportedInputError
from .graphs import is_primitive, occurrence_graph, reachable_from
from .growth import GrowthClassification, classify_letters
from .words import Morphism, is_prolongable, is_trimmed


class Verdict(str, Enum):
    AP = "AP"
    NOT_AP = "NOT_AP"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    decider: str
    clauses: tuple = ()
    witness: dict | None = None
    details: dict = field(default_factory=dict)
    flags: tuple = ()

    def __post_init__(self):
        if self.verdict is Verdict.NOT_AP and not self.witness:
            raise ConsistencyError("a NOT_AP decision must carry a witness")

    @property
    def is_ap(self) -> bool:
        return self.verdict is Verdict.AP

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "decider": self.decider,
            "clauses": [dict(c) for c in self.clauses],
            "witness": self.witness,
            "details": self.details,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class TailEdge:
    source: object
    target: object
    label: tuple


@dataclass(frozen=True)
class TailGraph:
    """Functional graph on the growing letters; ``side`` is ``"left"`` or ``"right"``."""

    side: str
    edges: dict

    def edge(self, b) -> TailEdge:
        return self.edges[b]

    def successor(self, b):
        return self.edges[b].target


def _tail_graph(m: Morphism, c: GrowthClassification, side: str) -> TailGraph:
    if not c.growing:
        raise PreconditionError("tail graphs need at least one growing letter")
    edges = {}
    for b in m.letters:
        if b not in c.growing:
            continue
        w = m.image(b)
        seq = w if side == "left" else w[::-1]
        cut = next((i for i, x in enumerate(seq) if x in c.growing), None)
        if cut is None:
            raise ConsistencyError(f"image of growing letter {b!r} has no growing letter")
        label = tuple(seq[:cut])
        if any(x not in c.bounded for x in label):
            raise ConsistencyError("classification does not cover the morphism's alphabet")
        if side == "right":
            label = label[::-1]
        edges[b] = TailEdge(b, seq[cut], label)
    return TailGraph(side, edges)


def left_tail_graph(m: Morphism, c: GrowthClassification) -> TailGraph:
    """Edge b -> c labelled u where image(b) = u c v and u is the longest bounded prefix."""
    return _tail_graph(m, c, "left")


def right_tail_graph(m: Morphism, c: GrowthClassification) -> TailGraph:
    return _tail_graph(m, c, "right")


def tail_cycles(t: TailGraph) -> list:
    """All cycles of the functional graph, each as a list of vertices."""
    cycles = []
    done = set()
    for start in t.edges:
        path, pos = [], {}
        v = start
        while v not in done and v not in pos:
            pos[v] = len(path)
            path.append(v)
            v = t.successor(v)
        if v in pos:
            cycles.append(path[pos[v]:])
        done.update(path)
    return cycles


def cycles_all_empty(t: TailGraph) -> tuple[bool, dict | None]:
    """Check that every cycle edge is labelled with the empty word.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness names one
    offending cycle and its first non-empty edge.
    """
    for cycle in tail_cycles(t):
        for v in cycle:
            e = t.edge(v)
            if e.label:
                return False, {
                    "cycle": list(cycle) + [cycle[0]],
                    "edge": {"source": e.source, "target": e.target, "label": list(e.label)},
                }
    return True, None


def _check_pure_input(m: Morphism, s):
    if not m.is_non_erasing():
        raise UnsupportedInputError("erasing morphisms are not supported by this decider")
    if not is_prolongable(m, s):
        raise PreconditionError(f"morphism is not prolongable on {s!r}")
    if not is_trimmed(m, s):
        raise PreconditionError(f"alphabet has letters unreachable from {s!r}; trim first")


def decide_pure_nonerasing(m: Morphism, s) -> Decision:
    _check_pure_input(m, s)
    c = classify_letters(m)
    g = occurrence_graph(m)
    idx = m.alphabet.index

    # growing letters can only reach growing letters, so paths within I are paths in G
    si = idx(s)
    back = reachable_from(g.adjacency.T, [si])
    stuck = [b for b in m.letters if b in c.growing and idx(b) not in back]
    connected = not stuck

    left = left_tail_graph(m, c)
    right = right_tail_graph(m, c)
    left_ok, left_w = cycles_all_empty(left)
    right_ok, right_w = cycles_all_empty(right)

    clauses = (
        {"clause": "growing_strongly_connected", "holds": connected},
        {"clause": "left_tail_cycles_empty", "holds": left_ok},
        {"clause": "right_tail_cycles_empty", "holds": right_ok},
    )
    details = {"classification": c.to_dict(m.letters)}
    if not connected:
        witness = {
            "clause": "growing_strongly_connected",
            "unreachable": [stuck[0], s],
        }
    elif not left_ok:
        witness = {"clause": "left_tail_cycles_empty", **left_w}
    elif not right_ok:
        witness = {"clause": "right_tail_cycles_empty", **right_w}
    else:
        witness = None
    verdict = Verdict.AP if witness is None else Verdict.NOT_AP
    return Decision(verdict, "pure", clauses, witness, details)


def decide_increasing(m: Morphism, s) -> Decision:
    """Every image has length at least 2: almost periodic iff primitive."""
    if any(len(w) < 2 for w in m.images):
        raise PreconditionError("decide_increasing needs every image of length >= 2")
    if not is_prolongable(m, s):
        raise PreconditionError(f"morphism is not prolongable on {s!r}")
    primitive = is_primitive(m)
    clauses = ({"clause": "primitive", "holds": primitive},)
    if primitive:
        return Decision(Verdict.AP, "increasing", clauses)
    g = occurrence_graph(m)
    back = reachable_from(g.adjacency.T, [m.alphabet.index(s)])
    stuck = [b for i, b in enumerate(m.letters) if i not in back]
    witness = {"clause": "primitive", "unreachable": [stuck[0], s]} if stuck else {
        "clause": "primitive", "reason": "cycle lengths share a common divisor > 1"}
    return Decision(Verdict.NOT_AP, "increasing", clauses, witness)


BINARY_CONDITIONS = (
    "start_image_all_start",
    "other_image_contains_start",
    "other_image_empty",
    "other_fixed_and_start_image_ends_with_start",
)


def decide_binary(m: Morphism, s) -> Decision:
    """Explicit criterion for two-letter morphisms prolongable on ``s``.

    With ``s`` = 0 and the other letter 1: almost periodic iff image(0) is all
    0s, image(1) contains 0, image(1) is empty, or image(1) = 1 and image(0)
    = 0u0.  No trimming is assumed.
    """
    if m.n != 2:
        raise PreconditionError("decide_binary needs a two-letter alphabet")
    if not is_prolongable(m, s):
        raise PreconditionError(f"morphism is not prolongable on {s!r}")
    other = next(b for b in m.letters if b != s)
    w0, w1 = m.image(s), m.image(other)
    holds = (
        all(x == s for x in w0),
        s in w1,
        len(w1) == 0,
        w1 == (other,) and len(w0) >= 2 and w0[-1] == s,
    )
    clauses = tuple({"clause": name, "holds": h} for name, h in zip(BINARY_CONDITIONS, holds))
    flags = ()
    if holds[2]:
        # listed under a non-erasing hypothesis although image(1) = Λ is erasing
        flags = ("binary_condition_3_erasing",)
    if any(holds):
        return Decision(Verdict.AP, "binary", clauses, flags=flags)
    # image(1) is a non-empty block of 1s
    if len(w1) >= 2:
        witness = {"clause": "growing_strongly_connected", "unreachable": [other, s]}
    else:
        witness = {
            "clause": "right_tail_cycles_empty",
            "cycle": [s, s],
            "edge": {"source": s, "target": s, "label": list(w0[len(w0) - _trailing(w0, other):])},
        }
    return Decision(Verdict.NOT_AP, "binary", clauses, witness, flags=flags)


def _trailing(w, letter) -> int:
    n = 0
    for x in reversed(w):
        if x != letter:
            break
        n += 1
    return n
