"""Pick the right decision procedure for a morphism, coding and start letter."""

from __future__ import annotations

from dataclasses import dataclass

from .automatic import DeciderConfig, decide_automatic
from .errors import PreconditionError, UnsupportedInputError
from .pure import Decision, decide_binary, decide_increasing, decide_pure_nonerasing
from .words import Coding, Morphism, is_prolongable, trim_reachable

DECIDERS = ("auto", "pure", "binary", "increasing", "automatic")


@dataclass(frozen=True)
class Routed:
    decision: Decision
    morphism: Morphism
    coding: Coding | None
    steps: tuple


def normalize(m: Morphism, s, h: Coding | None = None):
    """Trim to letters reachable from ``s``; drop an identity coding."""
    steps = []
    if not is_prolongable(m, s):
        raise PreconditionError(f"morphism is not prolongable on {s!r}")
    t = trim_reachable(m, s)
    if t.n != m.n:
        dropped = [b for b in m.letters if b not in t.alphabet]
        steps.append({"step": "trim_reachable", "removed": dropped})
    if h is not None:
        h = h.restrict(t.alphabet)
        if h.is_identity():
            h = None
            steps.append({"step": "identity_coding_dropped"})
    return t, h, steps


def decide(m: Morphism, s, h: Coding | None = None, decider: str = "auto",
           cfg: DeciderConfig | None = None, method: str = "auto") -> Routed:
    if decider not in DECIDERS:
        raise ValueError(f"unknown decider {decider!r}")
    t, h, steps = normalize(m, s, h)
    if decider == "auto":
        decider = _route(t, h)
    if h is not None and decider != "automatic":
        raise UnsupportedInputError(f"the {decider} decider handles pure sequences only")
    if decider == "automatic":
        d = decide_automatic(t, h, s, cfg, method=method)
    elif decider == "binary":
        d = decide_binary(t, s)
    elif decider == "increasing":
        d = decide_increasing(t, s)
    else:
        d = decide_pure_nonerasing(t, s)
    return Routed(d, t, h, tuple(steps))


def _route(t: Morphism, h: Coding | None) -> str:
    if h is not None:
        if t.is_uniform():
            return "automatic"
        raise UnsupportedInputError(
            "coded non-uniform morphisms are not covered: almost periodicity of "
            "general morphic sequences has no known decision procedure")
    if t.n == 2:
        return "binary"
    if t.is_non_erasing():
        return "pure"
    raise UnsupportedInputError(
        "erasing morphisms are not covered: almost periodicity of general "
        "morphic sequences has no known decision procedure")
