"""Finite-prefix measurements on morphic sequences.

Everything here is evidence about a finite prefix, never a proof of almost
periodicity.  The deciders are checked against these measurements.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, ResourceLimitError
from .words import Coding, Morphism, is_prolongable

PREFIX_CAP_ENV = "MORPHIC_AP_PREFIX_CAP"
DEFAULT_PREFIX_CAP = 10**6
INF = math.inf


def prefix_cap() -> int:
    value = os.environ.get(PREFIX_CAP_ENV)
    return int(value) if value else DEFAULT_PREFIX_CAP


class _Expander:
    """Vectorized application of a morphism to index arrays."""

    def __init__(self, m: Morphism):
        codes = m.image_codes()
        self.lengths = np.array([len(w) for w in codes], dtype=np.int64)
        self.starts = np.concatenate([[0], np.cumsum(self.lengths)[:-1]]).astype(np.int64)
        self.flat = np.array([c for w in codes for c in w], dtype=np.int64)

    def __call__(self, x: np.ndarray, limit: int | None = None) -> np.ndarray:
        lens = self.lengths[x]
        if limit is not None:
            ends = np.cumsum(lens)
            cut = int(np.searchsorted(ends, limit)) + 1
            x, lens = x[:cut], lens[:cut]
        total = int(lens.sum())
        if total == 0:
            return np.empty(0, dtype=np.int64)
        offsets = np.repeat(self.starts[x] - np.concatenate([[0], np.cumsum(lens)[:-1]]), lens)
        return self.flat[offsets + np.arange(total)]


class PrefixStream:
    """Append-only prefix of h(phi^inf(s)).

    The fixed point is s u phi(u) phi^2(u) ...; each block is the image of
    the previous one, so earlier letters are never recomputed.  Only the
    block being appended may be materialized partially.
    """

    # short blocks are remembered so an eventually periodic block sequence is tiled
    _MEMO_LIMIT = 256

    def __init__(self, m: Morphism, s, h: Coding | None = None, cap: int | None = None):
        if not is_prolongable(m, s):
            raise PreconditionError(f"morphism is not prolongable on {s!r}")
        if h is not None and h.source != m.alphabet:
            raise PreconditionError("coding must be defined on the morphism's alphabet")
        self.morphism = m
        self.start = s
        self.coding = h
        self.cap = prefix_cap() if cap is None else cap
        self._expand = _Expander(m)
        si = m.alphabet.index(s)
        self._parts = [np.array([si], dtype=np.int64)]
        self._length = 1
        self._buffer = self._parts[0]
        # current block: image of self._src (None: the block is u itself)
        self._src = None
        self._block = m.alphabet.encode(m.image(s)[1:])
        self._total = len(self._block)
        self._done = 0
        self._memo = {}
        self._small_blocks = []
        self._cycle = None
        self._tile = None

    def __len__(self):
        return self._length

    def _append(self, piece):
        self._parts.append(piece)
        self._length += len(piece)

    def _advance(self):
        """Make the image of the current (fully appended) block the new current block."""
        src = self._block
        self._src = src
        self._total = int(self._expand.lengths[src].sum())
        self._done = 0
        self._block = None
        if self._total > self._MEMO_LIMIT:
            # a tiled cycle must consist of remembered blocks only
            self._memo.clear()
            self._small_blocks.clear()
        else:
            self._block = self._expand(src)
            key = self._block.tobytes()
            if key in self._memo:
                self._cycle = self._memo[key]

    def extend_to(self, n: int):
        if n > self.cap:
            raise ResourceLimitError(f"prefix length {n} exceeds cap {self.cap}")
        while self._length < n:
            if self._cycle is not None:
                if self._tile is None:
                    self._tile = (np.concatenate(self._small_blocks[self._cycle:]), 0)
                unit, phase = self._tile
                need = n - self._length
                reps = (phase + need) // len(unit) + 1
                self._append(np.tile(unit, reps)[phase:phase + need])
                self._tile = (unit, (phase + need) % len(unit))
                break
            if self._done == self._total:
                self._advance()
                continue
            need = n - self._length
            take = min(self._total - self._done, need)
            end = self._done + take
            if self._block is None or len(self._block) < end:
                full = end == self._total
                self._block = self._expand(self._src, limit=None if full else end)
            self._append(self._block[self._done:end])
            self._done = end
            if self._done == self._total and self._total <= self._MEMO_LIMIT:
                self._memo[self._block.tobytes()] = len(self._small_blocks)
                self._small_blocks.append(self._block)
        self._buffer = None

    def codes(self, n: int) -> np.ndarray:
        """First ``n`` letters as alphabet indices (coding not applied)."""
        self.extend_to(n)
        if self._buffer is None or len(self._buffer) < n:
            self._buffer = np.concatenate(self._parts)
            self._parts = [self._buffer]
        return self._buffer[:n]

    def coded(self, n: int) -> np.ndarray:
        """First ``n`` letters of the coded sequence, as indices into the coding's target."""
        x = self.codes(n)
        if self.coding is None:
            return x
        return self.coding.class_codes()[x]

    def target_letters(self) -> tuple:
        if self.coding is None:
            return self.morphism.letters
        return self.coding.target.letters

    def prefix(self, n: int) -> tuple:
        letters = self.target_letters()
        return tuple(letters[i] for i in self.coded(n))


def generate_prefix(m: Morphism, s, h: Coding | None = None, n: int = 0, cap: int | None = None) -> tuple:
    return PrefixStream(m, s, h, cap=cap).prefix(n)


# -- occurrences and gaps ---------------------------------------------------


@dataclass(frozen=True)
class GapReport:
    factor: tuple
    positions: tuple
    max_gap: float
    prefix_length: int


def _as_codes(w, u):
    """Encode two words over a shared symbol table."""
    table = {}
    wc = np.fromiter((table.setdefault(x, len(table)) for x in w), dtype=np.int64)
    uc = np.fromiter((table.setdefault(x, len(table)) for x in u), dtype=np.int64)
    return wc, uc


def _occurrences(wc: np.ndarray, uc: np.ndarray) -> np.ndarray:
    L = len(uc)
    if L == 0 or L > len(wc):
        return np.empty(0, dtype=np.int64)
    hit = np.ones(len(wc) - L + 1, dtype=bool)
    for j in range(L):
        hit &= wc[j:len(wc) - L + 1 + j] == uc[j]
    return np.flatnonzero(hit)


def factor_gaps(w, u) -> GapReport:
    """All (possibly overlapping) occurrences of ``u`` in ``w`` and the largest gap between starts."""
    u = tuple(u)
    if not u:
        raise PreconditionError("factor must be non-empty")
    w = tuple(w)
    wc, uc = _as_codes(w, u)
    pos = _occurrences(wc, uc)
    gap = int(np.diff(pos).max()) if len(pos) >= 2 else INF
    return GapReport(u, tuple(int(p) for p in pos), gap, len(w))


def aligned_occurrences(w, u, k: int) -> list:
    if k < 1:
        raise PreconditionError("alignment must be at least 1")
    u = tuple(u)
    if not u:
        raise PreconditionError("factor must be non-empty")
    wc, uc = _as_codes(tuple(w), u)
    pos = _occurrences(wc, uc)
    return [int(p) for p in pos if p % k == 0]


def _factor_codes(x: np.ndarray, L: int, base: int) -> np.ndarray:
    n = len(x) - L + 1
    codes = np.zeros(max(n, 0), dtype=np.int64)
    for j in range(L):
        codes = codes * base + x[j:j + n]
    return codes


def _max_stretch(codes: np.ndarray) -> dict:
    """Per factor code, the longest stretch of start positions without a new occurrence.

    Interior gaps between consecutive starts count, and so does the open
    stretch from the last start to the end of ``codes``; a factor that stops
    occurring therefore keeps growing with the prefix.
    """
    if len(codes) == 0:
        return {}
    order = np.argsort(codes, kind="stable")
    sc = codes[order]
    new_group = np.diff(sc) != 0
    gaps = np.diff(order)
    gaps[new_group] = 0
    starts = np.concatenate([[0], np.flatnonzero(new_group) + 1])
    ends = np.concatenate([starts[1:], [len(sc)]])
    inner = np.maximum.reduceat(np.concatenate([gaps, [0]]), starts)
    trailing = len(codes) - order[ends - 1]
    best = np.maximum(inner, trailing)
    return dict(zip(sc[starts].tolist(), best.tolist()))


def _decode_factor(code: int, L: int, base: int, letters) -> tuple:
    out = []
    for _ in range(L):
        code, r = divmod(code, base)
        out.append(letters[r])
    return tuple(reversed(out))


@dataclass(frozen=True)
class Evidence:
    """Outcome of comparing factor gaps between two prefix lengths.

    ``status`` is ``"CONSISTENT"`` or ``"GREW"``; this is finite-scale
    evidence only, flagged by ``finite_scale``.
    """

    status: str
    grew: tuple
    n_small: int
    n_large: int
    max_factor_len: int
    slack: int
    factors_checked: int
    finite_scale: bool = field(default=True)

    @property
    def consistent(self) -> bool:
        return self.status == "CONSISTENT"

    def grew_factors(self) -> set:
        return {g["factor"] for g in self.grew}

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "finite_scale": self.finite_scale,
            "n_small": self.n_small,
            "n_large": self.n_large,
            "max_factor_len": self.max_factor_len,
            "slack": self.slack,
            "factors_checked": self.factors_checked,
            "grew": [
                {"factor": list(g["factor"]), "small": _num(g["small"]), "large": _num(g["large"])}
                for g in self.grew
            ],
        }


def _num(x):
    return None if x == INF else x


def gap_growth(x: np.ndarray, letters, n_small: int, max_factor_len: int, slack: int = 0) -> Evidence:
    """Compare per-factor max gaps in ``x[:n_small]`` and in all of ``x``."""
    base = max(len(letters), 1)
    if base ** max_factor_len >= 2**62:
        raise ResourceLimitError("factor codes would overflow; lower max_factor_len")
    grew = []
    checked = 0
    for L in range(1, max_factor_len + 1):
        codes = _factor_codes(x, L, base)
        small = _max_stretch(codes[: max(n_small - L + 1, 0)])
        large = _max_stretch(codes)
        checked += len(small)
        for key in sorted(small):
            g_small, g_large = small[key], large[key]
            if g_large > g_small + slack:
                grew.append({
                    "factor": _decode_factor(key, L, base, letters),
                    "small": g_small,
                    "large": g_large,
                })
    status = "GREW" if grew else "CONSISTENT"
    return Evidence(status, tuple(grew), n_small, len(x), max_factor_len, slack, checked)


def ap_evidence(
    m: Morphism,
    s,
    h: Coding | None = None,
    n_small: int = 10**4,
    n_large: int = 10**5,
    max_factor_len: int = 3,
    slack: int = 0,
    cap: int | None = None,
) -> Evidence:
    """Factors of the short prefix whose largest gap grows in the long prefix.

    The gap measure includes the stretch after the last occurrence, so it
    never decreases as the prefix grows and a factor that stops occurring
    shows up as growth.
    """
    if not n_small < n_large:
        raise PreconditionError("n_small must be below n_large")
    stream = PrefixStream(m, s, h, cap=cap)
    x = stream.coded(n_large)
    return gap_growth(x, stream.target_letters(), n_small, max_factor_len, slack)


# -- regulator and products -------------------------------------------------


@dataclass(frozen=True)
class RegulatorEstimate:
    """``values[n-1]`` estimates the regulator at n, or None where undefined."""

    values: tuple
    prefix_length: int

    def __getitem__(self, n: int):
        return self.values[n - 1]


def regulator_estimate(w, n_max: int) -> RegulatorEstimate:
    """Smallest window length containing every length-n factor, for n = 1..n_max.

    Occurrence starts are restricted to 0..|w|-n_max so every n sees the same
    range; only the leading segment and gaps between occurrences count (the
    tail past the last occurrence is a truncation artifact).  A factor seen
    only once makes the estimate undefined.
    """
    w = tuple(w)
    table = {}
    x = np.fromiter((table.setdefault(b, len(table)) for b in w), dtype=np.int64)
    base = max(len(table), 1)
    limit = len(w) - n_max + 1
    values = []
    for n in range(1, n_max + 1):
        if limit <= 0:
            values.append(None)
            continue
        codes = _factor_codes(x, n, base)[:limit]
        order = np.argsort(codes, kind="stable")
        sc = codes[order]
        boundary = np.concatenate([[True], sc[1:] != sc[:-1]])
        firsts = order[boundary]
        counts = np.diff(np.concatenate([np.flatnonzero(boundary), [len(sc)]]))
        if (counts < 2).any():
            values.append(None)
            continue
        gaps = np.diff(order)
        gaps = gaps[~boundary[1:]]
        inner = int(gaps.max()) + n - 1 if len(gaps) else 0
        lead = int(firsts.max()) + n
        values.append(max(inner, lead))
    return RegulatorEstimate(tuple(values), len(w))


def product_with_periodic(w, period: int) -> tuple:
    """Letterwise product of ``w`` with the sequence 0 1 ... period-1 0 1 ..."""
    if period < 1:
        raise PreconditionError("period must be at least 1")
    return tuple((b, i % period) for i, b in enumerate(w))
