"""Alphabets, words, morphisms and codings.

Letters are opaque hashable tokens (usually short strings).  A word is a
tuple of letters; any sequence of letters is accepted as input, so a plain
``str`` works whenever every letter is a single character.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import InputDomainError, PreconditionError, ResourceLimitError

Letter = Hashable
Word = tuple

DEFAULT_LENGTH_CAP = 10**8


@dataclass(frozen=True)
class Alphabet:
    letters: tuple
    _index: Mapping = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        letters = tuple(self.letters)
        if not letters:
            raise InputDomainError("alphabet must be non-empty")
        index = {b: i for i, b in enumerate(letters)}
        if len(index) != len(letters):
            raise InputDomainError(f"duplicate letters in alphabet {letters!r}")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __contains__(self, b):
        return b in self._index

    def index(self, b) -> int:
        try:
            return self._index[b]
        except (KeyError, TypeError):
            raise InputDomainError(f"letter {b!r} is not in the alphabet") from None

    def encode(self, w: Iterable) -> np.ndarray:
        return np.fromiter((self.index(b) for b in w), dtype=np.int64)

    def decode(self, codes: Iterable[int]) -> Word:
        letters = self.letters
        return tuple(letters[int(i)] for i in codes)

    def check_word(self, w: Iterable) -> Word:
        w = tuple(w)
        for b in w:
            if b not in self._index:
                raise InputDomainError(f"letter {b!r} is not in the alphabet")
        return w


@dataclass(frozen=True)
class Morphism:
    """A morphism A* -> A*, stored as one image word per letter in alphabet order."""

    alphabet: Alphabet
    images: tuple

    def __post_init__(self):
        images = tuple(self.alphabet.check_word(w) for w in self.images)
        if len(images) != len(self.alphabet):
            raise InputDomainError("a rule is required for every letter")
        object.__setattr__(self, "images", images)

    @classmethod
    def from_rules(cls, rules: Mapping, alphabet: Sequence | None = None) -> "Morphism":
        """Build from ``{letter: image}``; alphabet order defaults to the mapping order."""
        letters = tuple(rules) if alphabet is None else tuple(alphabet)
        alpha = Alphabet(letters)
        missing = [b for b in letters if b not in rules]
        if missing:
            raise InputDomainError(f"no rule for letters {missing!r}")
        extra = [b for b in rules if b not in alpha]
        if extra:
            raise InputDomainError(f"rules for undeclared letters {extra!r}")
        return cls(alpha, tuple(tuple(rules[b]) for b in letters))

    @classmethod
    def identity(cls, alphabet) -> "Morphism":
        alpha = alphabet if isinstance(alphabet, Alphabet) else Alphabet(tuple(alphabet))
        return cls(alpha, tuple((b,) for b in alpha))

    @property
    def letters(self) -> tuple:
        return self.alphabet.letters

    @property
    def n(self) -> int:
        return len(self.alphabet)

    @property
    def k(self) -> int:
        """Maximal image length."""
        return max(len(w) for w in self.images)

    def image(self, b) -> Word:
        return self.images[self.alphabet.index(b)]

    def rules(self) -> dict:
        return dict(zip(self.alphabet.letters, self.images))

    def is_non_erasing(self) -> bool:
        return all(self.images)

    def is_uniform(self) -> bool:
        return len({len(w) for w in self.images}) == 1

    def uniform_length(self) -> int | None:
        lengths = {len(w) for w in self.images}
        return lengths.pop() if len(lengths) == 1 else None

    def image_codes(self) -> list:
        """Images as lists of letter indices."""
        idx = self.alphabet.index
        return [[idx(c) for c in w] for w in self.images]

    def compose(self, other: "Morphism") -> "Morphism":
        """``self ∘ other``: first apply ``other``, then ``self``."""
        if other.alphabet != self.alphabet:
            raise InputDomainError("cannot compose morphisms over different alphabets")
        return Morphism(self.alphabet, tuple(apply(self, w) for w in other.images))

    def restrict(self, letters: Iterable) -> "Morphism":
        """Restriction to a subset closed under the morphism (alphabet order kept)."""
        keep = set(letters)
        sub = Alphabet(tuple(b for b in self.alphabet if b in keep))
        return Morphism(sub, tuple(self.image(b) for b in sub))

    def __str__(self):
        return ", ".join(
            f"{b}->{''.join(map(str, w)) or 'Λ'}" for b, w in zip(self.letters, self.images)
        )


@dataclass(frozen=True)
class Coding:
    """A letter-to-letter map from a source alphabet into target letters."""

    source: Alphabet
    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != len(self.source):
            raise InputDomainError("coding must be total on its source alphabet")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_dict(cls, mapping: Mapping, source) -> "Coding":
        alpha = source if isinstance(source, Alphabet) else Alphabet(tuple(source))
        missing = [b for b in alpha if b not in mapping]
        if missing:
            raise InputDomainError(f"coding undefined on {missing!r}")
        return cls(alpha, tuple(mapping[b] for b in alpha))

    @classmethod
    def identity(cls, source) -> "Coding":
        alpha = source if isinstance(source, Alphabet) else Alphabet(tuple(source))
        return cls(alpha, alpha.letters)

    @property
    def target(self) -> Alphabet:
        return Alphabet(tuple(dict.fromkeys(self.values)))

    def is_identity(self) -> bool:
        return self.values == self.source.letters

    def __call__(self, b):
        return self.values[self.source.index(b)]

    def apply(self, w: Iterable) -> Word:
        return tuple(self(b) for b in w)

    def restrict(self, alphabet: Alphabet) -> "Coding":
        return Coding(alphabet, tuple(self(b) for b in alphabet))

    def class_codes(self) -> np.ndarray:
        """Per source letter, a small integer identifying its image."""
        ids = {}
        return np.array([ids.setdefault(v, len(ids)) for v in self.values], dtype=np.int64)


def apply(m: Morphism, w: Iterable) -> Word:
    out = []
    for b in w:
        out.extend(m.image(b))
    return tuple(out)


def power_apply(m: Morphism, w: Iterable, t: int, cap: int = DEFAULT_LENGTH_CAP) -> Word:
    """Apply ``m`` to ``w`` ``t`` times, refusing to build words longer than ``cap``."""
    if t < 0:
        raise PreconditionError("power must be non-negative")
    w = m.alphabet.check_word(w)
    lengths = dict(zip(m.letters, map(len, m.images)))
    for _ in range(t):
        # length check before materializing
        size = sum(lengths[b] for b in w)
        if size > cap:
            raise ResourceLimitError(f"image length {size} exceeds cap {cap}")
        w = apply(m, w)
    return w


def mortal_letters(m: Morphism) -> frozenset:
    """Letters b with m^t(b) empty for some t (at most n closure rounds)."""
    mortal: set = set()
    while True:
        grown = {b for b, w in zip(m.letters, m.images) if b not in mortal and all(c in mortal for c in w)}
        if not grown:
            return frozenset(mortal)
        mortal |= grown


def is_prolongable(m: Morphism, s) -> bool:
    w = m.image(s)
    if not w or w[0] != s:
        return False
    mortal = mortal_letters(m)
    return any(c not in mortal for c in w[1:])


def matrix_of(m: Morphism) -> np.ndarray:
    """Incidence matrix: entry (i, j) counts letter i in the image of letter j."""
    n = m.n
    mat = np.zeros((n, n), dtype=np.int64)
    for j, w in enumerate(m.images):
        for c in w:
            mat[m.alphabet.index(c), j] += 1
    return mat


def reachable_letters(m: Morphism, s) -> list:
    seen = {s}
    order = [s]
    stack = [s]
    while stack:
        b = stack.pop()
        for c in m.image(b):
            if c not in seen:
                seen.add(c)
                order.append(c)
                stack.append(c)
    return order


def trim_reachable(m: Morphism, s) -> Morphism:
    m.alphabet.index(s)
    return m.restrict(reachable_letters(m, s))


def is_trimmed(m: Morphism, s) -> bool:
    return len(reachable_letters(m, s)) == m.n
