"""Seeded random morphisms and exhaustive small enumerations."""

from __future__ import annotations

import itertools
import random

from .words import Coding, Morphism, is_prolongable


def letters_for(n: int) -> tuple:
    return tuple(str(i) for i in range(n))


def random_nonerasing(rng: random.Random, n: int, max_len: int, min_len: int = 1) -> Morphism:
    """Random non-erasing morphism over 0..n-1, prolongable on 0."""
    letters = letters_for(n)
    images = []
    for i, b in enumerate(letters):
        if i == 0:
            size = rng.randint(max(min_len, 2), max(max_len, 2))
            images.append((b,) + tuple(rng.choice(letters) for _ in range(size - 1)))
        else:
            size = rng.randint(min_len, max_len)
            images.append(tuple(rng.choice(letters) for _ in range(size)))
    return Morphism.from_rules(dict(zip(letters, images)))


def random_uniform(rng: random.Random, n: int, k: int) -> Morphism:
    """Random k-uniform morphism over 0..n-1, prolongable on 0 (k >= 2)."""
    letters = letters_for(n)
    images = []
    for i, b in enumerate(letters):
        w = [rng.choice(letters) for _ in range(k)]
        if i == 0:
            w[0] = b
        images.append(tuple(w))
    return Morphism.from_rules(dict(zip(letters, images)))


def random_coding(rng: random.Random, m: Morphism, targets: int) -> Coding:
    return Coding(m.alphabet, tuple(f"c{rng.randrange(targets)}" for _ in m.letters))


def all_words(alphabet, min_len: int, max_len: int):
    for size in range(min_len, max_len + 1):
        yield from itertools.product(alphabet, repeat=size)


def enumerate_binary(max_len: int, erasing_other: bool = False):
    """Binary morphisms over {0, 1} prolongable on 0 with image lengths in 1..max_len.

    With ``erasing_other`` the image of 1 is the empty word instead.
    """
    others = [()] if erasing_other else list(all_words("01", 1, max_len))
    for w0 in all_words("01", 1, max_len):
        if w0[0] != "0":
            continue
        for w1 in others:
            m = Morphism.from_rules({"0": w0, "1": w1})
            if is_prolongable(m, "0"):
                yield m


def enumerate_uniform(n: int, k: int):
    """Every k-uniform morphism over 0..n-1 paired with each letter it is prolongable on."""
    letters = letters_for(n)
    words = list(itertools.product(letters, repeat=k))
    for images in itertools.product(words, repeat=n):
        m = Morphism.from_rules(dict(zip(letters, images)))
        for s in letters:
            if is_prolongable(m, s):
                yield m, s
