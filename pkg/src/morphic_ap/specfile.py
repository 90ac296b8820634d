"""Line-oriented morphism description files.

::

    # comment
    name: thue-morse
    expect: AP
    alphabet: 0 1
    start: 0
    rule: 0 -> 0 1
    rule: 1 -> 1 0
    code: 0 -> a

Tokens are whitespace separated and may span several characters.  An empty
right-hand side in a ``rule`` line is the empty word.  ``code`` lines are
optional, but when present they must cover the whole alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SpecParseError
from .words import Coding, Morphism

VERDICTS = ("AP", "NOT_AP")


@dataclass(frozen=True)
class MorphismSpecDocument:
    alphabet: tuple
    start: str
    rules: dict
    coding: dict | None = None
    name: str | None = None
    expect: str | None = None

    def morphism(self) -> Morphism:
        return Morphism.from_rules(self.rules, self.alphabet)

    def coding_map(self) -> Coding | None:
        if self.coding is None:
            return None
        return Coding.from_dict(self.coding, self.morphism().alphabet)


def _arrow(rest: str, lineno: int, what: str):
    if "->" not in rest:
        raise SpecParseError(f"{what} line needs '->'", lineno)
    lhs, rhs = rest.split("->", 1)
    lhs = lhs.split()
    if len(lhs) != 1:
        raise SpecParseError(f"{what} line needs exactly one letter before '->'", lineno)
    return lhs[0], tuple(rhs.split())


def parse_spec(text: str) -> MorphismSpecDocument:
    alphabet = None
    start = None
    rules: dict = {}
    coding: dict = {}
    name = expect = None
    rule_lines = {}
    pending = []  # (lineno, kind, letter, values) checked once the alphabet is known

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise SpecParseError(f"expected 'key: value', got {raw.strip()!r}", lineno)
        key, rest = line.split(":", 1)
        key = key.strip()
        if key == "alphabet":
            if alphabet is not None:
                raise SpecParseError("duplicate alphabet declaration", lineno)
            alphabet = tuple(rest.split())
            if not alphabet:
                raise SpecParseError("empty alphabet", lineno)
            if len(set(alphabet)) != len(alphabet):
                raise SpecParseError("duplicate letters in alphabet", lineno)
        elif key == "start":
            if start is not None:
                raise SpecParseError("duplicate start declaration", lineno)
            toks = rest.split()
            if len(toks) != 1:
                raise SpecParseError("start needs exactly one letter", lineno)
            start = toks[0]
            pending.append((lineno, "start", start, ()))
        elif key == "rule":
            b, w = _arrow(rest, lineno, "rule")
            if b in rules:
                raise SpecParseError(f"duplicate rule for {b!r} (first on line {rule_lines[b]})", lineno)
            rules[b] = w
            rule_lines[b] = lineno
            pending.append((lineno, "rule", b, w))
        elif key == "code":
            b, w = _arrow(rest, lineno, "code")
            if len(w) != 1:
                raise SpecParseError("code maps a letter to exactly one letter", lineno)
            if b in coding:
                raise SpecParseError(f"duplicate code for {b!r}", lineno)
            coding[b] = w[0]
            pending.append((lineno, "code", b, ()))
        elif key == "name":
            name = rest.strip()
        elif key == "expect":
            expect = rest.strip()
            if expect not in VERDICTS:
                raise SpecParseError(f"expect must be one of {VERDICTS}", lineno)
        else:
            raise SpecParseError(f"unknown key {key!r}", lineno)

    if alphabet is None:
        raise SpecParseError("missing 'alphabet:' declaration", 1)
    if start is None:
        raise SpecParseError("missing 'start:' declaration", 1)
    letters = set(alphabet)
    for lineno, kind, b, w in pending:
        if b not in letters:
            raise SpecParseError(f"{kind} uses undeclared letter {b!r}", lineno)
        bad = [c for c in w if c not in letters]
        if bad:
            raise SpecParseError(f"rule image uses undeclared letter {bad[0]!r}", lineno)
    missing = [b for b in alphabet if b not in rules]
    if missing:
        raise SpecParseError(f"no rule for letters {missing}", None)
    if coding:
        uncoded = [b for b in alphabet if b not in coding]
        if uncoded:
            raise SpecParseError(f"coding is not total, missing {uncoded}", None)
    return MorphismSpecDocument(
        alphabet=alphabet,
        start=start,
        rules={b: rules[b] for b in alphabet},
        coding={b: coding[b] for b in alphabet} if coding else None,
        name=name,
        expect=expect,
    )


def serialize_spec(doc: MorphismSpecDocument) -> str:
    lines = []
    if doc.name is not None:
        lines.append(f"name: {doc.name}")
    if doc.expect is not None:
        lines.append(f"expect: {doc.expect}")
    lines.append("alphabet: " + " ".join(doc.alphabet))
    lines.append(f"start: {doc.start}")
    for b in doc.alphabet:
        lines.append(f"rule: {b} -> " + " ".join(doc.rules[b]))
    if doc.coding:
        for b in doc.alphabet:
            lines.append(f"code: {b} -> {doc.coding[b]}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def document_from(m: Morphism, s, h: Coding | None = None, name=None, expect=None) -> MorphismSpecDocument:
    return MorphismSpecDocument(
        alphabet=tuple(map(str, m.letters)),
        start=str(s),
        rules={str(b): tuple(map(str, w)) for b, w in zip(m.letters, m.images)},
        coding=None if h is None else {str(b): str(h(b)) for b in m.letters},
        name=name,
        expect=expect,
    )
