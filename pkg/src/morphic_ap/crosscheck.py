"""Agreement suites: corpus verdicts, decider against decider, decider against the oracle."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .automatic import decide_automatic
from .generators import enumerate_binary, enumerate_uniform, random_nonerasing
from .oracle import ap_evidence
from .pure import Decision, decide_binary, decide_pure_nonerasing
from .runner import decide
from .specfile import parse_spec
from .words import trim_reachable

MAX_FAILURES_KEPT = 5


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    seed: int | None = None
    failures: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.passed + self.failed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, info=None):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < MAX_FAILURES_KEPT:
                self.failures.append(info)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "total": self.total,
            "seed": self.seed,
            "failures": self.failures,
        }


def corpus_files(directory=None) -> list:
    if directory is not None:
        return sorted(Path(directory).glob("*.morph"))
    root = resources.files("morphic_ap") / "corpus"
    return sorted((p for p in root.iterdir() if p.name.endswith(".morph")), key=lambda p: p.name)


def load_corpus(directory=None) -> list:
    """(file name, parsed document) for every ``.morph`` file, sorted by name."""
    return [(p.name, parse_spec(p.read_text(encoding="utf-8"))) for p in corpus_files(directory)]


def witness_factor(d: Decision, s):
    """Factor whose gaps must grow for a NOT_AP pure decision, or None.

    Both witness kinds, a growing letter that never reaches ``s`` and a tail
    cycle with a non-empty label, produce arbitrarily long stretches free
    of the growing letter ``s``; so the one-letter factor ``s`` is the one to
    watch.  Automatic witnesses carry no such factor.
    """
    if d.is_ap or not d.witness:
        return None
    w = d.witness
    if "unreachable" in w or "cycle" in w:
        return (s,)
    return None


def _describe(m, s, h=None) -> dict:
    out = {"rules": {str(b): list(map(str, w)) for b, w in m.rules().items()}, "start": str(s)}
    if h is not None:
        out["coding"] = {str(b): str(h(b)) for b in m.letters}
    return out


def corpus_suite(directory=None) -> SuiteResult:
    res = SuiteResult("corpus")
    for name, doc in load_corpus(directory):
        if doc.expect is None:
            continue
        r = decide(doc.morphism(), doc.start, doc.coding_map())
        got = r.decision.verdict.value
        res.record(got == doc.expect, {"file": name, "expected": doc.expect, "got": got})
    return res


def binary_suite(max_len: int = 3, n_small: int = 10**4, n_large: int = 10**5) -> SuiteResult:
    """decide_binary against the pure decider; erasing other-letter cases against the oracle."""
    res = SuiteResult("binary")
    for m in enumerate_binary(max_len):
        a = decide_binary(m, "0")
        b = decide_pure_nonerasing(trim_reachable(m, "0"), "0")
        res.record(a.verdict == b.verdict, {**_describe(m, "0"), "binary": a.verdict.value, "pure": b.verdict.value})
    for m in enumerate_binary(max_len, erasing_other=True):
        a = decide_binary(m, "0")
        ev = ap_evidence(m, "0", None, n_small, n_large, 2)
        res.record(a.is_ap == ev.consistent, {**_describe(m, "0"), "binary": a.verdict.value, "evidence": ev.status})
    return res


def uniform_suite(n: int = 3, k: int = 2, method: str = "auto") -> SuiteResult:
    """decide_automatic with identity coding against the pure decider on every k-uniform morphism."""
    res = SuiteResult("uniform")
    for m, s in enumerate_uniform(n, k):
        t = trim_reachable(m, s)
        a = decide_automatic(t, None, s, method=method)
        b = decide_pure_nonerasing(t, s)
        res.record(a.verdict == b.verdict, {**_describe(m, s), "automatic": a.verdict.value, "pure": b.verdict.value})
    return res


def oracle_suite(
    count: int = 50,
    seed: int = 0,
    max_letters: int = 4,
    max_len: int = 3,
    n_small: int = 10**5,
    n_large: int = 10**6,
    max_factor_len: int = 3,
    slack: int = 0,
) -> SuiteResult:
    """Random prolongable non-erasing morphisms: verdicts against finite-prefix gap growth.

    AP needs CONSISTENT evidence; NOT_AP needs the witness factor among the
    factors whose gaps grew.  Rare factors can still be filling in their
    gaps at 10**4 letters, so the default scale is 10**5 against 10**6.
    """
    res = SuiteResult("oracle", seed=seed)
    rng = random.Random(seed)
    for i in range(count):
        m = random_nonerasing(rng, rng.randint(1, max_letters), max_len)
        r = decide(m, "0", decider="pure")
        ev = ap_evidence(r.morphism, "0", None, n_small, n_large, max_factor_len, slack)
        if r.decision.is_ap:
            ok = ev.consistent
        else:
            ok = witness_factor(r.decision, "0") in ev.grew_factors()
        res.record(ok, {"index": i, **_describe(m, "0"), "verdict": r.decision.verdict.value,
                        "evidence": ev.status})
    return res


SUITES = ("corpus", "binary", "uniform", "oracle")


def run_crosscheck(
    corpus_dir=None,
    suites=SUITES,
    binary_max_len: int = 3,
    uniform_n: int = 3,
    uniform_k: int = 2,
    oracle_count: int = 50,
    seed: int = 0,
) -> dict:
    results = []
    for name in suites:
        if name == "corpus":
            results.append(corpus_suite(corpus_dir))
        elif name == "binary":
            results.append(binary_suite(binary_max_len))
        elif name == "uniform":
            results.append(uniform_suite(uniform_n, uniform_k))
        elif name == "oracle":
            results.append(oracle_suite(oracle_count, seed))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return {
        "ok": all(r.ok for r in results),
        "suites": [r.to_dict() for r in results],
    }

