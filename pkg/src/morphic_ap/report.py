"""Run reports for the ``decide`` command.

A report is a plain dict ready for ``json.dumps(..., sort_keys=True)``.
Timings are only included on request so that the same input always
serializes to the same bytes.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from importlib import resources

from .crosscheck import witness_factor
from .errors import MorphicError
from .growth import classify_letters
from .oracle import ap_evidence
from .runner import decide
from .specfile import MorphismSpecDocument

REPORT_VERSION = 1

EXIT_AP = 0
EXIT_NOT_AP = 1
EXIT_ERROR = 2


@dataclass(frozen=True)
class DecideOptions:
    decider: str = "auto"
    method: str = "auto"
    verify: bool = False
    n_small: int = 10**5
    n_large: int = 10**6
    max_factor_len: int = 3
    slack: int = 0
    timings: bool = False


def _input_echo(doc: MorphismSpecDocument) -> dict:
    return {
        "name": doc.name,
        "expect": doc.expect,
        "alphabet": list(doc.alphabet),
        "start": doc.start,
        "rules": {b: list(doc.rules[b]) for b in doc.alphabet},
        "coding": None if doc.coding is None else dict(doc.coding),
    }


def _error(exc: Exception) -> dict:
    return {"kind": type(exc).__name__, "message": str(exc)}


def run_decide(doc: MorphismSpecDocument, options: DecideOptions | None = None) -> dict:
    """Normalize, decide and optionally verify one document.

    ``report["exit_code"]`` is 0 for AP, 1 for NOT_AP and 2 when the input
    is invalid or outside what the deciders cover.
    """
    options = options or DecideOptions()
    clock = {}
    report = {
        "report_version": REPORT_VERSION,
        "input": _input_echo(doc),
        "normalization": None,
        "decision": None,
        "evidence": None,
        "flags": [],
        "error": None,
    }

    t0 = time.perf_counter()
    try:
        m = doc.morphism()
        h = doc.coding_map()
        routed = decide(m, doc.start, h, options.decider, method=options.method)
    except (MorphicError, ValueError) as exc:
        report["error"] = _error(exc)
        report["exit_code"] = EXIT_ERROR
        return report
    clock["decide_seconds"] = time.perf_counter() - t0

    t = routed.morphism
    classification = None
    if t.is_non_erasing():
        classification = classify_letters(t).to_dict(t.letters)
    report["normalization"] = {
        "steps": list(routed.steps),
        "alphabet": list(t.letters),
        "coded": routed.coding is not None,
        "classification": classification,
    }
    d = routed.decision
    report["decision"] = d.to_dict()
    report["flags"] = list(d.flags)
    report["exit_code"] = EXIT_AP if d.is_ap else EXIT_NOT_AP

    if options.verify:
        t1 = time.perf_counter()
        try:
            ev = ap_evidence(t, doc.start, routed.coding, options.n_small, options.n_large,
                             options.max_factor_len, options.slack)
        except MorphicError as exc:
            report["evidence"] = {"error": _error(exc)}
        else:
            evidence = ev.to_dict()
            factor = witness_factor(d, doc.start)
            if d.is_ap:
                agrees = ev.consistent
            elif factor is not None:
                evidence["witness_factor"] = list(factor)
                agrees = factor in ev.grew_factors()
            else:
                agrees = not ev.consistent
            evidence["agrees_with_decision"] = agrees
            report["evidence"] = evidence
        clock["verify_seconds"] = time.perf_counter() - t1

    if options.timings:
        report["timings"] = {k: round(v, 6) for k, v in clock.items()}
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def load_schema() -> dict:
    text = (resources.files("morphic_ap") / "report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def render_text(report: dict) -> str:
    """Short human-readable summary of a report."""
    lines = []
    name = report["input"]["name"]
    if name:
        lines.append(f"name: {name}")
    if report["error"]:
        lines.append(f"error ({report['error']['kind']}): {report['error']['message']}")
        return "\n".join(lines) + "\n"
    norm = report["normalization"]
    for step in norm["steps"]:
        extra = f" {step['removed']}" if "removed" in step else ""
        lines.append(f"normalized: {step['step']}{extra}")
    c = norm["classification"]
    if c:
        lines.append(f"growing: {' '.join(c['I']) or '-'} | bounded: {' '.join(c['F']) or '-'}")
    d = report["decision"]
    lines.append(f"verdict: {d['verdict']} (decider: {d['decider']})")
    for clause in d["clauses"]:
        lines.append(f"  {clause['clause']}: {'yes' if clause['holds'] else 'no'}")
    if d["witness"]:
        lines.append("witness: " + json.dumps(d["witness"], sort_keys=True))
    for flag in report["flags"]:
        lines.append(f"flag: {flag}")
    ev = report["evidence"]
    if ev:
        if "error" in ev:
            lines.append(f"evidence: unavailable ({ev['error']['message']})")
        else:
            lines.append(
                f"evidence (finite scale, {ev['n_small']} vs {ev['n_large']} letters): "
                f"{ev['status']}, agrees with decision: {ev['agrees_with_decision']}"
            )
    if "timings" in report:
        lines.append("timings: " + json.dumps(report["timings"], sort_keys=True))
    return "\n".join(lines) + "\n"


# exceptions that map to exit code 2 at the command line
INPUT_ERRORS = (MorphicError, ValueError, OSError)
