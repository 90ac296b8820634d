"""Command line interface: ``morphic-ap <command> ...``.

Exit codes: 0 AP (or success), 1 NOT_AP (or a failed crosscheck),
2 invalid or unsupported input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import oracle
from .crosscheck import SUITES, corpus_files, load_corpus, run_crosscheck
from .graphs import occurrence_graph, occurrence_graph_power
from .growth import classify_letters
from .pure import cycles_all_empty, left_tail_graph, right_tail_graph
from .report import EXIT_ERROR, INPUT_ERRORS, DecideOptions, dumps, render_text, run_decide
from .runner import DECIDERS, normalize
from .specfile import parse_spec


def _read_document(source: str):
    """Parse a spec file; ``-`` reads stdin and a bare corpus name picks the bundled entry."""
    if source == "-":
        return parse_spec(sys.stdin.read())
    path = Path(source)
    if not path.exists():
        for p in corpus_files():
            if p.name in (source, source + ".morph"):
                return parse_spec(p.read_text(encoding="utf-8"))
    return parse_spec(path.read_text(encoding="utf-8"))


def _join(word) -> str:
    word = [str(b) for b in word]
    sep = "" if all(len(b) == 1 for b in word) else " "
    return sep.join(word)


def _emit(obj, as_json: bool, text: str):
    if as_json:
        sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def cmd_decide(args) -> int:
    doc = _read_document(args.file)
    opts = DecideOptions(
        decider=args.decider,
        method=args.method,
        verify=args.verify,
        n_small=args.n_small,
        n_large=args.n_large,
        max_factor_len=args.max_factor_len,
        slack=args.slack,
        timings=args.timings,
    )
    report = run_decide(doc, opts)
    sys.stdout.write(dumps(report) if args.json else render_text(report))
    return report["exit_code"]


def cmd_classify(args) -> int:
    doc = _read_document(args.file)
    t, _, steps = normalize(doc.morphism(), doc.start)
    c = classify_letters(t)
    out = {"steps": steps, "alphabet": list(t.letters), "classification": c.to_dict(t.letters), "tail_graphs": {}}
    lines = [f"alphabet after trimming: {' '.join(t.letters)}"]
    for key, label in (("I", "growing"), ("F", "bounded"), ("E", "single-letter images"), ("D", "stable cycles")):
        lines.append(f"{label}: {' '.join(out['classification'][key])}")
    if c.growing:
        for tg in (left_tail_graph(t, c), right_tail_graph(t, c)):
            ok, witness = cycles_all_empty(tg)
            edges = [{"source": e.source, "target": e.target, "label": list(e.label)} for e in tg.edges.values()]
            out["tail_graphs"][tg.side] = {"edges": edges, "cycles_empty": ok, "witness": witness}
            lines.append(f"{tg.side} tail graph:")
            for e in edges:
                lines.append(f"  {e['source']} -> {e['target']}  [{_join(e['label'])}]")
            lines.append(f"  cycle labels all empty: {'yes' if ok else 'no'}")
    _emit(out, args.json, "\n".join(lines) + "\n")
    return 0


def cmd_generate(args) -> int:
    doc = _read_document(args.file)
    h = None if args.pure else doc.coding_map()
    w = oracle.generate_prefix(doc.morphism(), doc.start, h, args.length, cap=args.cap)
    sys.stdout.write(_join(w) + "\n")
    return 0


def cmd_gaps(args) -> int:
    doc = _read_document(args.file)
    w = oracle.generate_prefix(doc.morphism(), doc.start, doc.coding_map(), args.length, cap=args.cap)
    factor = tuple(args.factor)
    letters = set(w)
    if len(factor) == 1 and factor[0] not in letters and all(b in letters for b in factor[0]):
        factor = tuple(factor[0])
    if args.aligned:
        positions = oracle.aligned_occurrences(w, factor, args.aligned)
        gaps = [b - a for a, b in zip(positions, positions[1:])]
        max_gap = max(gaps) if gaps else None
    else:
        rep = oracle.factor_gaps(w, factor)
        positions, max_gap = list(rep.positions), (None if rep.max_gap == oracle.INF else rep.max_gap)
    if args.csv:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["factor", "max_gap", "prefix_length"])
        writer.writerow([_join(factor), "inf" if max_gap is None else max_gap, len(w)])
        return 0
    out = {"factor": list(factor), "occurrences": len(positions), "max_gap": max_gap, "prefix_length": len(w)}
    if args.positions:
        out["positions"] = positions
    text = (f"factor {_join(factor)}: {len(positions)} occurrences in {len(w)} letters, "
            f"max gap {'inf' if max_gap is None else max_gap}\n")
    _emit(out, args.json, text)
    return 0


def cmd_regulator(args) -> int:
    doc = _read_document(args.file)
    w = oracle.generate_prefix(doc.morphism(), doc.start, doc.coding_map(), args.length, cap=args.cap)
    est = oracle.regulator_estimate(w, args.nmax)
    out = {"prefix_length": est.prefix_length, "values": list(est.values)}
    lines = [f"n={n}: {'undefined' if v is None else v}" for n, v in enumerate(est.values, 1)]
    _emit(out, args.json, "\n".join(lines) + "\n")
    return 0


def cmd_graph(args) -> int:
    doc = _read_document(args.file)
    m = doc.morphism()
    if args.trim:
        m, _, _ = normalize(m, doc.start)
    g = occurrence_graph(m)
    if args.square_times:
        g = occurrence_graph_power(g, args.square_times)
    sys.stdout.write(g.to_dot())
    return 0


def cmd_crosscheck(args) -> int:
    summary = run_crosscheck(
        corpus_dir=args.corpus,
        suites=tuple(args.suite) if args.suite else SUITES,
        binary_max_len=args.binary_max_len,
        uniform_n=args.uniform_n,
        uniform_k=args.uniform_k,
        oracle_count=args.oracle_count,
        seed=args.seed,
    )
    lines = []
    for s in summary["suites"]:
        seed = f" seed={s['seed']}" if s["seed"] is not None else ""
        lines.append(f"{s['name']}: {s['passed']}/{s['total']} passed{seed}")
        for f in s["failures"]:
            lines.append("  failure: " + json.dumps(f, sort_keys=True))
    lines.append("OK" if summary["ok"] else "FAILED")
    _emit(summary, args.json, "\n".join(lines) + "\n")
    return 0 if summary["ok"] else 1


def cmd_corpus(args) -> int:
    if args.action == "show":
        doc_path = next((p for p in corpus_files(args.corpus) if p.name in (args.name, f"{args.name}.morph")), None)
        if doc_path is None:
            raise ValueError(f"no corpus entry named {args.name!r}")
        sys.stdout.write(doc_path.read_text(encoding="utf-8"))
        return 0
    entries = []
    for fname, doc in load_corpus(args.corpus):
        entries.append({
            "file": fname,
            "name": doc.name,
            "expect": doc.expect,
            "letters": len(doc.alphabet),
            "coded": doc.coding is not None,
        })
    text = "".join(
        f"{e['file']:<32} {e['expect'] or '-':<7} {'coded' if e['coded'] else 'pure'}\n" for e in entries
    )
    _emit(entries, args.json, text)
    return 0


def _positive(text) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morphic-ap",
        description="Decide almost periodicity of morphic sequences and measure finite prefixes.",
        epilog=(f"Exit codes: 0 AP/success, 1 NOT_AP/crosscheck failure, 2 input or unsupported error. "
                f"{oracle.PREFIX_CAP_ENV} overrides the default prefix cap of {oracle.DEFAULT_PREFIX_CAP}."),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_file(p):
        p.add_argument("file", help="spec file, '-' for stdin, or a bundled corpus entry name")

    p = sub.add_parser("decide", help="decide almost periodicity")
    with_file(p)
    p.add_argument("--decider", choices=DECIDERS, default="auto")
    p.add_argument("--method", choices=("auto", "pairgraph"), default="auto",
                   help="how the automatic decider computes the start letter's class")
    p.add_argument("--verify", action="store_true", help="attach finite-prefix gap evidence")
    p.add_argument("--n-small", type=_positive, default=10**5)
    p.add_argument("--n-large", type=_positive, default=10**6)
    p.add_argument("--max-factor-len", type=_positive, default=3)
    p.add_argument("--slack", type=int, default=0)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (not deterministic)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("classify", help="growth classification and tail graphs")
    with_file(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("generate", help="print a prefix of the sequence")
    with_file(p)
    p.add_argument("--length", type=_positive, required=True)
    p.add_argument("--pure", action="store_true", help="ignore the coding")
    p.add_argument("--cap", type=_positive, default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("gaps", help="occurrences of a factor and the largest gap")
    with_file(p)
    p.add_argument("--factor", nargs="+", required=True,
                   help="factor letters; a single string of one-character letters is split")
    p.add_argument("--length", type=_positive, default=10**4)
    p.add_argument("--aligned", type=_positive, default=None, help="only starts divisible by this")
    p.add_argument("--positions", action="store_true")
    p.add_argument("--cap", type=_positive, default=None)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gaps)

    p = sub.add_parser("regulator", help="empirical regulator on a prefix")
    with_file(p)
    p.add_argument("--nmax", type=_positive, required=True)
    p.add_argument("--length", type=_positive, default=10**4)
    p.add_argument("--cap", type=_positive, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_regulator)

    p = sub.add_parser("graph", help="occurrence graph in DOT format")
    with_file(p)
    p.add_argument("--square-times", type=int, default=0, help="square the graph this many times")
    p.add_argument("--trim", action="store_true", help="drop letters unreachable from the start")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("crosscheck", help="run the agreement suites")
    p.add_argument("--corpus", default=None, help="directory of .morph files (default: bundled)")
    p.add_argument("--suite", action="append", choices=SUITES)
    p.add_argument("--binary-max-len", type=_positive, default=3)
    p.add_argument("--uniform-n", type=_positive, default=3)
    p.add_argument("--uniform-k", type=_positive, default=2)
    p.add_argument("--oracle-count", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("corpus", help="bundled example morphisms")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?", help="entry to show")
    p.add_argument("--corpus", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"morphic-ap: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
