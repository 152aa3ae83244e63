"""Command-line interface.

Subcommands: ``match`` (alignment between two ontologies), ``merge``
(alignment plus merged ontology and conflict log), ``eval`` (score a
candidate alignment against a reference), and ``partition-stats``
(search-space numbers without matching).

Exit codes: 0 success, 1 usage error, 2 parse/validation/I-O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .alignment import Alignment
from .errors import AxiomAlignError
from .evaluation import evaluate
from .matching import match_ontologies
from .merge import conflict_log_text, merge
from .model import Ontology
from .ofn import parse_alignment, parse_ontology, serialize_alignment, serialize_ontology
from .partition import ComparisonPlan, build_plan, extract_partitions, pair_partitions
from .similarity import MatcherConfig
from .text import Lexicon, default_lexicon, load_lexicon
from .validation import report_text, rejections_tsv, validate

LEXICON_ENV = "AXIOM_ALIGN_LEXICON"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; usage errors are 1 here
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="axiom-align", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def matcher_flags(p):
        p.add_argument("--no-partition", action="store_true", help="exhaustive comparison instead of disjoint partitioning")
        p.add_argument("--threshold", type=float, default=0.80, metavar="T")
        p.add_argument("--weights", default="0.7,0.3", metavar="W_BASE,W_AXM")
        p.add_argument("--boost", type=float, default=0.10, metavar="D")
        p.add_argument("--lexicon", metavar="FILE", help=f"synonym lexicon (default: ${LEXICON_ENV} or the bundled one)")
        p.add_argument("--stats", action="store_true", help="print search-space statistics to stderr")
        p.add_argument("--workers", type=int, default=1, metavar="N", help="scoring threads")
        p.add_argument("--no-validate", action="store_true", help="skip coherence validation of the alignment")
        p.add_argument("--strict-cycles", action="store_true", help="reject cycle-forming correspondences instead of warning")

    p_match = sub.add_parser("match", help="align two ontologies")
    p_match.add_argument("ontology1")
    p_match.add_argument("ontology2")
    p_match.add_argument("-a", "--alignment", metavar="OUT.tsv", help="write the alignment here (default: stdout)")
    matcher_flags(p_match)

    p_merge = sub.add_parser("merge", help="align and merge two ontologies")
    p_merge.add_argument("ontology1")
    p_merge.add_argument("ontology2")
    p_merge.add_argument("-o", "--output", required=True, metavar="OUT.ofn")
    p_merge.add_argument("-a", "--alignment", metavar="OUT.tsv")
    p_merge.add_argument("--rejects", metavar="OUT.tsv", help="write rejected correspondences as TSV")
    matcher_flags(p_merge)

    p_eval = sub.add_parser("eval", help="score a candidate alignment against a reference")
    p_eval.add_argument("-a", "--alignment", required=True, metavar="CAND.tsv")
    p_eval.add_argument("-r", "--reference", required=True, metavar="REF.tsv")

    p_stats = sub.add_parser("partition-stats", help="search-space numbers for a pair of ontologies")
    p_stats.add_argument("ontology1")
    p_stats.add_argument("ontology2")
    p_stats.add_argument("--lexicon", metavar="FILE")

    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise AxiomAlignError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write(path: str, content: str) -> None:
    try:
        Path(path).write_text(content, encoding="utf-8")
    except OSError as exc:
        raise AxiomAlignError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _load_ontology(path: str) -> Ontology:
    ontology, warnings = parse_ontology(_read(path))
    for diag in warnings:
        print(f"{path}:{diag.line}:{diag.column}: warning: {diag.message}", file=sys.stderr)
    return ontology


def _load_lexicon(args) -> Lexicon:
    path = getattr(args, "lexicon", None) or os.environ.get(LEXICON_ENV)
    return load_lexicon(path) if path else default_lexicon()


def _config(args) -> MatcherConfig:
    try:
        w_base_text, w_axm_text = args.weights.split(",")
        w_base, w_axm = float(w_base_text), float(w_axm_text)
    except ValueError:
        raise AxiomAlignError(f"--weights must look like 0.7,0.3 (got {args.weights!r})") from None
    return MatcherConfig(
        w_base=w_base,
        w_axm=w_axm,
        boost=args.boost,
        threshold=args.threshold,
        partitioning=not args.no_partition,
        workers=args.workers,
    )


def _print_stats(plan: ComparisonPlan, o1: Ontology, o2: Ontology, stream) -> None:
    print(f"exhaustive comparisons: {plan.exhaustive_count}", file=stream)
    print(f"planned comparisons:    {plan.planned_count}", file=stream)
    print(f"executed comparisons:   {plan.executed_count}", file=stream)
    print("partition pairings:", file=stream)
    if not plan.paired_partitions:
        print("  (none)", file=stream)
    for p, q in plan.paired_partitions:
        print(f"  {p.root.full} [{len(p.members)}] ~ {q.root.full} [{len(q.members)}]", file=stream)
    print(f"fallback pool: {len(plan.source_pool)} source x {len(plan.target_pool)} target", file=stream)


def _run_match(args) -> int:
    o1 = _load_ontology(args.ontology1)
    o2 = _load_ontology(args.ontology2)
    cfg = _config(args)
    lexicon = _load_lexicon(args)
    alignment, plan = match_ontologies(o1, o2, cfg, lexicon)
    if not args.no_validate:
        report = validate(alignment, o1, o2, strict_cycles=args.strict_cycles)
        alignment = report.accepted
        if report.rejected or report.warnings:
            print(report_text(report), file=sys.stderr, end="")
    if args.stats:
        _print_stats(plan, o1, o2, sys.stderr)
    text = serialize_alignment(alignment)
    if args.alignment:
        _write(args.alignment, text)
    else:
        sys.stdout.write(text)
    return 0


def _run_merge(args) -> int:
    o1 = _load_ontology(args.ontology1)
    o2 = _load_ontology(args.ontology2)
    cfg = _config(args)
    lexicon = _load_lexicon(args)
    alignment, plan = match_ontologies(o1, o2, cfg, lexicon)
    report = validate(alignment, o1, o2, strict_cycles=args.strict_cycles)
    result = merge(o1, o2, report.accepted)

    _write(args.output, serialize_ontology(result.merged))
    if args.alignment:
        _write(args.alignment, serialize_alignment(report.accepted))
    if args.rejects:
        _write(args.rejects, rejections_tsv(report))

    quality = result.quality
    log_lines = [
        "== validation ==",
        report_text(report).rstrip("\n"),
        "== merge conflicts ==",
        conflict_log_text(result.conflict_log).rstrip("\n") or "(none)",
        "== quality ==",
        f"coherent: {str(quality.coherent).lower()}",
        f"unsatisfiable: {', '.join(i.full for i in quality.unsatisfiable) or '-'}",
        f"incompleteness findings: {len(quality.incompleteness_findings)}",
        *[f"  {finding}" for finding in quality.incompleteness_findings],
        f"redundancy findings: {len(quality.redundancy_findings)}",
        *[f"  {finding}" for finding in quality.redundancy_findings],
    ]
    _write(_log_path(args.output), "\n".join(log_lines) + "\n")

    if args.stats:
        _print_stats(plan, o1, o2, sys.stderr)
    return 0


def _log_path(output: str) -> str:
    path = Path(output)
    return str(path.with_suffix(path.suffix + ".log") if path.suffix != ".ofn" else path.with_suffix(".log"))


def _run_eval(args) -> int:
    candidate = parse_alignment(_read(args.alignment))
    reference = parse_alignment(_read(args.reference))
    print(evaluate(candidate, reference).summary())
    return 0


def _run_partition_stats(args) -> int:
    o1 = _load_ontology(args.ontology1)
    o2 = _load_ontology(args.ontology2)
    lexicon = _load_lexicon(args)
    parts1 = extract_partitions(o1)
    parts2 = extract_partitions(o2)
    pairings = pair_partitions(parts1, parts2, o1, o2, lexicon)
    plan = build_plan(o1, o2, pairings)

    for name, parts in (("source", parts1), ("target", parts2)):
        print(f"{name} partitions:")
        for p in parts:
            root = p.root.full if p.root else "(residual)"
            print(f"  {root}: {len(p.members)} classes")
    _print_stats(plan, o1, o2, sys.stdout)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "match": _run_match,
        "merge": _run_merge,
        "eval": _run_eval,
        "partition-stats": _run_partition_stats,
    }
    try:
        return handlers[args.command](args)
    except AxiomAlignError as exc:
        print(f"axiom-align: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"axiom-align: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
