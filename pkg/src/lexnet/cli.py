"""Command-line front end.

    lexnet ingest  --input judgments.jsonl [--catalog catalog.json] [--out DIR]
    lexnet analyze [--exclude auto|off|ID,ID] [--format csv,text]
    lexnet query   --case ID | --provisions "Civil Code:6,Civil Code:1034" [-k 10] [--metric jaccard]
    lexnet export  [--format graphml,dot,csv]
    lexnet stats
    lexnet reliability --input items.csv

Each stage persists its artifacts in the output directory (``--out``, or the
``LEXNET_OUT`` environment variable, default ``lexnet-out``) so later stages
can run on their own. Exit status: 0 success, 1 usage or I/O error, 2 data
error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from . import export as graph_export
from .corpus import (
    Catalog,
    Corpus,
    CorpusError,
    ProvisionRef,
    UnknownCaseError,
    corpus_stats,
    load_catalog,
    read_corpus,
    write_catalog,
    write_corpus,
)
from .fixtures import data_path
from .metrics import ReliabilityError, cronbach, fmt
from .pipeline import Analysis, analyze
from .retrieval import InType, UnknownProvisionError, build_index, classify_case, similar_cases

log = logging.getLogger("lexnet")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
ENV_OUT = "LEXNET_OUT"
CORPUS_FILE = "corpus.jsonl"
CATALOG_FILE = "catalog.json"
ANALYSIS_FILE = "analysis.json"
TABLE_FORMATS = ("csv", "text")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which is our data-error code
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    input: Path | None
    catalog: Path | None
    out: Path
    window: tuple[date, date] | None = None
    exclusion: str | list[str] = "auto"
    formats: set[str] = field(default_factory=set)


def _window(args: argparse.Namespace) -> tuple[date, date] | None:
    if not (args.date_from or args.date_to):
        return None
    try:
        lo = date.fromisoformat(args.date_from) if args.date_from else date.min
        hi = date.fromisoformat(args.date_to) if args.date_to else date.max
    except ValueError as exc:
        raise UsageError(f"bad date: {exc}") from None
    if lo > hi:
        raise UsageError("--from is after --to")
    return (lo, hi)


def _formats(raw: list[str] | None, allowed: tuple[str, ...], default: tuple[str, ...]) -> set[str]:
    chosen = set()
    for item in raw or []:
        chosen.update(x.strip() for x in item.split(",") if x.strip())
    bad = chosen - set(allowed)
    if bad:
        raise UsageError(f"unsupported format(s): {', '.join(sorted(bad))}; choose from {', '.join(allowed)}")
    return chosen or set(default)


def _exclusion(raw: str) -> str | list[str]:
    if raw in ("auto", "off"):
        return raw
    return [x.strip() for x in raw.split(",") if x.strip()]


def _config(args: argparse.Namespace, *, stage_input: bool) -> RunConfig:
    out = Path(args.out or os.environ.get(ENV_OUT) or "lexnet-out")
    inp = Path(args.input) if getattr(args, "input", None) else None
    if inp is None and stage_input:
        inp = out / CORPUS_FILE
    cat = Path(args.catalog) if getattr(args, "catalog", None) else None
    if cat is None:
        staged = out / CATALOG_FILE
        cat = staged if stage_input and inp == out / CORPUS_FILE and staged.exists() else data_path(CATALOG_FILE)
    for p in (inp, cat):
        if p is not None and not p.is_file():
            raise UsageError(f"no such file: {p}")
    return RunConfig(input=inp, catalog=cat, out=out, window=_window(args))


def _load(cfg: RunConfig, unknown: str = "reject") -> Corpus:
    try:
        catalog = load_catalog(cfg.catalog)
    except (CorpusError, json.JSONDecodeError) as exc:
        raise DataError(f"bad catalog {cfg.catalog}: {exc}") from None
    try:
        return read_corpus(cfg.input, catalog, window=cfg.window, unknown=unknown)
    except OSError as exc:
        raise UsageError(f"cannot read {cfg.input}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise DataError(f"{cfg.input} is not UTF-8 text: {exc}") from None


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_ingest(args: argparse.Namespace) -> int:
    cfg = _config(args, stage_input=False)
    if cfg.input is None:
        raise UsageError("ingest needs --input")
    corpus = _load(cfg, unknown=args.unknown)
    cfg.out.mkdir(parents=True, exist_ok=True)
    write_corpus(corpus, cfg.out / CORPUS_FILE)
    write_catalog(corpus.catalog, cfg.out / CATALOG_FILE)

    lines = [
        f"{len(corpus)} kept, {len(corpus.duplicates)} duplicate{'s' if len(corpus.duplicates) != 1 else ''} removed, "
        f"{len(corpus.rejects)} rejected"
    ]
    for j in corpus.duplicates:
        lines.append(f"duplicate: {j.case_id}")
    for a, b in corpus.suspected:
        lines.append(f"suspected duplicate (same title and date, kept): {a} ~ {b}")
    for err in corpus.rejects:
        lines.append(f"rejected: {err}")
    report = "\n".join(lines) + "\n"
    _write(cfg.out / "ingest_report.txt", report)
    sys.stdout.write(report)
    if corpus.rejects:
        print(f"warning: {len(corpus.rejects)} record(s) rejected", file=sys.stderr)
    return EXIT_OK


def _analysis_for(args: argparse.Namespace, cfg: RunConfig) -> Analysis:
    corpus = _load(cfg)
    if len(corpus) == 0:
        raise DataError("nothing to analyze")
    try:
        return analyze(corpus, cfg.exclusion, passes=args.passes)
    except UnknownCaseError as exc:
        raise DataError(str(exc)) from None


def _components_text(a: Analysis) -> str:
    lines = []
    for title, part in (("before exclusion", a.pre_partition), ("after exclusion", a.partition)):
        lines.append(f"components {title}: {len(part)}")
        for i, (comp, w) in enumerate(zip(part.components, part.weights)):
            tag = " (main)" if i == part.main else ""
            lines.append(f"  [{i}]{tag} {len(comp)} nodes, weight {w}: {', '.join(p.label for p in comp)}")
    return "\n".join(lines) + "\n"


def _overall_csv(a: Analysis) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["stage", "judgments", "nodes", "arcs", "edges", "density", "band", "components"])
    for stage, rep, part, n in (
        ("pre", a.pre_report, a.pre_partition, len(a.corpus) + len(a.excluded)),
        ("post", a.report, a.partition, len(a.corpus)),
    ):
        o = rep.overall
        w.writerow([stage, n, o.size, o.arcs, o.edges, fmt(o.density), rep.density_band.value, len(part)])
    return buf.getvalue()


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _config(args, stage_input=True)
    cfg.exclusion = _exclusion(args.exclude)
    cfg.formats = _formats(args.format, TABLE_FORMATS, TABLE_FORMATS)
    a = _analysis_for(args, cfg)
    out = cfg.out
    if "csv" in cfg.formats:
        _write(out / "metrics.csv", a.report.per_node_csv())
        _write(out / "metrics_pre.csv", a.pre_report.per_node_csv())
        _write(out / "overall.csv", _overall_csv(a))
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["case_id", "reason", "excluded"])
        for cid, reason in a.outliers:
            w.writerow([cid, reason, int(cid in a.excluded)])
        _write(out / "outliers.csv", buf.getvalue())
        _write(out / "affiliation.csv", a.matrix.to_csv())
    if "text" in cfg.formats:
        _write(out / "metrics.txt", a.report.to_text())
        _write(out / "metrics_pre.txt", a.pre_report.to_text())
    _write(out / "components.txt", _components_text(a))
    summary = {
        "excluded": list(a.excluded),
        "outliers": [{"case_id": c, "reason": r} for c, r in a.outliers],
        "pre": {"nodes": a.pre_report.overall.size, "components": len(a.pre_partition)},
        "post": {
            "judgments": len(a.corpus),
            "nodes": a.report.overall.size,
            "arcs": a.report.overall.arcs,
            "edges": a.report.overall.edges,
            "density": float(fmt(a.report.overall.density)),
            "components": len(a.partition),
        },
    }
    _write(out / ANALYSIS_FILE, json.dumps(summary, indent=2, ensure_ascii=False, sort_keys=True) + "\n")

    sys.stdout.write(_components_text(a))
    for cid, reason in a.outliers:
        print(f"outlier: {cid}: {reason}")
    print()
    sys.stdout.write(a.report.to_text())
    return EXIT_OK


def _excluded_ids(cfg: RunConfig, corpus: Corpus) -> list[str]:
    path = cfg.out / ANALYSIS_FILE
    if not path.is_file():
        return []
    with open(path, encoding="utf-8") as fh:
        ids = json.load(fh).get("excluded", [])
    known = set(corpus.case_ids)
    return [c for c in ids if c in known]


def _resolve(spec: str, catalog: Catalog) -> ProvisionRef:
    spec = spec.strip()
    if ":" not in spec:
        p = catalog.by_code(spec)
        if p is None:
            raise DataError(f"unknown provision code {spec!r}")
        return p
    law, _, art = spec.rpartition(":")
    try:
        n = int(art)
        if n < 1:
            raise ValueError
    except ValueError:
        raise UsageError(f"bad article number in {spec!r}") from None
    return catalog.lookup(law, n) or ProvisionRef(law.strip(), n)


def cmd_query(args: argparse.Namespace) -> int:
    cfg = _config(args, stage_input=True)
    exclusion = _exclusion(args.exclude) if args.exclude else None
    corpus = _load(cfg)
    if exclusion is None:
        drop = _excluded_ids(cfg, corpus)
        a = analyze(corpus, drop)
    else:
        try:
            a = analyze(corpus, exclusion, passes=args.passes)
        except UnknownCaseError as exc:
            raise DataError(str(exc)) from None
    index = build_index(a.corpus, a.graph, a.partition)
    fmt_ = _formats([args.format] if args.format else None, TABLE_FORMATS, ("text",))
    as_csv = "csv" in fmt_

    if args.case:
        if args.case not in index.vectors:
            raise DataError(f"unknown case_id: {args.case}")
        ranking = similar_cases(index, args.case, k=args.k, metric=args.metric)
    else:
        provisions = [_resolve(s, corpus.catalog) for s in args.provisions.split(",") if s.strip()]
        if not provisions:
            raise UsageError("--provisions is empty")
        try:
            verdict = classify_case(index, provisions)
        except UnknownProvisionError as exc:
            raise DataError(str(exc)) from None
        if isinstance(verdict, InType):
            print(f"verdict: in_type (overlap {verdict.overlap:.4f})")
        else:
            print(f"verdict: outlier ({verdict.reason})")
        ranking = similar_cases(index, provisions, k=args.k, metric=args.metric)
    sys.stdout.write(ranking.to_csv(index) if as_csv else ranking.to_text(index))
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    cfg = _config(args, stage_input=True)
    cfg.exclusion = _exclusion(args.exclude)
    cfg.formats = _formats(args.format, graph_export.FORMATS, graph_export.FORMATS)
    a = _analysis_for(args, cfg)
    graph = a.pre_graph if args.stage == "pre" else a.graph
    cfg.out.mkdir(parents=True, exist_ok=True)
    for f in sorted(cfg.formats):
        path = graph_export.export_graph(graph, f, cfg.out / f"graph{graph_export.SUFFIX[f]}")
        print(path)
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    cfg = _config(args, stage_input=True)
    stats = corpus_stats(_load(cfg))
    print(f"total: {stats.total}")
    for proc, n in stats.by_procedure.items():
        print(f"  {proc.value}: {n}")
    print("year  cases  summary_fraction")
    for year, ys in stats.by_year.items():
        print(f"{year}  {ys.count:5d}  {fmt(ys.summary_fraction)}")
    return EXIT_OK


def cmd_reliability(args: argparse.Namespace) -> int:
    path = Path(args.input)
    if not path.is_file():
        raise UsageError(f"no such file: {path}")
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise DataError("empty item file")
    names, body = rows[0], rows[1:]
    try:
        scores = [[float(x) for x in r] for r in body if r]
        report = cronbach(scores)
    except (ValueError, ReliabilityError) as exc:
        raise DataError(str(exc)) from None
    sys.stdout.write(report.to_text(names))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lexnet", description="Statute co-citation network analysis.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, *, needs_input: bool = False) -> None:
        p.add_argument(
            "--input",
            required=needs_input,
            help="judgments JSONL" if needs_input else "judgments JSONL (default: staged corpus in --out)",
        )
        p.add_argument("--catalog", help="provision catalog JSON (default: bundled catalog)")
        p.add_argument("--out", help=f"output directory (default: ${ENV_OUT} or ./lexnet-out)")
        p.add_argument("--from", dest="date_from", help="earliest judgment date, ISO-8601")
        p.add_argument("--to", dest="date_to", help="latest judgment date, ISO-8601")

    def exclusion(p: argparse.ArgumentParser, default: str | None = "auto") -> None:
        p.add_argument("--exclude", default=default, help="auto, off, or comma-separated case_ids")
        p.add_argument("--passes", type=int, default=1, help="auto-exclusion passes (default 1)")

    p = sub.add_parser("ingest", help="parse, normalize and deduplicate judgments")
    common(p, needs_input=True)
    p.add_argument("--unknown", choices=("reject", "extend"), default="reject",
                   help="what to do with citations missing from the catalog")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="network metrics, components and outliers")
    common(p)
    exclusion(p)
    p.add_argument("--format", action="append", help="csv and/or text (default both)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("query", help="similar cases / type classification")
    common(p)
    exclusion(p, default=None)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--case", help="stored case_id to find neighbours of")
    g.add_argument("--provisions", help='comma-separated "Law:Article" pairs or short codes')
    p.add_argument("-k", type=int, default=10, help="number of results (default 10)")
    p.add_argument("--metric", choices=("jaccard", "cosine"), default="jaccard")
    p.add_argument("--format", choices=TABLE_FORMATS, help="text (default) or csv")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("export", help="write the co-citation graph")
    common(p)
    exclusion(p)
    p.add_argument("--format", action="append", help="graphml, dot and/or csv (default all)")
    p.add_argument("--stage", choices=("pre", "post"), default="post", help="graph before or after exclusion")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("stats", help="corpus counts by procedure and year")
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("reliability", help="Cronbach's alpha over a cases x items CSV")
    p.add_argument("--input", required=True, help="CSV with a header row and one numeric column per item")
    p.set_defaults(func=cmd_reliability)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.ERROR,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if getattr(args, "k", 1) < 0:
        print("lexnet: error: -k must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "passes", 1) < 1:
        print("lexnet: error: --passes must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lexnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"lexnet: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
