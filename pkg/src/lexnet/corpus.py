"""Judgment ingestion: provision catalog, record parsing, citation extraction,
deduplication and corpus summary statistics.

Records arrive as JSON Lines, one judgment per line::

    {"case_id": "...", "court": "...", "date": "2023-05-14",
     "procedure": "summary", "citations": [{"law": "Civil Code", "article": 6}]}

A record may carry ``raw_text`` instead of ``citations``; the text is then
scanned against the catalog patterns.
"""
from __future__ import annotations

import json
import logging
import re
import unicodedata
from dataclasses import dataclass, field, replace
from datetime import date
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping

logger = logging.getLogger(__name__)


class CorpusError(ValueError):
    """A corpus or catalog violates one of its structural invariants."""


class UnknownCaseError(KeyError):
    """A case_id that is not part of the corpus or index."""

    def __str__(self) -> str:
        return f"unknown case_id: {', '.join(map(str, self.args))}"


class Status(str, Enum):
    IN_FORCE = "in_force"
    INVALIDATED = "invalidated"


class Procedure(str, Enum):
    SUMMARY = "summary"
    SMALL_CLAIMS = "small_claims"
    ORDINARY = "ordinary"
    UNKNOWN = "unknown"

    @classmethod
    def parse(cls, value: str | None) -> "Procedure":
        if value is None or value == "":
            return cls.UNKNOWN
        key = re.sub(r"[\s\-]+", "_", str(value).strip().lower())
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown procedure {value!r}") from None


@dataclass(frozen=True)
class ProvisionRef:
    """One article of a named law; identity is ``(law_name, article)`` only."""

    law_name: str
    article: int
    status: Status = field(default=Status.IN_FORCE, compare=False)
    successor: "ProvisionRef | None" = field(default=None, compare=False, repr=False)
    short_code: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.law_name or not self.law_name.strip():
            raise CorpusError("provision law_name must be non-empty")
        if isinstance(self.article, bool) or not isinstance(self.article, int) or self.article < 1:
            raise CorpusError(f"article must be a positive integer, got {self.article!r}")

    @property
    def key(self) -> tuple[str, int]:
        return (self.law_name, self.article)

    @property
    def citation(self) -> str:
        return f"{self.law_name}, Art.{self.article}"

    @property
    def label(self) -> str:
        return self.short_code or self.citation

    def __str__(self) -> str:
        return self.label


def _fold(text: str) -> str:
    """Case-, whitespace- and punctuation-folded form used for name comparison."""
    text = unicodedata.normalize("NFKC", text).casefold()
    return "".join(
        ch for ch in text if not ch.isspace() and not unicodedata.category(ch).startswith("P")
    )


def _alias_regex(alias: str) -> str:
    parts = []
    for tok in re.findall(r"\w+|[^\w\s]", alias):
        if tok in ("'", "’"):
            parts.append("['’]")
        else:
            parts.append(re.escape(tok))
    return r"\s*".join(parts)


_FIRST_ARTICLE = re.compile(r"\s*[,，]?\s*(?:Articles?|Arts?)\.?\s*(\d+)(?!\d)", re.IGNORECASE)
_MORE_ARTICLES = re.compile(
    r"\s*(?:,|，|、|and|&)\s*(?:(?:Articles?|Arts?)\.?\s*)?(\d+)(?!\d)", re.IGNORECASE
)


@dataclass(frozen=True)
class Catalog:
    """Ordered provision universe plus the textual aliases used to find each one."""

    provisions: tuple[ProvisionRef, ...] = ()
    patterns: Mapping[ProvisionRef, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        seen: set[tuple[str, int]] = set()
        for p in self.provisions:
            if p.key in seen:
                raise CorpusError(f"duplicate catalog entry {p.citation}")
            seen.add(p.key)

    def __len__(self) -> int:
        return len(self.provisions)

    def __iter__(self) -> Iterator[ProvisionRef]:
        return iter(self.provisions)

    def __contains__(self, p: object) -> bool:
        return p in self._order

    @cached_property
    def _order(self) -> dict[ProvisionRef, int]:
        return {p: i for i, p in enumerate(self.provisions)}

    def index(self, p: ProvisionRef) -> int:
        return self._order[p]

    def canonical(self, p: ProvisionRef) -> ProvisionRef:
        """The catalog's own instance for ``p`` (carrying status/short code)."""
        return self.provisions[self._order[p]]

    def sort(self, items: Iterable[ProvisionRef]) -> list[ProvisionRef]:
        return sorted(items, key=self._order.__getitem__)

    @cached_property
    def _by_alias(self) -> dict[tuple[str, int], ProvisionRef]:
        table: dict[tuple[str, int], ProvisionRef] = {}
        for p in self.provisions:
            for name in (p.law_name, *self.patterns.get(p, ())):
                table.setdefault((_fold(name), p.article), p)
        return table

    @cached_property
    def _by_code(self) -> dict[str, ProvisionRef]:
        return {p.short_code: p for p in self.provisions if p.short_code}

    def lookup(self, law: str, article: int) -> ProvisionRef | None:
        """Resolve a law name (canonical or alias, punctuation-insensitive) and article."""
        return self._by_alias.get((_fold(law), int(article)))

    def by_code(self, code: str) -> ProvisionRef | None:
        return self._by_code.get(code)

    def extended(self, p: ProvisionRef, patterns: Iterable[str] = ()) -> "Catalog":
        pats = dict(self.patterns)
        pats[p] = tuple(patterns) or (p.law_name,)
        return Catalog(self.provisions + (p,), pats)

    @cached_property
    def _law_matchers(self) -> list[tuple[str, re.Pattern[str]]]:
        aliases: dict[str, str] = {}
        for p in self.provisions:
            for alias in (p.law_name, *self.patterns.get(p, ())):
                aliases.setdefault(alias, p.law_name)
        # longest alias first so a law name nested inside a longer one cannot claim its span
        ordered = sorted(aliases, key=lambda a: (-len(a), a))
        return [
            (aliases[a], re.compile(r"(?<!\w)" + _alias_regex(a), re.IGNORECASE)) for a in ordered
        ]

    def to_json(self) -> list[dict[str, Any]]:
        rows = []
        for p in self.provisions:
            row: dict[str, Any] = {"law": p.law_name, "article": p.article, "status": p.status.value}
            if p.successor is not None:
                row["successor"] = {"law": p.successor.law_name, "article": p.successor.article}
            if p.short_code:
                row["short_code"] = p.short_code
            row["patterns"] = list(self.patterns.get(p, ()))
            rows.append(row)
        return rows


def catalog_from_json(rows: Iterable[Mapping[str, Any]]) -> Catalog:
    provisions = []
    patterns = {}
    for n, row in enumerate(rows):
        try:
            succ = row.get("successor")
            successor = ProvisionRef(succ["law"], int(succ["article"])) if succ else None
            p = ProvisionRef(
                law_name=row["law"],
                article=int(row["article"]),
                status=Status(row.get("status", Status.IN_FORCE.value)),
                successor=successor,
                short_code=row.get("short_code"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorpusError(f"catalog entry {n}: {exc}") from exc
        provisions.append(p)
        patterns[p] = tuple(row.get("patterns", ()))
    return Catalog(tuple(provisions), patterns)


def load_catalog(path: str | Path) -> Catalog:
    with open(path, encoding="utf-8") as fh:
        return catalog_from_json(json.load(fh))


def extract_citations(raw_text: str, catalog: Catalog) -> frozenset[ProvisionRef]:
    """Catalog provisions cited anywhere in ``raw_text``.

    Law names (canonical or alias) are located longest first, and a shorter
    name may not match inside a span already claimed by a longer one; so
    "... Application of the Civil Code ..., Art.1" is never read as a Civil
    Code article. The article number(s) must follow the law name directly
    ("Art.60", "Article 60", "Arts. 60 and 107").
    """
    if not raw_text:
        return frozenset()
    claimed: list[tuple[int, int]] = []
    found: set[ProvisionRef] = set()
    for law, rx in catalog._law_matchers:
        for m in rx.finditer(raw_text):
            s, e = m.span()
            if any(s < ce and cs < e for cs, ce in claimed):
                continue
            art = _FIRST_ARTICLE.match(raw_text, e)
            if art is None:
                claimed.append((s, e))
                continue
            articles = [art.group(1)]
            end = art.end()
            while (more := _MORE_ARTICLES.match(raw_text, end)) is not None:
                articles.append(more.group(1))
                end = more.end()
            claimed.append((s, end))
            for n in articles:
                p = catalog.lookup(law, int(n))
                if p is not None:
                    found.add(p)
    return frozenset(found)


@dataclass(frozen=True)
class Judgment:
    case_id: str
    court: str
    date: date
    procedure: Procedure
    cited: frozenset[ProvisionRef]
    raw_text: str | None = None
    title: str = ""

    def __post_init__(self) -> None:
        if not self.case_id or not self.case_id.strip():
            raise CorpusError("case_id must be non-empty")
        if not isinstance(self.cited, frozenset):
            object.__setattr__(self, "cited", frozenset(self.cited))


@dataclass(frozen=True)
class RecordError:
    index: int  # 1-based record (line) number
    message: str
    case_id: str | None = None

    def __str__(self) -> str:
        where = f"record {self.index}"
        if self.case_id:
            where += f" ({self.case_id})"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class Corpus:
    """An immutable, validated collection of judgments over a catalog."""

    judgments: tuple[Judgment, ...]
    catalog: Catalog
    window: tuple[date, date] | None = None
    rejects: tuple[RecordError, ...] = ()
    duplicates: tuple[Judgment, ...] = ()
    suspected: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "judgments", tuple(self.judgments))
        seen: set[str] = set()
        for j in self.judgments:
            if j.case_id in seen:
                raise CorpusError(f"duplicate case_id {j.case_id!r}")
            seen.add(j.case_id)
            missing = [p for p in j.cited if p not in self.catalog]
            if missing:
                names = ", ".join(sorted(p.citation for p in missing))
                raise CorpusError(f"{j.case_id}: provisions not in catalog: {names}")
            if self.window and not (self.window[0] <= j.date <= self.window[1]):
                raise CorpusError(f"{j.case_id}: date {j.date} outside window")

    def __len__(self) -> int:
        return len(self.judgments)

    def __iter__(self) -> Iterator[Judgment]:
        return iter(self.judgments)

    @property
    def case_ids(self) -> list[str]:
        return [j.case_id for j in self.judgments]

    def get(self, case_id: str) -> Judgment:
        for j in self.judgments:
            if j.case_id == case_id:
                return j
        raise UnknownCaseError(case_id)


@dataclass(frozen=True)
class DedupeResult:
    judgments: tuple[Judgment, ...]
    removed: tuple[Judgment, ...] = ()
    # (kept case_id, other case_id) pairs with matching folded title and date
    suspected: tuple[tuple[str, str], ...] = ()


def dedupe(judgments: Iterable[Judgment]) -> DedupeResult:
    """Keep the first judgment per case_id.

    Judgments with different case_ids but the same folded title and date are
    reported as suspected duplicates and left in place.
    """
    kept: list[Judgment] = []
    removed: list[Judgment] = []
    ids: set[str] = set()
    titles: dict[tuple[str, date], str] = {}
    suspected: list[tuple[str, str]] = []
    for j in judgments:
        if j.case_id in ids:
            removed.append(j)
            continue
        ids.add(j.case_id)
        kept.append(j)
        if j.title:
            key = (_fold(j.title), j.date)
            if key in titles:
                suspected.append((titles[key], j.case_id))
            else:
                titles[key] = j.case_id
    return DedupeResult(tuple(kept), tuple(removed), tuple(suspected))


def _parse_record(
    rec: Mapping[str, Any], catalog: Catalog, unknown: str
) -> tuple[Judgment, Catalog]:
    if not isinstance(rec, Mapping):
        raise ValueError("record is not an object")
    case_id = rec.get("case_id")
    if not isinstance(case_id, str) or not case_id.strip():
        raise ValueError("missing or empty case_id")
    court = rec.get("court")
    if not isinstance(court, str):
        raise ValueError("missing court")
    try:
        when = date.fromisoformat(str(rec["date"]))
    except KeyError:
        raise ValueError("missing date") from None
    procedure = Procedure.parse(rec.get("procedure"))
    raw_text = rec.get("raw_text")
    citations = rec.get("citations")
    if citations is None and raw_text is None:
        raise ValueError("record has neither citations nor raw_text")

    if citations is not None:
        if not isinstance(citations, list):
            raise ValueError("citations must be an array")
        cited = set()
        for c in citations:
            try:
                law, article = c["law"], int(c["article"])
            except (KeyError, TypeError, ValueError):
                raise ValueError(f"bad citation {c!r}") from None
            p = catalog.lookup(law, article)
            if p is None:
                if unknown == "reject":
                    raise ValueError(f"provision not in catalog: {law}, Art.{article}")
                p = ProvisionRef(law, article)
                catalog = catalog.extended(p)
                logger.info("catalog extended with %s", p.citation)
            cited.add(p)
    else:
        if not isinstance(raw_text, str):
            raise ValueError("raw_text must be a string")
        cited = set(extract_citations(raw_text, catalog))

    judgment = Judgment(
        case_id=case_id.strip(),
        court=court,
        date=when,
        procedure=procedure,
        cited=frozenset(cited),
        raw_text=raw_text,
        title=str(rec.get("title") or ""),
    )
    return judgment, catalog


def parse_corpus(
    source: Iterable[str | Mapping[str, Any]],
    catalog: Catalog,
    *,
    window: tuple[date, date] | None = None,
    unknown: str = "reject",
) -> Corpus:
    """Parse a record stream (JSON lines or already-decoded dicts) into a Corpus.

    Malformed records, out-of-window dates and (with ``unknown="reject"``)
    citations outside the catalog are collected in ``Corpus.rejects``;
    parsing continues past them. ``unknown="extend"`` appends unseen
    provisions to the catalog instead. Repeated case_ids are removed by
    :func:`dedupe` and listed in ``Corpus.duplicates``.
    """
    if unknown not in ("reject", "extend"):
        raise ValueError(f"unknown must be 'reject' or 'extend', not {unknown!r}")
    parsed: list[Judgment] = []
    errors: list[RecordError] = []
    for n, item in enumerate(source, start=1):
        rec: Any = item
        if isinstance(item, str):
            if not item.strip():
                continue
            try:
                rec = json.loads(item)
            except json.JSONDecodeError as exc:
                errors.append(RecordError(n, f"invalid JSON: {exc.msg}"))
                continue
        cid = rec.get("case_id") if isinstance(rec, Mapping) else None
        try:
            judgment, catalog = _parse_record(rec, catalog, unknown)
        except (ValueError, CorpusError) as exc:
            errors.append(RecordError(n, str(exc), cid if isinstance(cid, str) else None))
            continue
        if window and not (window[0] <= judgment.date <= window[1]):
            errors.append(RecordError(n, f"date {judgment.date} outside window", judgment.case_id))
            continue
        parsed.append(judgment)
    for err in errors:
        logger.warning("rejected %s", err)
    result = dedupe(parsed)
    return Corpus(
        judgments=result.judgments,
        catalog=catalog,
        window=window,
        rejects=tuple(errors),
        duplicates=result.removed,
        suspected=result.suspected,
    )


def read_corpus(
    path: str | Path,
    catalog: Catalog,
    *,
    window: tuple[date, date] | None = None,
    unknown: str = "reject",
) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh, catalog, window=window, unknown=unknown)


def judgment_record(j: Judgment, catalog: Catalog) -> dict[str, Any]:
    rec: dict[str, Any] = {
        "case_id": j.case_id,
        "court": j.court,
        "date": j.date.isoformat(),
        "procedure": j.procedure.value,
    }
    if j.title:
        rec["title"] = j.title
    rec["citations"] = [{"law": p.law_name, "article": p.article} for p in catalog.sort(j.cited)]
    if j.raw_text is not None:
        rec["raw_text"] = j.raw_text
    return rec


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write the normalized corpus as JSON Lines (citations resolved, catalog order)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for j in corpus.judgments:
            fh.write(json.dumps(judgment_record(j, corpus.catalog), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def write_catalog(catalog: Catalog, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(catalog.to_json(), fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def with_judgments(corpus: Corpus, judgments: Iterable[Judgment]) -> Corpus:
    return replace(corpus, judgments=tuple(judgments))


@dataclass(frozen=True)
class YearStats:
    count: int
    summary_fraction: float


@dataclass(frozen=True)
class CorpusStats:
    total: int
    by_procedure: dict[Procedure, int]
    by_year: dict[int, YearStats]


_SIMPLIFIED = (Procedure.SUMMARY, Procedure.SMALL_CLAIMS)


def corpus_stats(corpus: Corpus | Iterable[Judgment]) -> CorpusStats:
    """Counts by procedure, and per year the share decided under summary or
    small-claims procedure."""
    judgments = list(corpus)
    by_procedure = {p: 0 for p in Procedure}
    years: dict[int, list[int]] = {}
    for j in judgments:
        by_procedure[j.procedure] += 1
        tally = years.setdefault(j.date.year, [0, 0])
        tally[0] += 1
        if j.procedure in _SIMPLIFIED:
            tally[1] += 1
    by_year = {y: YearStats(n, s / n) for y, (n, s) in sorted(years.items())}
    return CorpusStats(len(judgments), by_procedure, by_year)
