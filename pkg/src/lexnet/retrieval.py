"""Similar-case retrieval and type classification over citation sets."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Union

from .corpus import Catalog, Corpus, ProvisionRef, UnknownCaseError
from .graph import CoCitationGraph, ComponentPartition

METRICS = ("jaccard", "cosine")


class EmptyQueryError(ValueError):
    pass


class UnknownProvisionError(ValueError):
    def __init__(self, provisions: Iterable[ProvisionRef]):
        self.provisions = tuple(provisions)
        super().__init__(
            "provisions not in catalog: " + "; ".join(p.citation for p in self.provisions)
        )


@dataclass(frozen=True, eq=False)
class RetrievalIndex:
    vectors: dict[str, frozenset[ProvisionRef]]
    graph: CoCitationGraph
    main_component: frozenset[ProvisionRef]
    catalog: Catalog
    courts: dict[str, str]
    dates: dict[str, date]

    def __len__(self) -> int:
        return len(self.vectors)


def build_index(
    corpus: Corpus, graph: CoCitationGraph, partition: ComponentPartition
) -> RetrievalIndex:
    return RetrievalIndex(
        vectors={j.case_id: j.cited for j in corpus.judgments},
        graph=graph,
        main_component=partition.main_component,
        catalog=corpus.catalog,
        courts={j.case_id: j.court for j in corpus.judgments},
        dates={j.case_id: j.date for j in corpus.judgments},
    )


def jaccard(a: frozenset, b: frozenset) -> float:
    union = len(a | b)
    return len(a & b) / union if union else 0.0


def cosine(a: frozenset, b: frozenset) -> float:
    if not a or not b:
        return 0.0
    return len(a & b) / math.sqrt(len(a) * len(b))


_SCORERS = {"jaccard": jaccard, "cosine": cosine}


@dataclass(frozen=True)
class Ranking:
    entries: tuple[tuple[str, float], ...]
    metric: str

    def __len__(self) -> int:
        return len(self.entries)

    def to_csv(self, index: RetrievalIndex) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["score", "case_id", "court", "date"])
        for cid, score in self.entries:
            w.writerow([f"{score:.4f}", cid, index.courts.get(cid, ""), index.dates[cid].isoformat()])
        return buf.getvalue()

    def to_text(self, index: RetrievalIndex) -> str:
        rows = [("score", "case_id", "court", "date")]
        rows += [
            (f"{s:.4f}", cid, index.courts.get(cid, ""), index.dates[cid].isoformat())
            for cid, s in self.entries
        ]
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        return "".join("  ".join(r[i].ljust(widths[i]) for i in range(4)).rstrip() + "\n" for r in rows)


def similar_cases(
    index: RetrievalIndex,
    query: Union[str, Iterable[ProvisionRef]],
    k: int = 10,
    metric: str = "jaccard",
) -> Ranking:
    """Top-``k`` stored cases by citation-set similarity to ``query``.

    ``query`` is either a stored case_id (that case is left out of the
    results) or a set of provisions. Ties rank by ascending case_id.
    """
    if metric not in _SCORERS:
        raise ValueError(f"metric must be one of {METRICS}, not {metric!r}")
    if k < 0:
        raise ValueError("k must be non-negative")
    score = _SCORERS[metric]
    skip = None
    if isinstance(query, str):
        if query not in index.vectors:
            raise UnknownCaseError(query)
        skip = query
        q = index.vectors[query]
    else:
        q = frozenset(query)
    if not q:
        raise EmptyQueryError("query has no provisions")
    scored = [(cid, score(q, vec)) for cid, vec in index.vectors.items() if cid != skip]
    scored.sort(key=lambda e: (-e[1], e[0]))
    return Ranking(tuple(scored[:k]), metric)


@dataclass(frozen=True)
class InType:
    overlap: float  # share of the query's provisions inside the main component


@dataclass(frozen=True)
class Outlier:
    reason: str
    disjoint: tuple[ProvisionRef, ...]


def classify_case(index: RetrievalIndex, citations: Iterable[ProvisionRef]) -> InType | Outlier:
    cited = frozenset(citations)
    if not cited:
        raise EmptyQueryError("no citations to classify")
    unknown = [p for p in cited if p not in index.catalog]
    if unknown:
        raise UnknownProvisionError(sorted(unknown, key=lambda p: p.key))
    inside = cited & index.main_component
    if inside:
        return InType(len(inside) / len(cited))
    disjoint = tuple(index.catalog.sort(cited))
    return Outlier(
        "no cited provision belongs to the main citation network: "
        + ", ".join(index.catalog.canonical(p).label for p in disjoint),
        disjoint,
    )
