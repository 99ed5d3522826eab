"""Project -> components -> outliers -> exclude -> re-project, in one call."""
from __future__ import annotations

from dataclasses import dataclass

from .affiliation import AffiliationMatrix, build_affiliation
from .corpus import Corpus
from .graph import (
    CoCitationGraph,
    ComponentPartition,
    connected_components,
    exclude,
    isolate_outliers,
    project,
)
from .metrics import MetricsReport, metrics_table


@dataclass(frozen=True)
class Analysis:
    corpus: Corpus  # after exclusion
    matrix: AffiliationMatrix
    graph: CoCitationGraph
    partition: ComponentPartition
    report: MetricsReport
    pre_graph: CoCitationGraph
    pre_partition: ComponentPartition
    pre_report: MetricsReport
    outliers: tuple[tuple[str, str], ...]
    excluded: tuple[str, ...]


def analyze(corpus: Corpus, exclusion: str | list[str] = "auto", passes: int = 1) -> Analysis:
    """Run the network pipeline.

    ``exclusion`` is ``"auto"`` (drop judgments flagged by
    :func:`isolate_outliers`, ``passes`` times), ``"off"``, or an explicit
    list of case_ids. One pass is the default; later passes only run if the
    previous one removed something.
    """
    pre_graph = project(build_affiliation(corpus))
    pre_partition = connected_components(pre_graph)
    outliers = tuple(isolate_outliers(pre_graph, corpus, pre_partition))

    if exclusion == "off":
        drop: list[str] = []
    elif exclusion == "auto":
        drop = [cid for cid, _ in outliers]
    else:
        drop = list(exclusion)

    current = exclude(corpus, drop)
    excluded = list(drop)
    if exclusion == "auto":
        for _ in range(passes - 1):
            if not excluded:
                break
            g = project(build_affiliation(current))
            more = [cid for cid, _ in isolate_outliers(g, current)]
            if not more:
                break
            current = exclude(current, more)
            excluded += more

    matrix = build_affiliation(current)
    graph = project(matrix)
    partition = connected_components(graph)
    return Analysis(
        corpus=current,
        matrix=matrix,
        graph=graph,
        partition=partition,
        report=metrics_table(graph),
        pre_graph=pre_graph,
        pre_partition=pre_partition,
        pre_report=metrics_table(pre_graph),
        outliers=outliers,
        excluded=tuple(excluded),
    )
