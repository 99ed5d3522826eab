"""Node-level and network-level metrics for the co-citation graph, plus
Cronbach's alpha for item-score reliability.

All structural metrics work on the dichotomized graph: an edge is present
or absent, its weight is ignored.
"""
from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum

import numpy as np

from .corpus import ProvisionRef
from .graph import CoCitationGraph

SPARSE_DENSITY = 0.25  # densities up to 0.25 read as sparse


def round_half_away(x: float, places: int = 3) -> Decimal:
    """Round to ``places`` decimals, halves away from zero (table formatting)."""
    q = Decimal(1).scaleb(-places)
    d = Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP)
    return abs(d) if d.is_zero() else d


def fmt(x: float, places: int = 3) -> str:
    return str(round_half_away(x, places))


def size(graph: CoCitationGraph) -> int:
    return len(graph.nodes)


def degree(graph: CoCitationGraph, node: ProvisionRef) -> int:
    """Number of distinct neighbours of ``node``."""
    return len(graph.neighbors(node))


def density(graph: CoCitationGraph) -> float:
    """2L / (g (g - 1)); zero for graphs with fewer than two nodes."""
    g = size(graph)
    if g < 2:
        return 0.0
    return 2 * graph.edge_count / (g * (g - 1))


def betweenness(graph: CoCitationGraph) -> dict[ProvisionRef, float]:
    """Unnormalized Freeman betweenness, Brandes' accumulation.

    For every unordered pair (s, t) of other nodes joined by at least one
    geodesic, a node earns the share of s-t geodesics passing through it.
    Pairs in different components contribute nothing.
    """
    nodes = graph.nodes
    rank = graph.rank
    # fixed neighbour order keeps the float reduction reproducible
    adj = {v: sorted(graph.neighbors(v), key=rank.__getitem__) for v in nodes}
    cb = dict.fromkeys(nodes, 0.0)
    for s in nodes:
        stack = []
        preds: dict[ProvisionRef, list[ProvisionRef]] = {v: [] for v in nodes}
        sigma = dict.fromkeys(nodes, 0)
        sigma[s] = 1
        dist = dict.fromkeys(nodes, -1)
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(nodes, 0.0)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                cb[w] += delta[w]
    # each unordered pair was visited from both ends
    return {v: c / 2.0 for v, c in cb.items()}


class DensityBand(str, Enum):
    SPARSE = "sparse"
    DENSE = "dense"

    @classmethod
    def of(cls, d: float) -> "DensityBand":
        return cls.SPARSE if d <= SPARSE_DENSITY else cls.DENSE


@dataclass(frozen=True)
class NodeMetrics:
    provision: ProvisionRef
    degree: int
    betweenness: float


@dataclass(frozen=True)
class OverallMetrics:
    size: int
    arcs: int  # ordered adjacencies, i.e. the degree sum
    edges: int  # undirected ties
    density: float


@dataclass(frozen=True)
class MetricsReport:
    per_node: tuple[NodeMetrics, ...]
    overall: OverallMetrics
    density_band: DensityBand

    def node(self, p: ProvisionRef) -> NodeMetrics:
        for m in self.per_node:
            if m.provision == p:
                return m
        raise KeyError(p)

    def per_node_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["provision", "code", "degree", "betweenness"])
        for m in self.per_node:
            w.writerow([m.provision.citation, m.provision.short_code or "", m.degree, fmt(m.betweenness)])
        return buf.getvalue()

    def overall_rows(self) -> list[tuple[str, str]]:
        o = self.overall
        return [
            ("Density", fmt(o.density)),
            ("Number of Arcs (degree sum)", str(o.arcs)),
            ("Number of Edges (undirected)", str(o.edges)),
            ("Number of Nodes", str(o.size)),
            ("Density Band", self.density_band.value),
        ]

    def to_text(self) -> str:
        head = ("Legal Provision", "Code", "Degree", "Betweenness")
        body = [
            (m.provision.citation, m.provision.short_code or "", str(m.degree), fmt(m.betweenness))
            for m in self.per_node
        ]
        widths = [max(len(r[i]) for r in [head, *body]) for i in range(4)]

        def line(r: tuple[str, ...]) -> str:
            return "  ".join(
                r[i].ljust(widths[i]) if i < 2 else r[i].rjust(widths[i]) for i in range(4)
            ).rstrip()

        out = [line(head), "  ".join("-" * w for w in widths)]
        out += [line(r) for r in body]
        out.append("")
        label_w = max(len(k) for k, _ in self.overall_rows())
        out += [f"{k.ljust(label_w)}  {v}" for k, v in self.overall_rows()]
        return "\n".join(out) + "\n"


def metrics_table(graph: CoCitationGraph) -> MetricsReport:
    bc = betweenness(graph)
    per_node = tuple(NodeMetrics(p, degree(graph, p), bc[p]) for p in graph.nodes)
    arcs = sum(m.degree for m in per_node)
    d = density(graph)
    overall = OverallMetrics(size(graph), arcs, graph.edge_count, d)
    return MetricsReport(per_node, overall, DensityBand.of(d))


class ReliabilityError(ValueError):
    pass


@dataclass(frozen=True)
class ReliabilityReport:
    k: int
    n: int
    alpha_raw: float
    alpha_standardized: float
    mean_inter_item_r: float
    citc: tuple[float, ...]
    # None where dropping the item would leave fewer than two items
    alpha_if_deleted: tuple[float | None, ...]

    def to_text(self, names: list[str] | None = None) -> str:
        names = names or [f"Item {i + 1}" for i in range(self.k)]
        w = max(len(n) for n in [*names, "Name"])
        rows = [f"{'Name'.ljust(w)}  {'CITC':>6}  {'alpha if deleted':>16}"]
        for name, c, a in zip(names, self.citc, self.alpha_if_deleted):
            rows.append(f"{name.ljust(w)}  {fmt(c):>6}  {('-' if a is None else fmt(a)):>16}")
        rows.append("")
        rows.append(f"Cronbach's alpha: {fmt(self.alpha_raw)}")
        rows.append(f"Standardized Cronbach's alpha: {fmt(self.alpha_standardized)}")
        rows.append(f"Cases: {self.n}  Items: {self.k}")
        return "\n".join(rows) + "\n"


def standardized_alpha(k: int, mean_r: float) -> float:
    return k * mean_r / (1 + (k - 1) * mean_r)


def _raw_alpha(x: np.ndarray) -> float:
    k = x.shape[1]
    total_var = x.sum(axis=1).var(ddof=1)
    if total_var == 0:
        raise ReliabilityError("total score has zero variance")
    return k / (k - 1) * (1 - x.var(axis=0, ddof=1).sum() / total_var)


def cronbach(items) -> ReliabilityReport:
    """Reliability of a cases x items score matrix.

    Sample (n - 1) variances and Pearson correlations throughout. CITC is
    the correlation of each item with the sum of the remaining items.
    """
    x = np.asarray(items, dtype=float)
    if x.ndim != 2:
        raise ReliabilityError("item scores must be a 2-d cases x items matrix")
    n, k = x.shape
    if k < 2:
        raise ReliabilityError(f"need at least 2 items, got {k}")
    if n < 2:
        raise ReliabilityError(f"need at least 2 cases, got {n}")
    flat = [i + 1 for i in range(k) if x[:, i].var(ddof=1) == 0]
    if flat:
        raise ReliabilityError(f"zero variance in item(s) {flat}")

    alpha = _raw_alpha(x)
    r = np.corrcoef(x, rowvar=False)
    mean_r = float(r[np.triu_indices(k, 1)].mean())
    total = x.sum(axis=1)
    citc = []
    for i in range(k):
        rest = total - x[:, i]
        citc.append(float(np.corrcoef(x[:, i], rest)[0, 1]))
    if_deleted: list[float | None] = []
    for i in range(k):
        if k - 1 < 2:
            if_deleted.append(None)
        else:
            if_deleted.append(float(_raw_alpha(np.delete(x, i, axis=1))))
    return ReliabilityReport(
        k=k,
        n=n,
        alpha_raw=float(alpha),
        alpha_standardized=standardized_alpha(k, mean_r),
        mean_inter_item_r=mean_r,
        citc=tuple(citc),
        alpha_if_deleted=tuple(if_deleted),
    )
