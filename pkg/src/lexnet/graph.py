"""Co-citation projection, connected components and outlier exclusion."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Iterable, Iterator

from .affiliation import AffiliationMatrix
from .corpus import Corpus, ProvisionRef, UnknownCaseError

Edge = tuple[ProvisionRef, ProvisionRef]


@dataclass(frozen=True, eq=False)
class CoCitationGraph:
    """Undirected co-citation graph over provisions.

    Two provisions are joined when at least one judgment cites both; the
    edge weight is the number of such judgments and ``provenance`` keeps
    their case_ids. Edge keys are ordered by ``rank`` (catalog position).
    """

    nodes: tuple[ProvisionRef, ...] = ()
    provenance: dict[Edge, frozenset[str]] = field(default_factory=dict)
    rank: dict[ProvisionRef, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.rank:
            object.__setattr__(self, "rank", {p: i for i, p in enumerate(self.nodes)})
        nodes = tuple(sorted(self.nodes, key=self.rank.__getitem__))
        object.__setattr__(self, "nodes", nodes)
        members = set(nodes)
        adj: dict[ProvisionRef, set[ProvisionRef]] = {p: set() for p in nodes}
        for (u, v), cases in self.provenance.items():
            if u == v:
                raise ValueError(f"self-loop on {u}")
            if u not in members or v not in members:
                raise ValueError(f"edge {u}-{v} has an endpoint outside the node set")
            if self.rank[u] > self.rank[v]:
                raise ValueError(f"edge {u}-{v} is not in canonical order")
            if not cases:
                raise ValueError(f"edge {u}-{v} has no supporting judgment")
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", {p: frozenset(s) for p, s in adj.items()})

    def __contains__(self, p: object) -> bool:
        return p in self._adj  # type: ignore[attr-defined]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoCitationGraph):
            return NotImplemented
        return set(self.nodes) == set(other.nodes) and self.provenance == other.provenance

    def edge_key(self, u: ProvisionRef, v: ProvisionRef) -> Edge:
        return (u, v) if self.rank[u] <= self.rank[v] else (v, u)

    def neighbors(self, p: ProvisionRef) -> frozenset[ProvisionRef]:
        try:
            return self._adj[p]  # type: ignore[attr-defined]
        except KeyError:
            raise KeyError(f"{p} is not a node of the graph") from None

    def has_edge(self, u: ProvisionRef, v: ProvisionRef) -> bool:
        return u in self and v in self.neighbors(u)

    def weight(self, u: ProvisionRef, v: ProvisionRef) -> int:
        if u not in self or v not in self:
            return 0
        return len(self.provenance.get(self.edge_key(u, v), ()))

    def edges(self) -> Iterator[tuple[ProvisionRef, ProvisionRef, int]]:
        """Edges in deterministic (rank, rank) order with their weights."""
        for (u, v) in sorted(self.provenance, key=lambda e: (self.rank[e[0]], self.rank[e[1]])):
            yield u, v, len(self.provenance[(u, v)])

    @property
    def edge_count(self) -> int:
        return len(self.provenance)

    @property
    def total_weight(self) -> int:
        return sum(len(c) for c in self.provenance.values())

    def merge(self, other: "CoCitationGraph") -> "CoCitationGraph":
        """Union of two projections (e.g. over disjoint column blocks)."""
        rank = dict(self.rank)
        for p, r in other.rank.items():
            rank.setdefault(p, r)
        prov = dict(self.provenance)
        for e, cases in other.provenance.items():
            u, v = e if rank[e[0]] <= rank[e[1]] else (e[1], e[0])
            prov[(u, v)] = prov.get((u, v), frozenset()) | cases
        nodes = tuple(dict.fromkeys(self.nodes + other.nodes))
        return CoCitationGraph(nodes, prov, rank)

    def subgraph(self, keep: Iterable[ProvisionRef]) -> "CoCitationGraph":
        keep = set(keep)
        prov = {e: c for e, c in self.provenance.items() if e[0] in keep and e[1] in keep}
        return CoCitationGraph(tuple(p for p in self.nodes if p in keep), prov, self.rank)


def project(matrix: AffiliationMatrix) -> CoCitationGraph:
    """One-mode projection: each judgment's citation set becomes a clique."""
    rank = {p: i for i, p in enumerate(matrix.rows)}
    provenance: dict[Edge, set[str]] = {}
    cited_any: set[ProvisionRef] = set()
    for j, case_id in enumerate(matrix.cols):
        cited = [p for p, x in zip(matrix.rows, matrix.cells[:, j]) if x]
        cited_any.update(cited)
        for u, v in combinations(cited, 2):
            provenance.setdefault((u, v), set()).add(case_id)
    nodes = tuple(p for p in matrix.rows if p in cited_any)
    return CoCitationGraph(
        nodes, {e: frozenset(c) for e, c in provenance.items()}, rank
    )


@dataclass(frozen=True)
class ComponentPartition:
    """Connected components, largest first (by node count, then total edge weight).

    Ties fall back to the catalog rank of each component's first member, so
    ``main`` is always 0.
    """

    components: tuple[tuple[ProvisionRef, ...], ...]
    weights: tuple[int, ...] = ()
    main: int = 0

    def __len__(self) -> int:
        return len(self.components)

    @property
    def main_component(self) -> frozenset[ProvisionRef]:
        return frozenset(self.components[self.main]) if self.components else frozenset()

    def component_of(self, p: ProvisionRef) -> int:
        for i, comp in enumerate(self.components):
            if p in comp:
                return i
        raise KeyError(p)


def connected_components(graph: CoCitationGraph) -> ComponentPartition:
    seen: set[ProvisionRef] = set()
    found: list[tuple[tuple[ProvisionRef, ...], int]] = []
    for start in graph.nodes:
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in graph.neighbors(u):
                if v not in seen:
                    seen.add(v)
                    comp.append(v)
                    queue.append(v)
        comp.sort(key=graph.rank.__getitem__)
        members = set(comp)
        weight = sum(
            len(c) for (u, _), c in graph.provenance.items() if u in members
        )
        found.append((tuple(comp), weight))
    found.sort(key=lambda cw: (-len(cw[0]), -cw[1], graph.rank[cw[0][0]]))
    return ComponentPartition(tuple(c for c, _ in found), tuple(w for _, w in found), 0)


def isolate_outliers(
    graph: CoCitationGraph,
    corpus: Corpus,
    partition: ComponentPartition | None = None,
) -> list[tuple[str, str]]:
    """Judgments whose cited provisions all lie outside the main component.

    A judgment with any main-component citation is kept. Judgments that
    cite nothing are not flagged; they add no node or edge to the graph.
    """
    if partition is None:
        partition = connected_components(graph)
    if not partition.components:
        return []
    main = partition.main_component
    flagged = []
    for j in corpus.judgments:
        if not j.cited or j.cited & main:
            continue
        comps = sorted({partition.component_of(p) for p in j.cited})
        parts = "; ".join(
            "component {} ({})".format(i, ", ".join(p.label for p in partition.components[i]))
            for i in comps
        )
        flagged.append((j.case_id, f"all citations outside main component: {parts}"))
    return flagged


def exclude(corpus: Corpus, case_ids: Iterable[str]) -> Corpus:
    """A new Corpus without the given judgments. Unknown case_ids raise."""
    drop = list(case_ids)
    known = set(corpus.case_ids)
    missing = [c for c in drop if c not in known]
    if missing:
        raise UnknownCaseError(*missing)
    drop_set = set(drop)
    return replace(corpus, judgments=tuple(j for j in corpus.judgments if j.case_id not in drop_set))
