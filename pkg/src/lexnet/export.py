"""Byte-stable graph serialisation: GraphML, Graphviz DOT and CSV edge lists."""
from __future__ import annotations

import csv
import io
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

from .graph import CoCitationGraph

FORMATS = ("graphml", "dot", "csv")
SUFFIX = {"graphml": ".graphml", "dot": ".dot", "csv": ".csv"}


class UnsupportedFormat(ValueError):
    pass


def node_ids(graph: CoCitationGraph) -> dict:
    """Short codes where they are unique, full citations otherwise."""
    labels = [p.label for p in graph.nodes]
    if len(set(labels)) == len(labels):
        return dict(zip(graph.nodes, labels))
    return {p: p.citation for p in graph.nodes}


def to_graphml(graph: CoCitationGraph) -> str:
    ids = node_ids(graph)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="d0" for="node" attr.name="citation" attr.type="string"/>',
        '  <key id="d1" for="node" attr.name="law" attr.type="string"/>',
        '  <key id="d2" for="node" attr.name="article" attr.type="int"/>',
        '  <key id="d3" for="edge" attr.name="weight" attr.type="int"/>',
        '  <key id="d4" for="edge" attr.name="cases" attr.type="string"/>',
        '  <graph id="cocitation" edgedefault="undirected">',
    ]
    for p in graph.nodes:
        out.append(f"    <node id={quoteattr(ids[p])}>")
        out.append(f'      <data key="d0">{escape(p.citation)}</data>')
        out.append(f'      <data key="d1">{escape(p.law_name)}</data>')
        out.append(f'      <data key="d2">{p.article}</data>')
        out.append("    </node>")
    for u, v, w in graph.edges():
        cases = ";".join(sorted(graph.provenance[(u, v)]))
        out.append(f"    <edge source={quoteattr(ids[u])} target={quoteattr(ids[v])}>")
        out.append(f'      <data key="d3">{w}</data>')
        out.append(f'      <data key="d4">{escape(cases)}</data>')
        out.append("    </edge>")
    out += ["  </graph>", "</graphml>"]
    return "\n".join(out) + "\n"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: CoCitationGraph) -> str:
    ids = node_ids(graph)
    out = ["graph cocitation {"]
    for p in graph.nodes:
        out.append(f"  {_dot_quote(ids[p])} [tooltip={_dot_quote(p.citation)}];")
    for u, v, w in graph.edges():
        out.append(f"  {_dot_quote(ids[u])} -- {_dot_quote(ids[v])} [weight={w}, label={_dot_quote(str(w))}];")
    out.append("}")
    return "\n".join(out) + "\n"


def to_edge_csv(graph: CoCitationGraph) -> str:
    ids = node_ids(graph)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["source", "target", "weight", "cases"])
    for u, v, weight in graph.edges():
        w.writerow([ids[u], ids[v], weight, ";".join(sorted(graph.provenance[(u, v)]))])
    return buf.getvalue()


def read_edge_csv(text: str) -> list[tuple[str, str, int, tuple[str, ...]]]:
    """Parse an edge list written by :func:`to_edge_csv`."""
    rows = list(csv.DictReader(io.StringIO(text)))
    return [
        (r["source"], r["target"], int(r["weight"]), tuple(c for c in r["cases"].split(";") if c))
        for r in rows
    ]


_RENDER = {"graphml": to_graphml, "dot": to_dot, "csv": to_edge_csv}


def render_graph(graph: CoCitationGraph, fmt: str) -> str:
    try:
        return _RENDER[fmt](graph)
    except KeyError:
        raise UnsupportedFormat(f"unsupported graph format {fmt!r}; choose from {', '.join(FORMATS)}") from None


def export_graph(graph: CoCitationGraph, fmt: str, path: str | Path) -> Path:
    text = render_graph(graph, fmt)
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path
