from __future__ import annotations

import random
from itertools import combinations
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lexnet.affiliation import build_affiliation
from lexnet.corpus import UnknownCaseError
from lexnet.graph import (
    CoCitationGraph,
    connected_components,
    exclude,
    isolate_outliers,
    project,
)
from conftest import corpus_of, graph_of, provisions


def test_single_clique():
    g = project(build_affiliation(corpus_of([{0, 1, 2}])))
    assert g.edge_count == 3
    assert [w for *_, w in g.edges()] == [1, 1, 1]


def test_weight_accumulates():
    g = project(build_affiliation(corpus_of([{0, 1}, {0, 1}])))
    (u, v, w), = g.edges()
    assert w == 2
    assert g.provenance[(u, v)] == {"J000", "J001"}


def test_single_citation_is_isolated_node():
    g = project(build_affiliation(corpus_of([{0}])))
    assert len(g.nodes) == 1 and g.edge_count == 0
    assert g.neighbors(g.nodes[0]) == frozenset()


def test_uncited_provisions_are_not_nodes():
    g = project(build_affiliation(corpus_of([{0, 1}], 5)))
    assert len(g.nodes) == 2


def test_undirected_lookup():
    g = project(build_affiliation(corpus_of([{0, 1}, {0, 1}])))
    a, b = g.nodes
    assert g.weight(a, b) == g.weight(b, a) == 2
    assert g.has_edge(b, a)


def test_rejects_self_loops():
    p = provisions(1)[0]
    with pytest.raises(ValueError):
        CoCitationGraph((p,), {(p, p): frozenset({"x"})})


class TestComponents:
    def test_triangle(self):
        g, _ = graph_of(3, [(0, 1), (1, 2), (0, 2)])
        assert len(connected_components(g)) == 1

    def test_empty(self):
        part = connected_components(CoCitationGraph())
        assert len(part) == 0 and part.main_component == frozenset()

    def test_qmdh_fixture(self, qmdh_corpus, codes):
        g = project(build_affiliation(qmdh_corpus))
        part = connected_components(g)
        assert [len(c) for c in part.components] == [18, 4]
        assert part.main == 0
        assert part.main_component == {codes[c] for c in "ABCDEFGHIJKLMNOPQR"}

    def test_size_then_weight_then_catalog_order(self):
        # two pairs: {0,1} once, {2,3} twice -> heavier pair first
        g = project(build_affiliation(corpus_of([{0, 1}, {2, 3}, {2, 3}])))
        part = connected_components(g)
        p = provisions(4)
        assert part.components == ((p[2], p[3]), (p[0], p[1]))
        # equal size and weight -> lowest catalog position first
        g = project(build_affiliation(corpus_of([{2, 3}, {0, 1}])))
        assert connected_components(g).components[0] == (p[0], p[1])

    @given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)).filter(lambda e: e[0] != e[1]), max_size=20),
           st.randoms(use_true_random=False))
    def test_partition_and_relabel_invariance(self, edges, rnd):
        g, provs = graph_of(10, edges)
        part = connected_components(g)
        flat = [p for c in part.components for p in c]
        assert sorted(flat, key=g.rank.__getitem__) == list(g.nodes)
        # relabel: same structure under a shuffled catalog order; component sizes unchanged
        perm = list(range(10))
        rnd.shuffle(perm)
        g2, _ = graph_of(10, [(perm[u], perm[v]) for u, v in edges])
        sizes = sorted(len(c) for c in connected_components(g2).components)
        assert sizes == sorted(len(c) for c in part.components)
        assert sorted(connected_components(g2).weights) == sorted(part.weights)


class TestOutliers:
    def test_qmdh_case_flagged(self, qmdh_corpus):
        g = project(build_affiliation(qmdh_corpus))
        flagged = isolate_outliers(g, qmdh_corpus)
        assert [cid for cid, _ in flagged] == ["(2023) Jing 0113 Min Chu No. 4242"]
        assert "Q'" in flagged[0][1] and "component 1" in flagged[0][1]

    def test_partial_overlap_kept(self):
        corpus = corpus_of([{0, 1, 2}, {0, 1}, {3, 4}, {2, 5}])
        g = project(build_affiliation(corpus))
        # {2,5} touches the main component through 2
        assert [cid for cid, _ in isolate_outliers(g, corpus)] == ["J002"]

    def test_single_component(self, raw_corpus):
        g = project(build_affiliation(raw_corpus))
        assert isolate_outliers(g, raw_corpus) == []


class TestExclude:
    def test_exclude_one(self, qmdh_corpus):
        assert len(exclude(qmdh_corpus, ["(2023) Jing 0113 Min Chu No. 4242"])) == 48

    def test_exclude_nothing(self, qmdh_corpus):
        assert exclude(qmdh_corpus, []).judgments == qmdh_corpus.judgments

    def test_exclude_all(self, qmdh_corpus):
        empty = exclude(qmdh_corpus, qmdh_corpus.case_ids)
        assert len(empty) == 0
        assert len(project(build_affiliation(empty)).nodes) == 0

    def test_unknown_id(self, qmdh_corpus):
        with pytest.raises(UnknownCaseError, match="nope"):
            exclude(qmdh_corpus, ["nope"])


corpora = st.lists(st.sets(st.integers(0, 11), max_size=7), max_size=30)


@given(corpora)
def test_clique_and_weight_conservation(sets):
    corpus = corpus_of(sets, 12)
    g = project(build_affiliation(corpus))
    for j in corpus:
        for u, v in combinations(j.cited, 2):
            assert g.has_edge(u, v)
            assert j.case_id in g.provenance[g.edge_key(u, v)]
    assert g.total_weight == sum(comb(len(j.cited), 2) for j in corpus)
    assert all(w >= 1 for *_, w in g.edges())


@given(corpora, st.integers(0, 30))
def test_projection_merges_over_column_blocks(sets, cut):
    m = build_affiliation(corpus_of(sets, 12))
    left, right = list(m.cols[:cut]), list(m.cols[cut:])
    merged = project(m.select_columns(left)).merge(project(m.select_columns(right)))
    assert merged == project(m)


def test_random_corpora_clique_property_seeded():
    rnd = random.Random(7)
    for _ in range(200):
        n_prov = rnd.randint(1, 12)
        sets = [set(rnd.sample(range(n_prov), rnd.randint(0, n_prov))) for _ in range(rnd.randint(0, 30))]
        corpus = corpus_of(sets, n_prov)
        g = project(build_affiliation(corpus))
        assert g.total_weight == sum(comb(len(s), 2) for s in sets)
