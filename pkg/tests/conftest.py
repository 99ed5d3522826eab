from __future__ import annotations

import sys
from datetime import date
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lexnet.affiliation import build_affiliation  # noqa: E402
from lexnet.corpus import Catalog, Corpus, Judgment, Procedure, ProvisionRef, load_catalog, read_corpus  # noqa: E402
from lexnet.fixtures import data_path  # noqa: E402
from lexnet.graph import project  # noqa: E402


def provisions(n: int, law: str = "Test Law") -> list[ProvisionRef]:
    return [ProvisionRef(law, i + 1, short_code=f"n{i}") for i in range(n)]


def corpus_of(cited_sets, catalog_size: int | None = None) -> Corpus:
    """Corpus over a synthetic catalog; ``cited_sets`` holds index sets."""
    size = catalog_size if catalog_size is not None else max((max(s) + 1 for s in cited_sets if s), default=0)
    provs = provisions(size)
    catalog = Catalog(tuple(provs), {})
    judgments = [
        Judgment(f"J{j:03d}", "Court", date(2023, 1, 1), Procedure.SUMMARY, frozenset(provs[i] for i in s))
        for j, s in enumerate(cited_sets)
    ]
    return Corpus(tuple(judgments), catalog)


def graph_of(n: int, edges):
    """Graph on n nodes with the given index edges; isolated nodes kept."""
    sets = [{u, v} for u, v in edges]
    touched = {x for e in edges for x in e}
    sets += [{i} for i in range(n) if i not in touched]
    corpus = corpus_of(sets, n)
    return project(build_affiliation(corpus)), provisions(n)


_ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.fixture(scope="session")
def catalog() -> Catalog:
    return load_catalog(data_path("catalog.json"))


@pytest.fixture(scope="session")
def raw_corpus(catalog) -> Corpus:
    return read_corpus(data_path("judgments_raw.jsonl"), catalog)


@pytest.fixture(scope="session")
def qmdh_corpus(catalog) -> Corpus:
    return read_corpus(data_path("judgments_qmdh.jsonl"), catalog)


@pytest.fixture(scope="session")
def codes(catalog) -> dict[str, ProvisionRef]:
    return {p.short_code: p for p in catalog}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _ACCEPTANCE.append((marker.args[0], marker.args[1], "PASS" if rep.passed else "FAIL"))


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(cid, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title, status in sorted(_ACCEPTANCE, key=lambda r: int(r[0][2:])):
        terminalreporter.write_line(f"{cid} {status}: {title}")
