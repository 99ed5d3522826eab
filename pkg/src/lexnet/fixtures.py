"""Bundled seed data: the 22-provision catalog and two synthetic judgment sets.

The 18 core provisions carry codes A-R. Judgment citation sets are generated
so that the co-citation graph has exactly this degree sequence::

    A 11, B 3, C 10, D 3, E 7, F 3, G 10, H 3, I 5,
    J 3,  K 3, L 7,  M 3, N 6, O 3, P 3,  Q 3, R 6

The graph is realised with Havel-Hakimi (ties broken by code order), its
edges are covered greedily by cliques, and the cover is padded with
sub-cliques to 48 judgments. Four extra provisions (Q', M', D', H') are cited
only by one further outlier judgment and form their own component.

Regenerate the files under ``lexnet/data`` with ``python -m lexnet.fixtures``.
"""
from __future__ import annotations

import json
from datetime import date, timedelta
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Any

from .corpus import Catalog, catalog_from_json

CODES = "ABCDEFGHIJKLMNOPQR"
DEGREE_SEQUENCE = dict(zip(CODES, [11, 3, 10, 3, 7, 3, 10, 3, 5, 3, 3, 7, 3, 6, 3, 3, 3, 6]))
TARGET_JUDGMENTS = 48

RETRO = (
    "Several Provisions of the Supreme People's Court on the Retroactivity in the "
    "Application of the Civil Code of the People's Republic of China"
)
CIVIL_CODE = "Civil Code of the People's Republic of China"
CONTRACT_LAW = "Contract Law of the People's Republic of China"
GUARANTEE_LAW = "Guarantee Law of the People's Republic of China"
BANK_CARD_SPC = (
    "Provisions of the Supreme People's Court on Several Issues Concerning the Trial "
    "of Cases Regarding Civil Disputes over Bank Cards"
)
BANK_CARD_MEASURES = "Measures for the Administration of Bank Card Business"
CREDIT_CARD_MEASURES = (
    "Measures for the Supervision and Administration of the Credit Card Business of "
    "Commercial Banks"
)
CIVIL_PROCEDURE = "Civil Procedure Law of the People's Republic of China"

ALIASES = {
    RETRO: ["Retroactivity Provisions of the Civil Code"],
    CIVIL_CODE: ["Civil Code", "PRC Civil Code"],
    CONTRACT_LAW: ["Contract Law"],
    GUARANTEE_LAW: ["Guarantee Law"],
    BANK_CARD_SPC: ["Bank Card Dispute Provisions"],
    BANK_CARD_MEASURES: ["Bank Card Measures", "Measures for the Administration of Banke Card Business"],
    CREDIT_CARD_MEASURES: ["Credit Card Supervision Measures"],
    CIVIL_PROCEDURE: ["Civil Procedure Law"],
}

# code -> (law, article, successor article in the Civil Code or None)
CORE = {
    "A": (RETRO, 1, None),
    "B": (CIVIL_CODE, 1032, None),
    "C": (CONTRACT_LAW, 60, 509),
    "D": (CIVIL_CODE, 496, None),
    "E": (CIVIL_CODE, 6, None),
    "F": (CIVIL_CODE, 1034, None),
    "G": (CONTRACT_LAW, 107, 577),
    "H": (CIVIL_CODE, 497, None),
    "I": (CONTRACT_LAW, 8, 465),
    "J": (CIVIL_CODE, 1035, None),
    "K": (GUARANTEE_LAW, 18, 688),
    "L": (BANK_CARD_SPC, 2, None),
    "M": (BANK_CARD_MEASURES, 6, None),
    "N": (CIVIL_PROCEDURE, 147, None),
    "O": (CIVIL_PROCEDURE, 144, None),
    "P": (RETRO, 20, None),
    "Q": (CREDIT_CARD_MEASURES, 39, None),
    "R": (CIVIL_PROCEDURE, 95, None),
}
OUTLIER = {
    "Q'": (CREDIT_CARD_MEASURES, 70, None),
    "M'": (BANK_CARD_MEASURES, 7, None),
    "D'": (CIVIL_CODE, 498, None),
    "H'": (CIVIL_CODE, 1038, None),
}

COURTS = [
    "Beijing Xicheng District People's Court",
    "Beijing Dongcheng District People's Court",
    "Beijing Chaoyang District People's Court",
    "Beijing Haidian District People's Court",
    "Beijing Fengtai District People's Court",
    "Beijing Tongzhou District People's Court",
    "Beijing No.2 Intermediate People's Court",
]
COURT_CODES = ["0102", "0101", "0105", "0108", "0106", "0112", "02"]
BANKS = [
    "China Construction Bank Beijing Branch",
    "Industrial and Commercial Bank of China Beijing Branch",
    "Bank of Communications Beijing Branch",
    "China Merchants Bank Credit Card Center",
    "Bank of Beijing",
    "China Minsheng Bank Credit Card Center",
]
SURNAMES = ["Wang", "Li", "Zhang", "Liu", "Chen", "Yang", "Zhao", "Huang", "Zhou", "Wu", "Xu", "Sun"]
WINDOW = (date(2022, 1, 1), date(2024, 9, 30))


def havel_hakimi(degrees: dict[str, int], order: str = CODES) -> list[tuple[str, str]]:
    """Realise a degree sequence as a simple graph; raises if not graphical.

    Repeatedly connects the node with the largest residual degree to the next
    largest ones, ties broken by position in ``order``.
    """
    rem = dict(degrees)
    pos = {v: i for i, v in enumerate(order)}
    edges = set()
    while True:
        ranked = sorted(rem, key=lambda v: (-rem[v], pos[v]))
        v = ranked[0]
        d = rem[v]
        if d == 0:
            break
        targets = ranked[1 : 1 + d]
        if len(targets) < d or any(rem[u] == 0 for u in targets):
            raise ValueError("degree sequence is not graphical")
        rem[v] = 0
        for u in targets:
            rem[u] -= 1
            edges.add(tuple(sorted((v, u), key=pos.__getitem__)))
    return sorted(edges, key=lambda e: (pos[e[0]], pos[e[1]]))


def clique_cover(edges: list[tuple[str, str]], order: str = CODES) -> list[list[str]]:
    """Greedy cover of ``edges`` by cliques: take the first uncovered edge and
    extend it with every vertex (in ``order``) adjacent to all members."""
    pos = {v: i for i, v in enumerate(order)}
    adj: dict[str, set[str]] = {v: set() for v in order}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    uncovered = set(edges)
    cover = []
    while uncovered:
        u, v = min(uncovered, key=lambda e: (pos[e[0]], pos[e[1]]))
        clique = [u, v]
        for w in order:
            if w not in clique and all(w in adj[x] for x in clique):
                clique.append(w)
        clique.sort(key=pos.__getitem__)
        cover.append(clique)
        uncovered -= {tuple(sorted(p, key=pos.__getitem__)) for p in combinations(clique, 2)}
    return cover


def citation_sets() -> list[list[str]]:
    """Code sets for the 48 in-type judgments."""
    cover = clique_cover(havel_hakimi(DEGREE_SEQUENCE))
    sets = [list(c) for c in cover]
    i = 0
    while len(sets) < TARGET_JUDGMENTS:
        base = cover[i % len(cover)]
        rnd = i // len(cover)
        if rnd % 2 == 1 and len(base) > 2:
            # drop the last member on alternate rounds for variety; still a clique
            base = base[:-1]
        sets.append(list(base))
        i += 1
    return sets


def catalog_rows() -> list[dict[str, Any]]:
    rows = []
    for code, (law, art, succ) in [*CORE.items(), *OUTLIER.items()]:
        row: dict[str, Any] = {
            "law": law,
            "article": art,
            "status": "invalidated" if succ else "in_force",
        }
        if succ:
            row["successor"] = {"law": CIVIL_CODE, "article": succ}
        row["short_code"] = code
        row["patterns"] = ALIASES[law]
        rows.append(row)
    return rows


def _record(i: int, codes: list[str], table: dict) -> dict[str, Any]:
    day = WINDOW[0] + timedelta(days=(i * 101 + 17) % ((WINDOW[1] - WINDOW[0]).days + 1))
    court_i = (i * 3) % len(COURTS)
    procedure = ("summary", "summary", "small_claims", "ordinary", "summary")[i % 5]
    rec: dict[str, Any] = {
        "case_id": f"({day.year}) Jing {COURT_CODES[court_i]} Min Chu No. {1000 + 37 * i}",
        "court": COURTS[court_i],
        "date": day.isoformat(),
        "procedure": procedure,
        "title": f"{BANKS[i % len(BANKS)]} v. {SURNAMES[(i * 5) % len(SURNAMES)]} (credit card dispute)",
    }
    if i % 6 == 5:
        # some records carry judgment prose only; citations come from extraction
        cites = " and ".join(f"{table[c][0]}, Art.{table[c][1]}" for c in codes)
        rec["raw_text"] = (
            "The defendant failed to repay the overdrawn principal and interest. "
            f"Pursuant to {cites}, the judgment is as follows."
        )
    else:
        rec["citations"] = [{"law": table[c][0], "article": table[c][1]} for c in codes]
    return rec


def in_type_records() -> list[dict[str, Any]]:
    return [_record(i, codes, CORE) for i, codes in enumerate(citation_sets())]


def outlier_record() -> dict[str, Any]:
    return {
        "case_id": "(2023) Jing 0113 Min Chu No. 4242",
        "court": "Beijing Shunyi District People's Court",
        "date": "2023-06-12",
        "procedure": "ordinary",
        "title": "Agricultural Bank of China Beijing Shunyi Branch v. Jin (credit card dispute)",
        "citations": [{"law": law, "article": art} for law, art, _ in OUTLIER.values()],
    }


def raw_records() -> list[dict[str, Any]]:
    """48 in-type records plus one repeated record (49 lines, 48 unique case_ids)."""
    recs = in_type_records()
    return recs[:30] + [dict(recs[17])] + recs[30:]


def qmdh_records() -> list[dict[str, Any]]:
    """48 in-type judgments plus the outlier citing only Q', M', D', H'."""
    recs = in_type_records()
    return recs[:25] + [outlier_record()] + recs[25:]


FILES = {
    "catalog.json": lambda: json.dumps(catalog_rows(), ensure_ascii=False, indent=2) + "\n",
    "judgments_raw.jsonl": lambda: _jsonl(raw_records()),
    "judgments_qmdh.jsonl": lambda: _jsonl(qmdh_records()),
}


def _jsonl(recs: list[dict[str, Any]]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in recs)


def data_path(name: str) -> Path:
    return Path(str(resources.files("lexnet") / "data" / name))


def seed_catalog() -> Catalog:
    return catalog_from_json(catalog_rows())


def write_bundle(directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name, render in FILES.items():
        with open(directory / name, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render())


if __name__ == "__main__":
    write_bundle(Path(__file__).parent / "data")
