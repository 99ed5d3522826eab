"""Two-mode provisions x judgments incidence matrix."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .corpus import Corpus, ProvisionRef


@dataclass(frozen=True, eq=False)
class AffiliationMatrix:
    """Binary matrix ``cells[i, j] == 1`` iff provision ``rows[i]`` is cited by
    judgment ``cols[j]``. Rows follow catalog order, columns corpus order."""

    rows: tuple[ProvisionRef, ...]
    cols: tuple[str, ...]
    cells: np.ndarray

    def __post_init__(self) -> None:
        cells = np.array(self.cells, dtype=np.uint8).reshape(len(self.rows), len(self.cols))
        if cells.size and cells.max() > 1:
            raise ValueError("affiliation cells must be 0 or 1")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffiliationMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.cells, other.cells)
        )

    def column(self, case_id: str) -> list[ProvisionRef]:
        j = self.cols.index(case_id)
        return [p for p, x in zip(self.rows, self.cells[:, j]) if x]

    def empty_rows(self) -> list[ProvisionRef]:
        """Catalog provisions cited by no judgment."""
        sums = self.cells.sum(axis=1)
        return [p for p, s in zip(self.rows, sums) if s == 0]

    def select_columns(self, case_ids: list[str]) -> "AffiliationMatrix":
        idx = [self.cols.index(c) for c in case_ids]
        return AffiliationMatrix(self.rows, tuple(case_ids), self.cells[:, idx])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["provision", *self.cols])
        for p, row in zip(self.rows, self.cells):
            w.writerow([p.citation, *(int(x) for x in row)])
        return buf.getvalue()


def build_affiliation(corpus: Corpus) -> AffiliationMatrix:
    rows = tuple(corpus.catalog.provisions)
    cols = tuple(corpus.case_ids)
    index = {p: i for i, p in enumerate(rows)}
    cells = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    for j, judgment in enumerate(corpus.judgments):
        for p in judgment.cited:
            cells[index[p], j] = 1
    return AffiliationMatrix(rows, cols, cells)


class Frequency(NamedTuple):
    count: int
    fraction: float  # count / number of judgments (0.0 when there are none)


def provision_frequency(matrix: AffiliationMatrix) -> dict[ProvisionRef, Frequency]:
    n = len(matrix.cols)
    sums = matrix.cells.sum(axis=1)
    return {
        p: Frequency(int(s), (int(s) / n) if n else 0.0) for p, s in zip(matrix.rows, sums)
    }
