"""Confusion matrices and their basic transforms.

A confusion matrix is a square table of non-negative masses: cell (i, j)
holds the mass of instances the classifier put in class i whose true class
is j (rows = estimated, columns = true). Cells are real-valued so weighted
matrices flow through every measure unchanged; the ``integral`` flag records
whether all cells are whole numbers (raw counts).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import InvalidMatrixError

# Relative tolerance for mass-conservation checks on real-valued matrices.
MASS_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """k-by-k non-negative masses; rows = estimated class, columns = true class."""

    labels: tuple[str, ...]
    cells: np.ndarray
    integral: bool = field(init=False, default=False)

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        if len(labels) < 2:
            raise InvalidMatrixError("a confusion matrix needs at least 2 classes")
        if len(set(labels)) != len(labels):
            raise InvalidMatrixError("class labels must be distinct")
        cells = np.array(self.cells, dtype=float)
        if cells.shape != (len(labels), len(labels)):
            raise InvalidMatrixError(
                f"cells must be {len(labels)}x{len(labels)}, got shape {cells.shape}"
            )
        if not np.all(np.isfinite(cells)):
            raise InvalidMatrixError("cells must be finite")
        if np.any(cells < 0):
            raise InvalidMatrixError("cells must be non-negative")
        if cells.sum() <= 0:
            raise InvalidMatrixError("matrix has zero total mass")
        cells.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "integral", bool(np.all(cells == np.round(cells))))
        object.__setattr__(self, "_total", float(cells.sum()))

    @property
    def k(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> float:
        return self._total

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidMatrixError(f"unknown class label {label!r}") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.cells, other.cells)


@dataclass(frozen=True)
class BinaryCounts:
    """tp/fp/fn/tn masses for one designated class of a confusion matrix."""

    tp: float
    fp: float
    fn: float
    tn: float

    @property
    def total(self) -> float:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """Non-negative cell weights, aligned with a target matrix's label order."""

    labels: tuple[str, ...]
    cells: np.ndarray

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        cells = np.array(self.cells, dtype=float)
        if cells.shape != (len(labels), len(labels)):
            raise InvalidMatrixError(
                f"weights must be {len(labels)}x{len(labels)}, got shape {cells.shape}"
            )
        if not np.all(np.isfinite(cells)):
            raise InvalidMatrixError("weights must be finite")
        if np.any(cells < 0):
            raise InvalidMatrixError("weights must be non-negative")
        if not np.any(cells > 0):
            raise InvalidMatrixError("at least one weight must be positive")
        cells.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "cells", cells)


@dataclass(frozen=True)
class LabeledDataset:
    """Sequence of (true-label, estimated-label) pairs, optionally with an explicit universe."""

    pairs: tuple[tuple[str, str], ...]
    universe: tuple[str, ...] | None = None

    def __post_init__(self):
        pairs = tuple((str(t), str(e)) for t, e in self.pairs)
        if not pairs:
            raise InvalidMatrixError("label dataset is empty")
        universe = self.universe
        if universe is not None:
            universe = tuple(str(label) for label in universe)
            if len(set(universe)) != len(universe):
                raise InvalidMatrixError("label universe entries must be distinct")
            known = set(universe)
            for true_label, est_label in pairs:
                if true_label not in known or est_label not in known:
                    bad = true_label if true_label not in known else est_label
                    raise InvalidMatrixError(
                        f"label {bad!r} does not belong to the declared universe"
                    )
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "universe", universe)


def from_labels(
    data: LabeledDataset | Iterable[tuple[str, str]],
    universe: Iterable[str] | None = None,
) -> ConfusionMatrix:
    """Tally (true, estimated) pairs into a confusion matrix.

    Label order is the declared universe when one is given; otherwise labels
    are taken in first-appearance order, scanning the true labels of all
    pairs first and then the estimated labels.
    """
    if not isinstance(data, LabeledDataset):
        data = LabeledDataset(tuple(data), tuple(universe) if universe is not None else None)
    if data.universe is not None:
        labels = data.universe
    else:
        seen: dict[str, None] = {}
        for true_label, _ in data.pairs:
            seen.setdefault(true_label)
        for _, est_label in data.pairs:
            seen.setdefault(est_label)
        labels = tuple(seen)
    if len(labels) < 2:
        raise InvalidMatrixError("fewer than 2 distinct labels in the universe")
    index = {label: i for i, label in enumerate(labels)}
    cells = np.zeros((len(labels), len(labels)))
    for true_label, est_label in data.pairs:
        cells[index[est_label], index[true_label]] += 1
    return ConfusionMatrix(labels, cells)


def marginals(m: ConfusionMatrix) -> tuple[np.ndarray, np.ndarray, float]:
    """Row sums (per estimated class), column sums (per true class), and total mass."""
    return m.cells.sum(axis=1), m.cells.sum(axis=0), m.n


def binary_counts(m: ConfusionMatrix, class_index: int) -> BinaryCounts:
    """One-vs-rest decomposition for one class.

    tp = the diagonal cell, fp = rest of the row, fn = rest of the column,
    tn = everything else.
    """
    if not 0 <= class_index < m.k:
        raise IndexError(f"class index {class_index} out of range for k={m.k}")
    cells = m.cells
    tp = float(cells[class_index, class_index])
    fp = float(cells[class_index].sum()) - tp
    fn = float(cells[:, class_index].sum()) - tp
    tn = m.n - tp - fp - fn
    return BinaryCounts(tp=tp, fp=fp, fn=fn, tn=tn)


def collapse_one_vs_rest(m: ConfusionMatrix, class_index: int) -> ConfusionMatrix:
    """Merge all classes except the designated one into a single 'rest' class."""
    c = binary_counts(m, class_index)
    target = m.labels[class_index]
    rest = "rest"
    while rest == target:
        rest += "_"
    return ConfusionMatrix((target, rest), np.array([[c.tp, c.fp], [c.fn, c.tn]]))


def apply_weights(m: ConfusionMatrix, w: WeightMatrix) -> ConfusionMatrix:
    """Cell-wise product of matrix and weights; the result is an ordinary matrix."""
    if w.labels != m.labels:
        raise InvalidMatrixError(
            "weight matrix labels must match the target matrix labels in order"
        )
    return ConfusionMatrix(m.labels, m.cells * w.cells)
