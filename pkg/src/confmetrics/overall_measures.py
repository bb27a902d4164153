"""Whole-matrix measures: success rate, averaged class success, chance-corrected
agreement, and the representative association measures.

Association measures quantify how predictable one class variable is from the
other; they deliberately do not distinguish correct from systematically wrong
assignments, which is why they are kept here alongside the accuracy measures
they can be contrasted with.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .class_measures import MeasureValue, icsi
from .errors import MeasureError
from .matrix import ConfusionMatrix, marginals

_DIRECTIONS = ("predicted_from_true", "true_from_predicted")


@dataclass(frozen=True)
class ChanceModel:
    """How expected-by-chance agreement is estimated.

    kind 'cohen' uses the product of row and column marginal proportions,
    'scott' the squared true-class proportions (externally supplied priors
    when given, otherwise the column marginals of the evaluated matrix),
    'maxwell' a uniform 1/k.
    """

    kind: str
    priors: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("cohen", "scott", "maxwell"):
            raise ValueError(f"unknown chance model {self.kind!r}")
        if self.priors is not None:
            if self.kind != "scott":
                raise ValueError("external priors are only meaningful for the scott model")
            priors = tuple(float(p) for p in self.priors)
            if any(p < 0 for p in priors):
                raise ValueError("priors must be non-negative")
            if abs(sum(priors) - 1.0) > 1e-9:
                raise ValueError("priors must sum to 1 within 1e-9")
            object.__setattr__(self, "priors", priors)

    @staticmethod
    def cohen() -> "ChanceModel":
        return ChanceModel("cohen")

    @staticmethod
    def scott(priors: Sequence[float] | None = None) -> "ChanceModel":
        return ChanceModel("scott", tuple(priors) if priors is not None else None)

    @staticmethod
    def maxwell() -> "ChanceModel":
        return ChanceModel("maxwell")


@dataclass(frozen=True)
class AgreementResult:
    """Chance-corrected agreement (p_o - p_e) / (1 - p_e) with its components."""

    value: float
    p_o: float
    p_e: float
    model: ChanceModel


def osr(m: ConfusionMatrix) -> MeasureValue:
    """Overall success rate: trace divided by total mass."""
    return MeasureValue.of("osr", float(np.trace(m.cells)) / m.n)


def csi(m: ConfusionMatrix, skip_undefined: bool = False) -> MeasureValue:
    """Mean of the per-class classification success indices.

    By default an undefined class index is an error (silently dropping
    classes would bias comparisons); ``skip_undefined`` averages over the
    defined ones instead.
    """
    values = []
    for i in range(m.k):
        v = icsi(m, i)
        if v.defined:
            values.append(v.value)
        elif not skip_undefined:
            raise MeasureError(
                f"csi: icsi undefined for class {m.labels[i]!r} ({v.reason})"
            )
    if not values:
        raise MeasureError("csi: icsi undefined for every class")
    return MeasureValue.of("csi", sum(values) / len(values))


def agreement(m: ConfusionMatrix, model: ChanceModel) -> AgreementResult:
    """Chance-corrected agreement with observed agreement fixed to the OSR."""
    rows, cols, n = marginals(m)
    p_o = osr(m).value
    if model.kind == "cohen":
        p_e = float(np.dot(rows / n, cols / n))
    elif model.kind == "scott":
        if model.priors is not None:
            if len(model.priors) != m.k:
                raise MeasureError(
                    f"scott priors have length {len(model.priors)}, expected k={m.k}"
                )
            p = np.asarray(model.priors)
        else:
            p = cols / n
        p_e = float(np.dot(p, p))
    else:
        p_e = 1.0 / m.k
    if p_e >= 1.0:
        raise MeasureError("chance agreement saturated (p_e = 1)")
    return AgreementResult((p_o - p_e) / (1.0 - p_e), p_o, p_e, model)


def _degenerate(m: ConfusionMatrix) -> bool:
    # Single non-zero row and column: both class variables are constants.
    rows, cols, _ = marginals(m)
    return int(np.count_nonzero(rows)) == 1 and int(np.count_nonzero(cols)) == 1


def chi_square(m: ConfusionMatrix) -> float:
    """Pearson chi-square against the independence expectation.

    Cells whose expected mass is zero are skipped; their observed mass is
    necessarily zero as well (the expectation is a product of marginals).
    """
    rows, cols, n = marginals(m)
    expected = np.outer(rows, cols) / n
    mask = expected > 0
    diff = m.cells[mask] - expected[mask]
    return float(np.sum(diff * diff / expected[mask]))


def phi(m: ConfusionMatrix) -> MeasureValue:
    """Phi coefficient sqrt(chi2 / n), for 2-class matrices only."""
    if m.k != 2:
        raise MeasureError(f"phi requires a 2-class matrix, got k={m.k}")
    if _degenerate(m):
        return MeasureValue.undefined("phi", "single non-zero row and column")
    return MeasureValue.of("phi", min(1.0, np.sqrt(chi_square(m) / m.n)))


def cramers_v(m: ConfusionMatrix) -> MeasureValue:
    """Cramer's V: sqrt(chi2 / (n * (k - 1)))."""
    if _degenerate(m):
        return MeasureValue.undefined("cramers_v", "single non-zero row and column")
    return MeasureValue.of("cramers_v", min(1.0, np.sqrt(chi_square(m) / (m.n * (m.k - 1)))))


def mutual_information(m: ConfusionMatrix) -> float:
    """Mutual information (nats) between the true and estimated class variables."""
    rows, cols, n = marginals(m)
    p = m.cells / n
    pr = rows / n
    pc = cols / n
    mask = p > 0
    outer = np.outer(pr, pc)
    mi = float(np.sum(p[mask] * np.log(p[mask] / outer[mask])))
    return max(0.0, mi)


def _entropy(proportions: np.ndarray) -> float:
    p = proportions[proportions > 0]
    return float(-np.sum(p * np.log(p)))


def theil_u(m: ConfusionMatrix, direction: str = "predicted_from_true") -> MeasureValue:
    """Uncertainty coefficient: mutual information normalized by the entropy of
    the predicted variable ('predicted_from_true') or of the true variable
    ('true_from_predicted')."""
    if direction not in _DIRECTIONS:
        raise ValueError(f"direction must be one of {_DIRECTIONS}")
    rows, cols, n = marginals(m)
    target = rows if direction == "predicted_from_true" else cols
    h = _entropy(target / n)
    if h == 0:
        return MeasureValue.undefined("theil_u", "target entropy is zero")
    return MeasureValue.of("theil_u", min(1.0, max(0.0, mutual_information(m) / h)))


def gk_lambda(m: ConfusionMatrix, direction: str = "predicted_from_true") -> MeasureValue:
    """Goodman-Kruskal lambda: proportional reduction in error when predicting
    one class variable from the other."""
    if direction not in _DIRECTIONS:
        raise ValueError(f"direction must be one of {_DIRECTIONS}")
    rows, cols, n = marginals(m)
    if direction == "predicted_from_true":
        # Predict the row variable; columns are given.
        within = float(m.cells.max(axis=0).sum())
        baseline = float(rows.max())
    else:
        within = float(m.cells.max(axis=1).sum())
        baseline = float(cols.max())
    if n - baseline == 0:
        return MeasureValue.undefined("gk_lambda", "modal marginal holds all mass")
    return MeasureValue.of("gk_lambda", min(1.0, max(0.0, (within - baseline) / (n - baseline))))
