"""Class-specific accuracy measures built from one-vs-rest counts.

Every operation takes (matrix, class_index) and returns a MeasureValue.
A zero denominator yields the distinguished Undefined state, never 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .matrix import ConfusionMatrix, binary_counts


@dataclass(frozen=True)
class MeasureValue:
    """A named measure evaluation: a real value or the Undefined state.

    ``reason`` names the zero denominator that caused an undefined value.
    """

    measure: str
    value: float | None
    class_index: int | None = None
    reason: str | None = None

    @property
    def defined(self) -> bool:
        return self.value is not None

    @staticmethod
    def of(measure: str, value: float, class_index: int | None = None) -> "MeasureValue":
        return MeasureValue(measure, float(value), class_index)

    @staticmethod
    def undefined(measure: str, reason: str, class_index: int | None = None) -> "MeasureValue":
        return MeasureValue(measure, None, class_index, reason)


class MeanKind(Enum):
    """Ways to combine the recall/precision pair, in increasing order."""

    PRODUCT = "product"
    MINIMUM = "minimum"
    HARMONIC = "harmonic"
    GEOMETRIC = "geometric"
    ARITHMETIC = "arithmetic"
    QUADRATIC = "quadratic"
    MAXIMUM = "maximum"


def tpr(m: ConfusionMatrix, class_index: int) -> MeasureValue:
    """True-positive rate (sensitivity, recall): tp / (tp + fn)."""
    c = binary_counts(m, class_index)
    if c.tp + c.fn == 0:
        return MeasureValue.undefined("tpr", "tp+fn=0", class_index)
    return MeasureValue.of("tpr", c.tp / (c.tp + c.fn), class_index)


def tnr(m: ConfusionMatrix, class_index: int) -> MeasureValue:
    """True-negative rate (specificity): tn / (tn + fp)."""
    c = binary_counts(m, class_index)
    if c.tn + c.fp == 0:
        return MeasureValue.undefined("tnr", "tn+fp=0", class_index)
    return MeasureValue.of("tnr", c.tn / (c.tn + c.fp), class_index)


def ppv(m: ConfusionMatrix, class_index: int) -> MeasureValue:
    """Positive predictive value (precision): tp / (tp + fp)."""
    c = binary_counts(m, class_index)
    if c.tp + c.fp == 0:
        return MeasureValue.undefined("ppv", "tp+fp=0", class_index)
    return MeasureValue.of("ppv", c.tp / (c.tp + c.fp), class_index)


def npv(m: ConfusionMatrix, class_index: int) -> MeasureValue:
    """Negative predictive value: tn / (tn + fn)."""
    c = binary_counts(m, class_index)
    if c.tn + c.fn == 0:
        return MeasureValue.undefined("npv", "tn+fn=0", class_index)
    return MeasureValue.of("npv", c.tn / (c.tn + c.fn), class_index)


def f_measure(m: ConfusionMatrix, class_index: int) -> MeasureValue:
    """Balanced F: 2tp / (2tp + fn + fp).

    Computed from counts rather than from the rate pair, so tp > 0 with one
    empty marginal still yields a number; the two forms agree whenever both
    are defined.
    """
    c = binary_counts(m, class_index)
    denom = 2 * c.tp + c.fn + c.fp
    if denom == 0:
        return MeasureValue.undefined("f", "2tp+fn+fp=0", class_index)
    return MeasureValue.of("f", 2 * c.tp / denom, class_index)


def jaccard(m: ConfusionMatrix, class_index: int) -> MeasureValue:
    """Intersection over union of the true and estimated class: tp / (tp + fp + fn)."""
    c = binary_counts(m, class_index)
    denom = c.tp + c.fp + c.fn
    if denom == 0:
        return MeasureValue.undefined("jaccard", "tp+fp+fn=0", class_index)
    return MeasureValue.of("jaccard", c.tp / denom, class_index)


def icsi(m: ConfusionMatrix, class_index: int) -> MeasureValue:
    """Individual classification success index: ppv + tpr - 1, in [-1, 1]."""
    t = tpr(m, class_index)
    p = ppv(m, class_index)
    bad = t if not t.defined else (p if not p.defined else None)
    if bad is not None:
        return MeasureValue.undefined("icsi", bad.reason or "undefined rate", class_index)
    return MeasureValue.of("icsi", p.value + t.value - 1.0, class_index)


def kulczynski(m: ConfusionMatrix, class_index: int) -> MeasureValue:
    """Arithmetic mean of tpr and ppv."""
    t = tpr(m, class_index)
    p = ppv(m, class_index)
    bad = t if not t.defined else (p if not p.defined else None)
    if bad is not None:
        return MeasureValue.undefined("kulczynski", bad.reason or "undefined rate", class_index)
    return MeasureValue.of("kulczynski", (t.value + p.value) / 2.0, class_index)


def combine(m: ConfusionMatrix, class_index: int, kind: MeanKind) -> MeasureValue:
    """Combine (tpr, ppv) with the selected mean; Undefined constituents propagate."""
    name = f"combine_{kind.value}"
    t = tpr(m, class_index)
    p = ppv(m, class_index)
    bad = t if not t.defined else (p if not p.defined else None)
    if bad is not None:
        return MeasureValue.undefined(name, bad.reason or "undefined rate", class_index)
    a, b = t.value, p.value
    if kind is MeanKind.PRODUCT:
        value = a * b
    elif kind is MeanKind.MINIMUM:
        value = min(a, b)
    elif kind is MeanKind.HARMONIC:
        if a + b == 0:
            return MeasureValue.undefined(name, "tpr+ppv=0", class_index)
        value = 2 * a * b / (a + b)
    elif kind is MeanKind.GEOMETRIC:
        value = math.sqrt(a * b)
    elif kind is MeanKind.ARITHMETIC:
        value = (a + b) / 2.0
    elif kind is MeanKind.QUADRATIC:
        value = math.sqrt((a * a + b * b) / 2.0)
    else:
        value = max(a, b)
    return MeasureValue.of(name, value, class_index)
