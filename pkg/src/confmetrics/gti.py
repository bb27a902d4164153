"""Ground-truth index: the estimated share of instances handled by an
infallible classifier component.

The model splits the classifier into an always-correct part, which only
produces diagonal mass, and a random part whose estimated class is
independent of the true class. Off-diagonal cells therefore come entirely
from the random part, so a quasi-independence model R(i, j) = a_i * b_j is
fitted to them by iterative proportional scaling: row factors are rescaled
to reproduce the off-diagonal row sums, then column factors the off-diagonal
column sums, until the fitted cells stop moving. The random part's diagonal
is extrapolated as a_i * b_i, and whatever diagonal mass it cannot explain
is credited to the infallible component:

    theta_class[i]  = clip((cell(i, i) - a_i * b_i) / column_sum(i), 0, 1)
    theta_overall   = clip((trace - sum_i a_i * b_i) / n, 0, 1)

The fit needs at least three classes, some misclassified mass, and a
positive off-diagonal row and column sum for every class. Exact cell-level
agreement between the fitted and observed off-diagonal cells only occurs
when the data really is quasi-independent; on real matrices only the
off-diagonal row/column sums (hence the total off-diagonal mass) are
reproduced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .class_measures import MeasureValue
from .errors import GtiError
from .matrix import ConfusionMatrix


@dataclass(frozen=True)
class GtiFit:
    """Fitted ground-truth index with the random-component matrix and diagnostics."""

    theta_overall: float
    theta_class: tuple[float, ...]
    fitted_random: np.ndarray
    iterations: int
    converged: bool
    residual: float


def fit_gti(
    m: ConfusionMatrix,
    tolerance: float = 1e-9,
    max_iterations: int = 10_000,
) -> GtiFit:
    """Estimate the ground-truth index of a confusion matrix.

    ``tolerance`` bounds the max absolute change of any fitted cell between
    scaling sweeps; ``max_iterations`` caps the sweeps. Hitting the cap
    returns a result flagged unconverged rather than raising, so callers
    comparing classifiers keep the diagnostic.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")
    k = m.k
    if k < 3:
        raise GtiError("GTI requires at least three classes")
    cells = m.cells
    off = cells.copy()
    np.fill_diagonal(off, 0.0)
    off_mass = off.sum()
    if off_mass == 0:
        raise GtiError("GTI undefined on perfect classification")
    row_off = off.sum(axis=1)
    col_off = off.sum(axis=0)
    for i in range(k):
        if row_off[i] == 0 or col_off[i] == 0:
            raise GtiError(
                f"quasi-independence fit degenerate for class {m.labels[i]!r}"
            )

    mask = 1.0 - np.eye(k)
    start = np.sqrt(off_mass / (k * (k - 1)))
    a = np.full(k, start)
    b = np.full(k, start)
    fitted = a[:, None] * b[None, :] * mask
    residual = np.inf
    iterations = 0
    converged = False
    for iterations in range(1, max_iterations + 1):
        a = row_off / (mask @ b)
        b = col_off / (a @ mask)
        updated = a[:, None] * b[None, :] * mask
        residual = float(np.abs(updated - fitted).max())
        fitted = updated
        if residual <= tolerance:
            converged = True
            break

    random_component = a[:, None] * b[None, :]
    random_component.setflags(write=False)
    diag_random = a * b
    col_sums = cells.sum(axis=0)
    theta_class = tuple(
        float(np.clip((cells[i, i] - diag_random[i]) / col_sums[i], 0.0, 1.0))
        for i in range(k)
    )
    theta_overall = float(
        np.clip((np.trace(cells) - diag_random.sum()) / m.n, 0.0, 1.0)
    )
    return GtiFit(
        theta_overall=theta_overall,
        theta_class=theta_class,
        fitted_random=random_component,
        iterations=iterations,
        converged=converged,
        residual=residual,
    )


def gti_class(fit: GtiFit, class_index: int, allow_unconverged: bool = False) -> MeasureValue:
    """Class-specific ground-truth index from a completed fit."""
    if not 0 <= class_index < len(fit.theta_class):
        raise IndexError(
            f"class index {class_index} out of range for k={len(fit.theta_class)}"
        )
    if not fit.converged and not allow_unconverged:
        raise GtiError("fit did not converge; pass allow_unconverged=True to accept it")
    return MeasureValue.of("gti_class", fit.theta_class[class_index], class_index)
