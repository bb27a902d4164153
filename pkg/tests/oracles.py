"""Independent oracles and generators used to freeze expected test values.

Everything here deliberately avoids the library's own code paths: tallies go
through Counter, binary counts are counted instance by instance, tau-b is the
quadratic pair-counting definition, and the ground-truth-index generator
builds matrices directly from the two-component model it claims to recover.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from confmetrics import ConfusionMatrix

M1 = ConfusionMatrix(("A", "B"), [[40, 10], [5, 45]])
M2 = ConfusionMatrix(("X", "Y", "Z"), [[30, 2, 3], [4, 25, 1], [1, 3, 31]])


def tally_pairs(pairs, universe=None):
    """Counter-based tally of (true, estimated) pairs into (labels, grid)."""
    if universe is None:
        seen = dict()
        for true_label, _ in pairs:
            seen.setdefault(true_label)
        for _, est_label in pairs:
            seen.setdefault(est_label)
        labels = tuple(seen)
    else:
        labels = tuple(universe)
    counts = Counter(pairs)
    grid = [
        [counts[(true_label, est_label)] for true_label in labels]
        for est_label in labels
    ]
    return labels, grid


def expand_to_pairs(m: ConfusionMatrix) -> list[tuple[str, str]]:
    """Instance-level (true, estimated) pairs of an integral matrix."""
    assert m.integral
    pairs = []
    for i, est_label in enumerate(m.labels):
        for j, true_label in enumerate(m.labels):
            pairs.extend([(true_label, est_label)] * int(m.cells[i, j]))
    return pairs


def instance_binary_counts(m: ConfusionMatrix, class_index: int):
    """tp/fp/fn/tn of one class, counted instance by instance."""
    target = m.labels[class_index]
    tp = fp = fn = tn = 0
    for true_label, est_label in expand_to_pairs(m):
        if est_label == target and true_label == target:
            tp += 1
        elif est_label == target:
            fp += 1
        elif true_label == target:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def tau_b_bruteforce(x, y) -> float:
    """Tie-adjusted Kendall rank correlation by explicit pair counting."""
    n = len(x)
    concordant = discordant = ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            if dx == 0 and dy == 0:
                continue
            if dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif dx * dy > 0:
                concordant += 1
            else:
                discordant += 1
    denom = np.sqrt(
        (concordant + discordant + ties_x) * (concordant + discordant + ties_y)
    )
    return float((concordant - discordant) / denom) if denom else float("nan")


def random_matrix(rng: np.random.Generator, k=None, n=None, min_k=2, max_k=8,
                  min_n=10, max_n=1_000_000) -> ConfusionMatrix:
    """Dirichlet-multinomial count matrix with random size and mass."""
    if k is None:
        k = int(rng.integers(min_k, max_k + 1))
    if n is None:
        n = int(np.round(10 ** rng.uniform(np.log10(min_n), np.log10(max_n))))
    probs = rng.dirichlet(np.ones(k * k))
    cells = rng.multinomial(n, probs).reshape(k, k).astype(float)
    labels = tuple(f"c{i}" for i in range(k))
    return ConfusionMatrix(labels, cells)


def gti_expected(theta, q, a, n) -> np.ndarray:
    """Expected matrix of the two-component model.

    A theta share of each true class lands on the diagonal; the rest is
    assigned a row independently of the true class, following a. Column
    totals equal n*q either way, so q really is the true-class distribution.
    """
    q = np.asarray(q, dtype=float)
    a = np.asarray(a, dtype=float)
    k = len(q)
    th = np.full(k, theta, dtype=float) if np.isscalar(theta) else np.asarray(theta, dtype=float)
    expected = np.outer(a, (1.0 - th) * n * q)
    expected[np.diag_indices(k)] += th * n * q
    return expected


def gti_sample(rng: np.random.Generator, expected: np.ndarray) -> ConfusionMatrix:
    """Multinomial sample of an expected matrix, preserving the total mass."""
    k = expected.shape[0]
    n = int(round(expected.sum()))
    cells = rng.multinomial(n, (expected / expected.sum()).ravel()).reshape(k, k)
    labels = tuple(f"c{i}" for i in range(k))
    return ConfusionMatrix(labels, cells.astype(float))
