"""Text formats for matrices, label pairs, priors, and weights.

Matrix format: a header line holding k followed by k whitespace-separated
labels, then k lines of k non-negative numbers. Rows are estimated classes,
columns are true classes; files written elsewhere with the transposed
convention must be transposed before use.

Label-pair format: comma-delimited lines ``true,estimated`` with an optional
``true,estimated`` header, UTF-8.

Priors format: one ``label proportion`` pair per line.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import FormatError
from .matrix import ConfusionMatrix, LabeledDataset, WeightMatrix


def _parse_grid(text: str, source: str) -> tuple[tuple[str, ...], np.ndarray]:
    lines = [(no, line.strip()) for no, line in enumerate(text.splitlines(), 1)]
    lines = [(no, line) for no, line in lines if line]
    if not lines:
        raise FormatError("empty matrix file", source)
    head_no, head = lines[0]
    tokens = head.split()
    try:
        k = int(tokens[0])
    except ValueError:
        raise FormatError(f"expected a class count, got {tokens[0]!r}", source, head_no) from None
    if k < 2:
        raise FormatError(f"class count must be at least 2, got {k}", source, head_no)
    labels = tuple(tokens[1:])
    if len(labels) != k:
        raise FormatError(
            f"expected {k} labels after the class count, got {len(labels)}", source, head_no
        )
    if len(lines) - 1 != k:
        raise FormatError(
            f"expected {k} rows of cells, got {len(lines) - 1}", source, head_no
        )
    cells = np.zeros((k, k))
    for r, (no, line) in enumerate(lines[1:]):
        parts = line.split()
        if len(parts) != k:
            raise FormatError(f"expected {k} cells, got {len(parts)}", source, no)
        for c, part in enumerate(parts):
            try:
                value = float(part)
            except ValueError:
                raise FormatError(f"cell {part!r} is not a number", source, no) from None
            if not np.isfinite(value) or value < 0:
                raise FormatError(f"cell {part!r} must be a non-negative number", source, no)
            cells[r, c] = value
    return labels, cells


def parse_matrix(text: str, source: str = "<string>") -> ConfusionMatrix:
    labels, cells = _parse_grid(text, source)
    if len(set(labels)) != len(labels):
        raise FormatError("labels must be distinct", source)
    if cells.sum() <= 0:
        raise FormatError("matrix has zero total mass", source)
    return ConfusionMatrix(labels, cells)


def format_matrix(m: ConfusionMatrix) -> str:
    """Render a matrix in the text format; exact round-trip for count matrices."""
    for label in m.labels:
        if not label or any(ch.isspace() for ch in label):
            raise FormatError(f"label {label!r} cannot be written to the matrix format")
    lines = [f"{m.k} " + " ".join(m.labels)]
    for row in m.cells:
        if m.integral:
            lines.append(" ".join(str(int(v)) for v in row))
        else:
            lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def load_matrix(path: str | Path) -> ConfusionMatrix:
    path = Path(path)
    return parse_matrix(path.read_text(encoding="utf-8"), str(path))


def parse_label_pairs(text: str, source: str = "<string>") -> LabeledDataset:
    rows: list[tuple[str, str]] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        parts = [part.strip() for part in line.split(",")]
        if len(parts) != 2:
            raise FormatError(
                f"expected two comma-separated fields, got {len(parts)}", source, no
            )
        if not parts[0] or not parts[1]:
            raise FormatError("empty label field", source, no)
        rows.append((parts[0], parts[1]))
    if rows and tuple(p.lower() for p in rows[0]) == ("true", "estimated"):
        rows = rows[1:]
    if not rows:
        raise FormatError("no label pairs found", source)
    return LabeledDataset(tuple(rows))


def load_label_pairs(path: str | Path) -> LabeledDataset:
    path = Path(path)
    return parse_label_pairs(path.read_text(encoding="utf-8"), str(path))


def parse_priors(text: str, source: str = "<string>") -> dict[str, float]:
    priors: dict[str, float] = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(
                f"expected 'label proportion', got {len(parts)} fields", source, no
            )
        label, value = parts
        if label in priors:
            raise FormatError(f"duplicate prior for label {label!r}", source, no)
        try:
            proportion = float(value)
        except ValueError:
            raise FormatError(f"proportion {value!r} is not a number", source, no) from None
        if not np.isfinite(proportion) or proportion < 0:
            raise FormatError(f"proportion {value!r} must be non-negative", source, no)
        priors[label] = proportion
    if not priors:
        raise FormatError("no priors found", source)
    return priors


def load_priors(path: str | Path) -> dict[str, float]:
    path = Path(path)
    return parse_priors(path.read_text(encoding="utf-8"), str(path))


def parse_weights(text: str, source: str = "<string>") -> WeightMatrix:
    labels, cells = _parse_grid(text, source)
    if len(set(labels)) != len(labels):
        raise FormatError("labels must be distinct", source)
    if not np.any(cells > 0):
        raise FormatError("at least one weight must be positive", source)
    return WeightMatrix(labels, cells)


def load_weights(path: str | Path) -> WeightMatrix:
    path = Path(path)
    return parse_weights(path.read_text(encoding="utf-8"), str(path))
