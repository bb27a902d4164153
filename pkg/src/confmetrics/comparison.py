"""Evaluate measure suites, rank classifiers, and compare measures.

Rankings are descending tie-grouped orders; two measures are considered to
induce identical rankings when their tie-group sequences coincide exactly.
Concordance between measures is quantified with tie-adjusted Kendall tau-b.
The discrepancy search looks for a pair of matrices that two measures order
in opposite directions, which is the operational test of whether two
measures can ever disagree about which classifier is better.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.stats import kendalltau

from . import class_measures as cm
from . import overall_measures as om
from .class_measures import MeanKind, MeasureValue
from .errors import ConfigError, GtiError, MeasureError
from .gti import GtiFit, fit_gti, gti_class
from .matrix import ConfusionMatrix, WeightMatrix, apply_weights

# ---------------------------------------------------------------------------
# Configuration and report containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvalConfig:
    """Selection and parameters for one evaluation run.

    ``measures`` of None selects the default suite. ``chance`` picks which
    agreement instantiation the default suite carries; all three remain
    individually selectable. External ``priors`` (true-class proportions)
    require the scott model.
    """

    measures: tuple[str, ...] | None = None
    chance: str = "cohen"
    priors: tuple[float, ...] | None = None
    weights: WeightMatrix | None = None
    target_class: str | None = None
    tie_tolerance: float = 1e-9
    gti_tolerance: float = 1e-9
    gti_max_iterations: int = 10_000
    csi_skip_undefined: bool = False

    def __post_init__(self):
        if self.chance not in ("cohen", "scott", "maxwell"):
            raise ConfigError(f"unknown chance model {self.chance!r}")
        if self.priors is not None:
            if self.chance != "scott":
                raise ConfigError("priors are only valid with the scott chance model")
            object.__setattr__(self, "priors", tuple(float(p) for p in self.priors))
        if self.measures is not None:
            object.__setattr__(self, "measures", tuple(self.measures))
        if self.tie_tolerance < 0:
            raise ConfigError("tie tolerance must be non-negative")
        if self.gti_tolerance <= 0:
            raise ConfigError("gti tolerance must be positive")
        if self.gti_max_iterations < 1:
            raise ConfigError("gti max iterations must be at least 1")


@dataclass(frozen=True)
class MeasureReport:
    """Every selected measure evaluated on one classifier's matrix.

    Each selected measure id appears in exactly one of ``overall``,
    ``per_class`` or ``errors``.
    """

    classifier_id: str
    labels: tuple[str, ...]
    k: int
    n: float
    integral: bool
    weighted: bool
    chance: str
    priors: tuple[float, ...] | None
    tie_tolerance: float
    measures: tuple[str, ...]
    overall: dict[str, MeasureValue]
    per_class: dict[str, tuple[MeasureValue, ...]]
    errors: dict[str, str]
    gti: GtiFit | None


@dataclass(frozen=True)
class Ranking:
    """Descending tie-grouped order of classifier ids under one measure."""

    measure: str
    groups: tuple[tuple[str, ...], ...]
    unrankable: tuple[str, ...]
    tie_tolerance: float
    class_index: int | None = None

    @property
    def structure(self) -> tuple:
        return (self.groups, self.unrankable)


@dataclass(frozen=True)
class ConcordanceMatrix:
    """Pairwise tau-b between measures plus an identical-ranking mask."""

    measures: tuple[str, ...]
    tau: np.ndarray
    identical: np.ndarray


@dataclass(frozen=True)
class DiscrepancySearch:
    """Generator configuration for the discrepancy search; the seed is mandatory."""

    seed: int
    k: int = 2
    n: int = 100
    class_index: int = 0
    tie_tolerance: float = 1e-9

    def __post_init__(self):
        if self.k < 2:
            raise ConfigError("generated matrices need at least 2 classes")
        if self.n < 1:
            raise ConfigError("generated matrices need positive mass")
        if not 0 <= self.class_index < self.k:
            raise ConfigError(f"class index {self.class_index} out of range for k={self.k}")
        if self.tie_tolerance < 0:
            raise ConfigError("tie tolerance must be non-negative")


@dataclass(frozen=True)
class DiscrepancyWitness:
    """A matrix pair that two measures order in opposite directions."""

    measure_a: str
    measure_b: str
    first: ConfusionMatrix
    second: ConfusionMatrix
    a_first: float
    a_second: float
    b_first: float
    b_second: float
    trial: int


# ---------------------------------------------------------------------------
# Measure registry
# ---------------------------------------------------------------------------


class _Context:
    """Per-evaluation cache: config plus a lazily computed GTI fit."""

    def __init__(self, m: ConfusionMatrix, config: EvalConfig):
        self.m = m
        self.config = config
        self._gti: GtiFit | None = None
        self._gti_error: GtiError | None = None
        self._gti_done = False

    def gti_fit(self) -> GtiFit:
        if not self._gti_done:
            self._gti_done = True
            try:
                self._gti = fit_gti(
                    self.m,
                    tolerance=self.config.gti_tolerance,
                    max_iterations=self.config.gti_max_iterations,
                )
            except GtiError as exc:
                self._gti_error = exc
        if self._gti_error is not None:
            raise self._gti_error
        assert self._gti is not None
        return self._gti

    def fit_or_none(self) -> GtiFit | None:
        return self._gti if self._gti_done and self._gti_error is None else None


def _wrap(measure_id: str, value: float) -> MeasureValue:
    return MeasureValue.of(measure_id, value)


def _rename(measure_id: str, v: MeasureValue) -> MeasureValue:
    return MeasureValue(measure_id, v.value, v.class_index, v.reason)


_OVERALL: dict[str, Callable[[_Context], MeasureValue]] = {
    "osr": lambda ctx: om.osr(ctx.m),
    "csi": lambda ctx: om.csi(ctx.m, skip_undefined=ctx.config.csi_skip_undefined),
    "kappa_cohen": lambda ctx: _wrap(
        "kappa_cohen", om.agreement(ctx.m, om.ChanceModel.cohen()).value
    ),
    "pi_scott": lambda ctx: _wrap(
        "pi_scott", om.agreement(ctx.m, om.ChanceModel.scott(ctx.config.priors)).value
    ),
    "re_maxwell": lambda ctx: _wrap(
        "re_maxwell", om.agreement(ctx.m, om.ChanceModel.maxwell()).value
    ),
    "chi_square": lambda ctx: _wrap("chi_square", om.chi_square(ctx.m)),
    "phi": lambda ctx: om.phi(ctx.m),
    "cramers_v": lambda ctx: om.cramers_v(ctx.m),
    "mutual_info": lambda ctx: _wrap("mutual_info", om.mutual_information(ctx.m)),
    "theil_u_pred": lambda ctx: _rename(
        "theil_u_pred", om.theil_u(ctx.m, "predicted_from_true")
    ),
    "theil_u_true": lambda ctx: _rename(
        "theil_u_true", om.theil_u(ctx.m, "true_from_predicted")
    ),
    "lambda_pred": lambda ctx: _rename(
        "lambda_pred", om.gk_lambda(ctx.m, "predicted_from_true")
    ),
    "lambda_true": lambda ctx: _rename(
        "lambda_true", om.gk_lambda(ctx.m, "true_from_predicted")
    ),
    "gti_overall": lambda ctx: _wrap("gti_overall", ctx.gti_fit().theta_overall),
}

_CLASS: dict[str, Callable[[_Context, int], MeasureValue]] = {
    "tpr": lambda ctx, i: cm.tpr(ctx.m, i),
    "tnr": lambda ctx, i: cm.tnr(ctx.m, i),
    "ppv": lambda ctx, i: cm.ppv(ctx.m, i),
    "npv": lambda ctx, i: cm.npv(ctx.m, i),
    "f": lambda ctx, i: cm.f_measure(ctx.m, i),
    "jaccard": lambda ctx, i: cm.jaccard(ctx.m, i),
    "icsi": lambda ctx, i: cm.icsi(ctx.m, i),
    "kulczynski": lambda ctx, i: cm.kulczynski(ctx.m, i),
    **{
        f"combine_{kind.value}": (lambda ctx, i, _kind=kind: cm.combine(ctx.m, i, _kind))
        for kind in MeanKind
    },
    "gti_class": lambda ctx, i: gti_class(ctx.gti_fit(), i, allow_unconverged=True),
}

OVERALL_MEASURE_IDS: tuple[str, ...] = tuple(_OVERALL)
CLASS_MEASURE_IDS: tuple[str, ...] = tuple(_CLASS)
MEASURE_IDS: tuple[str, ...] = OVERALL_MEASURE_IDS + CLASS_MEASURE_IDS

_AGREEMENT_FOR_CHANCE = {"cohen": "kappa_cohen", "scott": "pi_scott", "maxwell": "re_maxwell"}


def measure_scope(measure_id: str) -> str:
    """'overall' or 'class' for a registered measure id."""
    if measure_id in _OVERALL:
        return "overall"
    if measure_id in _CLASS:
        return "class"
    raise ConfigError(f"unknown measure id {measure_id!r}")


def default_measure_ids(k: int, chance: str = "cohen") -> tuple[str, ...]:
    """The default evaluation suite for a k-class matrix."""
    overall = [
        "osr",
        "csi",
        _AGREEMENT_FOR_CHANCE[chance],
        "chi_square",
        *(["phi"] if k == 2 else []),
        "cramers_v",
        "mutual_info",
        "theil_u_pred",
        "theil_u_true",
        "lambda_pred",
        "lambda_true",
        "gti_overall",
    ]
    per_class = ["tpr", "tnr", "ppv", "npv", "f", "jaccard", "icsi", "kulczynski", "gti_class"]
    return tuple(overall + per_class)


def compute_measure(
    m: ConfusionMatrix,
    measure_id: str,
    class_index: int | None = None,
    config: EvalConfig | None = None,
) -> MeasureValue:
    """Evaluate one registered measure; class-specific ids need a class index."""
    ctx = _Context(m, config or EvalConfig())
    if measure_id in _OVERALL:
        return _OVERALL[measure_id](ctx)
    if measure_id in _CLASS:
        if class_index is None:
            raise ConfigError(f"measure {measure_id!r} is class-specific; pass a class index")
        return _CLASS[measure_id](ctx, class_index)
    raise ConfigError(f"unknown measure id {measure_id!r}")


# ---------------------------------------------------------------------------
# Report evaluation
# ---------------------------------------------------------------------------


def evaluate_all(
    m: ConfusionMatrix,
    config: EvalConfig | None = None,
    classifier_id: str = "classifier",
) -> MeasureReport:
    """Evaluate the selected measure suite; failures become per-entry records."""
    config = config or EvalConfig()
    weighted = config.weights is not None
    if weighted:
        m = apply_weights(m, config.weights)
    selected = config.measures
    if selected is None:
        selected = default_measure_ids(m.k, config.chance)
    ordered = tuple(mid for mid in MEASURE_IDS if mid in set(selected))
    for mid in selected:
        if mid not in _OVERALL and mid not in _CLASS:
            raise ConfigError(f"unknown measure id {mid!r}")

    ctx = _Context(m, config)
    overall: dict[str, MeasureValue] = {}
    per_class: dict[str, tuple[MeasureValue, ...]] = {}
    errors: dict[str, str] = {}
    for mid in ordered:
        if mid in _OVERALL:
            try:
                overall[mid] = _OVERALL[mid](ctx)
            except MeasureError as exc:
                errors[mid] = str(exc)
        else:
            try:
                per_class[mid] = tuple(_CLASS[mid](ctx, i) for i in range(m.k))
            except MeasureError as exc:
                errors[mid] = str(exc)

    return MeasureReport(
        classifier_id=classifier_id,
        labels=m.labels,
        k=m.k,
        n=m.n,
        integral=m.integral,
        weighted=weighted,
        chance=config.chance,
        priors=config.priors,
        tie_tolerance=config.tie_tolerance,
        measures=ordered,
        overall=overall,
        per_class=per_class,
        errors=errors,
        gti=ctx.fit_or_none(),
    )


# ---------------------------------------------------------------------------
# Ranking
# ---------------------------------------------------------------------------


def rank_values(
    ids: Sequence[str],
    values: Sequence[float | None],
    tie_tolerance: float = 1e-9,
    measure: str = "value",
    class_index: int | None = None,
) -> Ranking:
    """Tie-grouped descending ranking of (id, value) pairs.

    A new group opens when a value drops more than the tolerance below the
    current group's best value; ids with a None value land in the trailing
    unrankable group. Ids are sorted within each group for reproducibility.
    """
    if len(ids) != len(values):
        raise ValueError("ids and values must have the same length")
    defined = [(str(i), float(v)) for i, v in zip(ids, values) if v is not None]
    unrankable = tuple(sorted(str(i) for i, v in zip(ids, values) if v is None))
    defined.sort(key=lambda pair: (-pair[1], pair[0]))
    groups: list[tuple[str, ...]] = []
    current: list[str] = []
    anchor = 0.0
    for cid, value in defined:
        if not current:
            current = [cid]
            anchor = value
        elif anchor - value <= tie_tolerance:
            current.append(cid)
        else:
            groups.append(tuple(sorted(current)))
            current = [cid]
            anchor = value
    if current:
        groups.append(tuple(sorted(current)))
    return Ranking(measure, tuple(groups), unrankable, tie_tolerance, class_index)


def _extract_value(
    report: MeasureReport, measure: str, class_index: int | None
) -> float | None:
    """The rankable value of one measure in one report, or None."""
    if measure in report.errors:
        return None
    if measure in report.overall:
        return report.overall[measure].value
    if measure in report.per_class:
        if class_index is None:
            raise ConfigError(f"measure {measure!r} is class-specific; pass a class index")
        vector = report.per_class[measure]
        if not 0 <= class_index < len(vector):
            raise IndexError(f"class index {class_index} out of range")
        return vector[class_index].value
    raise ConfigError(f"unknown measure id {measure!r} (not present in report)")


def rank(
    reports: Sequence[MeasureReport],
    measure: str,
    class_index: int | None = None,
    tie_tolerance: float = 1e-9,
) -> Ranking:
    """Rank classifiers by one measure, higher is better."""
    if len(reports) < 2:
        raise ValueError("ranking needs at least 2 reports")
    ids = [r.classifier_id for r in reports]
    values = [_extract_value(r, measure, class_index) for r in reports]
    return rank_values(ids, values, tie_tolerance, measure, class_index)


def affine_rescale(values: Iterable[float], scale: float, offset: float = 0.0) -> list[float]:
    """Rescale values by scale * v + offset with scale > 0 (order-preserving)."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    return [scale * float(v) + offset for v in values]


def concordance(
    reports: Sequence[MeasureReport],
    measures: Sequence[str],
    class_index: int | None = None,
    tie_tolerance: float = 1e-9,
) -> ConcordanceMatrix:
    """Pairwise tau-b between measures over a shared classifier set.

    Every listed measure must be rankable for every classifier. The tau of a
    pair involving a constant value vector is NaN; the identical-ranking mask
    compares tie-group structures and is always defined.
    """
    if len(reports) < 2:
        raise ValueError("concordance needs at least 2 rankable classifiers")
    measures = tuple(measures)
    vectors: dict[str, list[float]] = {}
    structures: dict[str, tuple] = {}
    for measure in measures:
        values = [_extract_value(r, measure, class_index) for r in reports]
        for report, value in zip(reports, values):
            if value is None:
                raise MeasureError(
                    f"measure {measure!r} is not rankable for {report.classifier_id!r}"
                )
        vectors[measure] = [float(v) for v in values]
        ids = [r.classifier_id for r in reports]
        structures[measure] = rank_values(
            ids, values, tie_tolerance, measure, class_index
        ).structure

    size = len(measures)
    tau = np.ones((size, size))
    identical = np.eye(size, dtype=bool)
    for i in range(size):
        for j in range(i + 1, size):
            stat = float(kendalltau(vectors[measures[i]], vectors[measures[j]])[0])
            tau[i, j] = tau[j, i] = stat
            same = structures[measures[i]] == structures[measures[j]]
            identical[i, j] = identical[j, i] = same
    tau.setflags(write=False)
    identical.setflags(write=False)
    return ConcordanceMatrix(measures, tau, identical)


# ---------------------------------------------------------------------------
# Discrepancy search
# ---------------------------------------------------------------------------


def random_count_matrix(rng: np.random.Generator, k: int, n: int) -> ConfusionMatrix:
    """Uniformly allocate n instances over the k*k cells of a count matrix."""
    labels = tuple(f"c{i}" for i in range(k))
    cells = rng.multinomial(n, np.full(k * k, 1.0 / (k * k))).reshape(k, k).astype(float)
    if cells.sum() <= 0:  # n >= 1 guarantees mass, keep the guard explicit
        raise ValueError("generated matrix has zero mass")
    return ConfusionMatrix(labels, cells)


def find_discrepancy(
    measure_a: str,
    measure_b: str,
    generator_config: DiscrepancySearch,
    budget: int,
) -> DiscrepancyWitness | None:
    """Search random matrix pairs for an order reversal between two measures.

    Returns the first pair (in seed order) where measure_a strictly prefers
    one matrix and measure_b strictly prefers the other, beyond the tie
    tolerance; None when the budget is exhausted. Deterministic per seed.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    for measure in (measure_a, measure_b):
        measure_scope(measure)  # raises on unknown ids
    cfg = generator_config
    rng = np.random.default_rng(cfg.seed)
    eval_config = EvalConfig()
    for trial in range(1, budget + 1):
        first = random_count_matrix(rng, cfg.k, cfg.n)
        second = random_count_matrix(rng, cfg.k, cfg.n)
        try:
            a1 = compute_measure(first, measure_a, cfg.class_index, eval_config)
            a2 = compute_measure(second, measure_a, cfg.class_index, eval_config)
            b1 = compute_measure(first, measure_b, cfg.class_index, eval_config)
            b2 = compute_measure(second, measure_b, cfg.class_index, eval_config)
        except MeasureError:
            continue
        if not (a1.defined and a2.defined and b1.defined and b2.defined):
            continue
        da = a1.value - a2.value
        db = b1.value - b2.value
        tol = cfg.tie_tolerance
        if (da > tol and db < -tol) or (da < -tol and db > tol):
            return DiscrepancyWitness(
                measure_a=measure_a,
                measure_b=measure_b,
                first=first,
                second=second,
                a_first=a1.value,
                a_second=a2.value,
                b_first=b1.value,
                b_second=b2.value,
                trial=trial,
            )
    return None
