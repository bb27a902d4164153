"""Confusion-matrix accuracy measures, classifier ranking, and measure-equivalence probing."""

from .class_measures import (
    MeanKind,
    MeasureValue,
    combine,
    f_measure,
    icsi,
    jaccard,
    kulczynski,
    npv,
    ppv,
    tnr,
    tpr,
)
from .comparison import (
    CLASS_MEASURE_IDS,
    MEASURE_IDS,
    OVERALL_MEASURE_IDS,
    ConcordanceMatrix,
    DiscrepancySearch,
    DiscrepancyWitness,
    EvalConfig,
    MeasureReport,
    Ranking,
    affine_rescale,
    compute_measure,
    concordance,
    default_measure_ids,
    evaluate_all,
    find_discrepancy,
    measure_scope,
    rank,
    rank_values,
    random_count_matrix,
)
from .errors import (
    ConfigError,
    ConfmetricsError,
    FormatError,
    GtiError,
    InvalidMatrixError,
    MeasureError,
)
from .formats import (
    format_matrix,
    load_label_pairs,
    load_matrix,
    load_priors,
    load_weights,
    parse_label_pairs,
    parse_matrix,
    parse_priors,
    parse_weights,
)
from .gti import GtiFit, fit_gti, gti_class
from .matrix import (
    BinaryCounts,
    ConfusionMatrix,
    LabeledDataset,
    WeightMatrix,
    apply_weights,
    binary_counts,
    collapse_one_vs_rest,
    from_labels,
    marginals,
)
from .overall_measures import (
    AgreementResult,
    ChanceModel,
    agreement,
    chi_square,
    cramers_v,
    csi,
    gk_lambda,
    mutual_information,
    osr,
    phi,
    theil_u,
)

__version__ = "0.1.0"

__all__ = [
    "AgreementResult",
    "BinaryCounts",
    "CLASS_MEASURE_IDS",
    "ChanceModel",
    "ConcordanceMatrix",
    "ConfigError",
    "ConfmetricsError",
    "ConfusionMatrix",
    "DiscrepancySearch",
    "DiscrepancyWitness",
    "EvalConfig",
    "FormatError",
    "GtiError",
    "GtiFit",
    "InvalidMatrixError",
    "LabeledDataset",
    "MEASURE_IDS",
    "MeanKind",
    "MeasureError",
    "MeasureReport",
    "MeasureValue",
    "OVERALL_MEASURE_IDS",
    "Ranking",
    "WeightMatrix",
    "affine_rescale",
    "agreement",
    "apply_weights",
    "binary_counts",
    "chi_square",
    "collapse_one_vs_rest",
    "combine",
    "compute_measure",
    "concordance",
    "cramers_v",
    "csi",
    "default_measure_ids",
    "evaluate_all",
    "f_measure",
    "find_discrepancy",
    "fit_gti",
    "format_matrix",
    "from_labels",
    "gk_lambda",
    "gti_class",
    "icsi",
    "jaccard",
    "kulczynski",
    "load_label_pairs",
    "load_matrix",
    "load_priors",
    "load_weights",
    "marginals",
    "measure_scope",
    "mutual_information",
    "npv",
    "osr",
    "parse_label_pairs",
    "parse_matrix",
    "parse_priors",
    "parse_weights",
    "phi",
    "ppv",
    "rank",
    "rank_values",
    "random_count_matrix",
    "theil_u",
    "tnr",
    "tpr",
]
