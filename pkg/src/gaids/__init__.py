"""Batch network-intrusion classifier for KDD99-style connection records.

Two phases: a single training pass merges labeled records into chromosome
groups by proximity (prototype centroids with running spread), then each
test record is classified by a small genetic search whose surviving
candidate's nearest chromosome group gives the prediction.
"""

from .engine import Candidate, GaParams, Prediction, detect, run_batch
from .errors import GaidsError
from .ingest import (
    ATTACK_CATEGORIES,
    CATEGORIES,
    ConnectionRecord,
    DatasetSummary,
    NormalizationStats,
    fit_normalization,
    normalize,
    parse_record,
    summarize,
    to_connection_record,
)
from .kernels import BACKEND
from .metrics import (
    BinaryCounts,
    ConfusionMatrix,
    Metrics,
    collapse_to_binary,
    detection_rate,
    false_positive_rate,
    per_class_rates,
)
from .model import (
    Chromosome,
    ChromosomeGroup,
    ChromosomeModel,
    distance,
    load_model,
    merge_record,
    nearest_chromosome,
    precalculate,
    save_model,
)

__version__ = "0.1.0"

__all__ = [
    "ATTACK_CATEGORIES",
    "BACKEND",
    "BinaryCounts",
    "Candidate",
    "CATEGORIES",
    "Chromosome",
    "ChromosomeGroup",
    "ChromosomeModel",
    "ConfusionMatrix",
    "ConnectionRecord",
    "DatasetSummary",
    "GaidsError",
    "GaParams",
    "Metrics",
    "NormalizationStats",
    "Prediction",
    "collapse_to_binary",
    "detect",
    "detection_rate",
    "distance",
    "false_positive_rate",
    "fit_normalization",
    "load_model",
    "merge_record",
    "nearest_chromosome",
    "normalize",
    "parse_record",
    "per_class_rates",
    "precalculate",
    "run_batch",
    "save_model",
    "summarize",
    "to_connection_record",
]
