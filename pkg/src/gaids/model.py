"""Labeled chromosome groups built by proximity merging over training data.

A chromosome is a merged prototype: a running-mean centroid, its member
count, and a running standard deviation of member-to-centroid distances
(the distance each member had to the centroid at the moment it merged).
Training walks the records once: a record merges into the nearest
chromosome of its own label group when that chromosome lies within the
merge range, otherwise it seeds a new chromosome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    EmptyDataset,
    EmptyModel,
    ModelFormatError,
    ModelVersionMismatch,
)
from .ingest import ConnectionRecord, NormalizationStats

MODEL_FORMAT_TAG = "gaids-model"
MODEL_FORMAT_VERSION = "1"


def distance(a: np.ndarray, b: np.ndarray) -> float:
    """Dimension-normalized Euclidean distance, in [0,1] for unit-cube inputs."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"vector lengths differ: {a.shape[0]} vs {b.shape[0]}")
    return kernels.distance(a, b)


@dataclass
class Chromosome:
    """A merged prototype: centroid, member count, spread, owning label."""

    centroid: np.ndarray
    member_count: int = 1
    spread: float = 0.0
    group_label: str = ""
    # Welford accumulators over the member-distance stream (training state,
    # not persisted; the seed record contributes distance 0).
    _dist_mean: float = field(default=0.0, repr=False, compare=False)
    _dist_m2: float = field(default=0.0, repr=False, compare=False)


@dataclass
class ChromosomeGroup:
    """All chromosomes sharing one fine-grained attack name."""

    label: str
    category: str
    chromosomes: list[Chromosome]


@dataclass
class _FlatModel:
    """Scan-ready view: chromosomes ordered by (label, insertion order)."""

    centroids: np.ndarray
    spreads: np.ndarray
    labels: list[str]
    categories: list[str]
    chromosomes: list[Chromosome]


@dataclass
class ChromosomeModel:
    """The trained artifact: groups plus the normalization fitted with them."""

    groups: list[ChromosomeGroup]
    normalization: NormalizationStats
    range_used: float
    training_size: int
    _flat: _FlatModel | None = field(default=None, repr=False, compare=False)

    def num_chromosomes(self) -> int:
        return sum(len(g.chromosomes) for g in self.groups)

    def flatten(self) -> _FlatModel:
        """Build (and cache) the flattened scan view. The model must not be
        mutated afterwards."""
        if self._flat is None:
            chroms: list[Chromosome] = []
            labels: list[str] = []
            categories: list[str] = []
            for group in sorted(self.groups, key=lambda g: g.label):
                for c in group.chromosomes:
                    chroms.append(c)
                    labels.append(group.label)
                    categories.append(group.category)
            if not chroms:
                raise EmptyModel("model holds no chromosomes")
            centroids = np.ascontiguousarray(
                np.stack([c.centroid for c in chroms]), dtype=np.float64
            )
            spreads = np.array([c.spread for c in chroms], dtype=np.float64)
            self._flat = _FlatModel(centroids, spreads, labels, categories, chroms)
        return self._flat

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_flat"] = None
        return state


def merge_record(c: Chromosome, x: np.ndarray, precomputed_distance: float | None = None) -> Chromosome:
    """Fold one record into a chromosome (in place; returns the same object).

    The centroid moves to the running mean; the spread takes the record's
    distance to the pre-merge centroid into its running standard deviation.
    """
    if x.shape != c.centroid.shape:
        raise DimensionMismatch(
            f"vector lengths differ: {x.shape[0]} vs {c.centroid.shape[0]}"
        )
    d = precomputed_distance
    if d is None:
        d = distance(x, c.centroid)
    n = c.member_count + 1
    c.centroid += (x - c.centroid) / n
    c.member_count = n
    delta = d - c._dist_mean
    c._dist_mean += delta / n
    c._dist_m2 += delta * (d - c._dist_mean)
    c.spread = math.sqrt(c._dist_m2 / n)
    return c


class _GroupBuilder:
    """Capacity-doubling store for one group during precalculation."""

    def __init__(self, label: str, category: str, num_features: int):
        self.label = label
        self.category = category
        self.centroids = np.empty((8, num_features), dtype=np.float64)
        self.counts: list[int] = []
        self.means: list[float] = []
        self.m2s: list[float] = []
        self.size = 0

    def view(self) -> np.ndarray:
        return self.centroids[: self.size]

    def add(self, x: np.ndarray) -> None:
        if self.size == self.centroids.shape[0]:
            grown = np.empty((self.size * 2, self.centroids.shape[1]), dtype=np.float64)
            grown[: self.size] = self.centroids
            self.centroids = grown
        self.centroids[self.size] = x
        self.counts.append(1)
        self.means.append(0.0)
        self.m2s.append(0.0)
        self.size += 1

    def merge(self, idx: int, x: np.ndarray, d: float) -> None:
        n = self.counts[idx] + 1
        row = self.centroids[idx]
        row += (x - row) / n
        self.counts[idx] = n
        delta = d - self.means[idx]
        self.means[idx] += delta / n
        self.m2s[idx] += delta * (d - self.means[idx])

    def freeze(self) -> ChromosomeGroup:
        chroms = []
        for i in range(self.size):
            c = Chromosome(
                centroid=self.centroids[i].copy(),
                member_count=self.counts[i],
                spread=math.sqrt(self.m2s[i] / self.counts[i]),
                group_label=self.label,
            )
            c._dist_mean = self.means[i]
            c._dist_m2 = self.m2s[i]
            chroms.append(c)
        return ChromosomeGroup(label=self.label, category=self.category, chromosomes=chroms)


def precalculate(
    training: list[ConnectionRecord],
    merge_range: float,
    stats: NormalizationStats,
) -> ChromosomeModel:
    """Single training pass: merge each normalized record into the nearest
    chromosome of its own label group when within merge_range, else seed a
    new chromosome. Groups appear in first-sight label order; the pass is
    order-dependent and bit-reproducible for a fixed input order.
    """
    if not training:
        raise EmptyDataset("cannot precalculate on an empty dataset")
    if merge_range < 0:
        raise ValueError("merge range must be non-negative")

    builders: dict[str, _GroupBuilder] = {}
    order: list[str] = []
    for rec in training:
        if rec.attack_name is None:
            raise ValueError("training records must be labeled")
        x = stats.transform(rec.features)
        builder = builders.get(rec.attack_name)
        if builder is None:
            builder = _GroupBuilder(rec.attack_name, rec.category, x.shape[0])
            builders[rec.attack_name] = builder
            order.append(rec.attack_name)
            builder.add(x)
            continue
        idx, d = kernels.nearest_centroid(x, builder.view())
        if d <= merge_range:
            builder.merge(idx, x, d)
        else:
            builder.add(x)

    groups = [builders[label].freeze() for label in order]
    return ChromosomeModel(
        groups=groups,
        normalization=stats,
        range_used=merge_range,
        training_size=len(training),
    )


def nearest_chromosome(x: np.ndarray, model: ChromosomeModel) -> tuple[Chromosome, float]:
    """The chromosome minimizing distance(x, centroid) over all groups.

    Ties resolve by group label (lexicographic), then insertion order.
    """
    flat = model.flatten()
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape[0] != flat.centroids.shape[1]:
        raise DimensionMismatch(
            f"vector lengths differ: {x.shape[0]} vs {flat.centroids.shape[1]}"
        )
    idx, d = kernels.nearest_centroid(x, flat.centroids)
    return flat.chromosomes[idx], d


def _fmt(v: float) -> str:
    return repr(float(v))


def save_model(model: ChromosomeModel, path) -> None:
    """Versioned line-oriented text: header, one line per chromosome, then
    the normalization min and max rows."""
    lines = [
        " ".join(
            [
                MODEL_FORMAT_TAG,
                MODEL_FORMAT_VERSION,
                _fmt(model.range_used),
                str(model.training_size),
                str(model.normalization.feat_min.shape[0]),
            ]
        )
    ]
    for group in model.groups:
        for c in group.chromosomes:
            lines.append(
                " ".join(
                    [group.label, group.category, str(c.member_count), _fmt(c.spread)]
                    + [_fmt(v) for v in c.centroid]
                )
            )
    lines.append(" ".join(_fmt(v) for v in model.normalization.feat_min))
    lines.append(" ".join(_fmt(v) for v in model.normalization.feat_max))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path) -> ChromosomeModel:
    """Read a model file; rejects unknown format tags/versions."""
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise ModelFormatError("empty model file")
    header = lines[0].split()
    if len(header) != 5 or header[0] != MODEL_FORMAT_TAG:
        raise ModelVersionMismatch(f"not a {MODEL_FORMAT_TAG} file")
    if header[1] != MODEL_FORMAT_VERSION:
        raise ModelVersionMismatch(f"unsupported model version {header[1]!r}")
    try:
        range_used = float(header[2])
        training_size = int(header[3])
        num_features = int(header[4])
    except ValueError as exc:
        raise ModelFormatError(f"bad header: {exc}") from None
    if len(lines) < 3:
        raise ModelFormatError("missing normalization rows")

    def parse_row(tokens, expected):
        if len(tokens) != expected:
            raise ModelFormatError(
                f"expected {expected} values per row, got {len(tokens)}"
            )
        try:
            return np.array([float(t) for t in tokens], dtype=np.float64)
        except ValueError as exc:
            raise ModelFormatError(f"bad value: {exc}") from None

    feat_min = parse_row(lines[-2].split(), num_features)
    feat_max = parse_row(lines[-1].split(), num_features)

    groups: dict[str, ChromosomeGroup] = {}
    order: list[str] = []
    member_total = 0
    for ln in lines[1:-2]:
        tokens = ln.split()
        if len(tokens) != 4 + num_features:
            raise ModelFormatError(
                f"expected {4 + num_features} tokens per chromosome row, got {len(tokens)}"
            )
        label, category = tokens[0], tokens[1]
        try:
            count = int(tokens[2])
            spread = float(tokens[3])
        except ValueError as exc:
            raise ModelFormatError(f"bad chromosome row: {exc}") from None
        centroid = parse_row(tokens[4:], num_features)
        chrom = Chromosome(
            centroid=centroid, member_count=count, spread=spread, group_label=label
        )
        member_total += count
        group = groups.get(label)
        if group is None:
            group = ChromosomeGroup(label=label, category=category, chromosomes=[])
            groups[label] = group
            order.append(label)
        group.chromosomes.append(chrom)

    if member_total != training_size:
        raise ModelFormatError(
            f"member counts sum to {member_total}, header says {training_size}"
        )
    return ChromosomeModel(
        groups=[groups[label] for label in order],
        normalization=NormalizationStats(feat_min=feat_min, feat_max=feat_max),
        range_used=range_used,
        training_size=training_size,
    )
