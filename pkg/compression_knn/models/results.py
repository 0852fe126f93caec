"""Evaluation models: split specifications, sweep records and model-size reports."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from compression_knn.errors import ConfigError


@dataclass(frozen=True)
class SplitSpec:
    """
    One stratified train/test split request.

    Attributes:
        train_ratio: Fraction of each class assigned to training, in (0, 1)
        repetition: Repetition index, >= 0
        base_seed: 64-bit base seed of the sweep
        stratified: Always true; kept explicit so manifests record it
    """

    train_ratio: float
    repetition: int = 0
    base_seed: int = 0
    stratified: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.train_ratio < 1.0:
            raise ConfigError(f"train_ratio must lie in (0, 1), got {self.train_ratio}")
        if self.repetition < 0:
            raise ConfigError(f"repetition must be >= 0, got {self.repetition}")
        if not self.stratified:
            raise ConfigError("only stratified splits are supported")


@dataclass(frozen=True)
class RunRecord:
    """Accuracy of one (ratio, repetition) cell."""

    dataset: str
    ratio: float
    repetition: int
    seed: int
    k: int
    gzip_level: int
    side: int
    train_count: int
    test_count: int
    correct: int
    model_raw_bytes: int = 0
    model_compressed_bytes: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.test_count

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dataset": self.dataset,
            "ratio": self.ratio,
            "repetition": self.repetition,
            "seed": self.seed,
            "k": self.k,
            "gzip_level": self.gzip_level,
            "side": self.side,
            "train_count": self.train_count,
            "test_count": self.test_count,
            "correct": self.correct,
            "accuracy": self.accuracy,
            "model_raw_bytes": self.model_raw_bytes,
            "model_compressed_bytes": self.model_compressed_bytes,
        }


@dataclass(frozen=True)
class RatioAggregate:
    """Mean and sample standard deviation of accuracy over repetitions of one ratio."""

    dataset: str
    ratio: float
    k: int
    gzip_level: int
    side: int
    base_seed: int
    train_count: int
    test_count: int
    mean: float
    std: float
    n: int
    minimum: float
    maximum: float
    model_raw_bytes: int = 0
    model_compressed_bytes: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dataset": self.dataset,
            "ratio": self.ratio,
            "k": self.k,
            "gzip_level": self.gzip_level,
            "side": self.side,
            "base_seed": self.base_seed,
            "train_count": self.train_count,
            "test_count": self.test_count,
            "mean": self.mean,
            "std": self.std,
            "n": self.n,
            "min": self.minimum,
            "max": self.maximum,
            "model_raw_bytes": self.model_raw_bytes,
            "model_compressed_bytes": self.model_compressed_bytes,
        }


@dataclass
class SweepResult:
    """Per-cell records and per-ratio aggregates of one sweep."""

    records: List[RunRecord] = field(default_factory=list)
    aggregates: List[RatioAggregate] = field(default_factory=list)

    def aggregate_for(self, ratio: float, k: Optional[int] = None) -> RatioAggregate:
        for agg in self.aggregates:
            if agg.ratio == ratio and (k is None or agg.k == k):
                return agg
        raise KeyError(f"no aggregate for ratio {ratio} (k={k})")


@dataclass(frozen=True)
class ModelSizeReport:
    """
    Storage footprint of a training corpus.

    The label table stores one byte per item: the index of the item's label in
    the sorted label set.
    """

    raw_bytes: int
    compressed_bytes: int
    item_count: int
    labels: List[str] = field(default_factory=list)
    label_encoding: str = "one byte per item: index into the sorted label set"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "raw_bytes": self.raw_bytes,
            "compressed_bytes": self.compressed_bytes,
            "item_count": self.item_count,
            "labels": list(self.labels),
            "label_encoding": self.label_encoding,
        }
