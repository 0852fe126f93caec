"""
Few-shot evaluation harness.

A sweep runs, for every train ratio and repetition, a fresh stratified split
of the prepared corpus, classifies every held-out item against the training
part, and records accuracy and the training corpus footprint. Repetitions
re-draw the split; there is nothing else to re-initialize in a parameter-less
model.
"""

import logging
import math
from decimal import ROUND_HALF_UP, Decimal
from typing import Dict, List, Sequence, Tuple

import numpy as np

from compression_knn.config import (
    DEFAULT_K,
    DEFAULT_RATIOS,
    DEFAULT_REPETITIONS,
    CompressorConfig,
    ratio_key,
)
from compression_knn.errors import ConfigError, DegenerateSplit
from compression_knn.models.corpus import CorpusManifest, LabeledCorpus
from compression_knn.models.results import (
    ModelSizeReport,
    RatioAggregate,
    RunRecord,
    SplitSpec,
    SweepResult,
)
from compression_knn.services.classifier import classify_batch
from compression_knn.services.compressor import DEFAULT_CONFIG, compress_len
from compression_knn.services.dataset_service import corpus_from_records
from compression_knn.shared_libraries.parallel import ordered_map
from compression_knn.shared_libraries.seeding import derive_seed

logger = logging.getLogger(__name__)

# Published footprints of the mobile-class networks the method is usually
# compared with, in bytes (1 MB = 10**6 B). Reference values only.
REFERENCE_FOOTPRINTS: Dict[str, int] = {
    "EfficientNetB0": 21_620_000,
    "ResNet18": 46_910_000,
    "MobileNetV3": 2_400_000,
}


def round_half_up(value: Decimal) -> int:
    return int(value.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def per_class_train_count(ratio: float, class_size: int) -> int:
    """round(ratio * class_size), halves rounded up."""
    return round_half_up(Decimal(repr(ratio)) * class_size)


def cell_seed(spec: SplitSpec) -> int:
    """Seed of one (ratio, repetition) cell."""
    return derive_seed(spec.base_seed, ratio_key(spec.train_ratio), spec.repetition)


def stratified_split(manifest: CorpusManifest, spec: SplitSpec) -> Tuple[List[int], List[int]]:
    """Split record indices of ``manifest`` into train and test, per class.

    Each class is shuffled with its own derived generator and the first
    ``round(ratio * n_class)`` shuffled items go to training.

    Args:
        manifest: The prepared corpus
        spec: Ratio, repetition and base seed

    Returns:
        Sorted train indices and sorted test indices into ``manifest.records``

    Raises:
        DegenerateSplit: If any class would contribute nothing to either side
    """
    seed = cell_seed(spec)
    train: List[int] = []
    test: List[int] = []
    for class_index, name in enumerate(manifest.classes):
        members = [i for i, r in enumerate(manifest.records) if r.label == name]
        n_train = per_class_train_count(spec.train_ratio, len(members))
        if n_train < 1 or n_train > len(members) - 1:
            raise DegenerateSplit(
                f"class {name!r} with {len(members)} item(s) gives {n_train} train / "
                f"{len(members) - n_train} test at ratio {spec.train_ratio}"
            )
        rng = np.random.default_rng(derive_seed(seed, class_index))
        shuffled = [members[i] for i in rng.permutation(len(members))]
        train.extend(shuffled[:n_train])
        test.extend(shuffled[n_train:])
    return sorted(train), sorted(test)


def model_size(corpus: LabeledCorpus, cfg: CompressorConfig = DEFAULT_CONFIG) -> ModelSizeReport:
    """Raw and compressed footprint of a training corpus.

    The stored model is every training sequence in corpus order followed by a
    label table of one byte per item (the label's index in the sorted label
    set).

    Args:
        corpus: The training corpus
        cfg: Compressor settings

    Returns:
        The size report
    """
    labels = corpus.label_set
    if len(labels) > 256:
        raise ConfigError(f"a one-byte label table holds at most 256 labels, got {len(labels)}")
    index = {label: i for i, label in enumerate(labels)}
    label_table = bytes(index[label] for label in corpus.labels)
    payload = b"".join(corpus.sequences)
    return ModelSizeReport(
        raw_bytes=len(payload) + len(label_table),
        compressed_bytes=compress_len(payload + label_table, cfg),
        item_count=len(corpus),
        labels=labels,
    )


def _run_cell(
    manifest: CorpusManifest,
    blobs: Dict[str, bytes],
    spec: SplitSpec,
    k: int,
    cfg: CompressorConfig,
) -> RunRecord:
    train_ids, test_ids = stratified_split(manifest, spec)
    corpus = corpus_from_records([manifest.records[i] for i in train_ids], blobs)
    test_records = [manifest.records[i] for i in test_ids]
    queries = corpus_from_records(test_records, blobs).sequences
    predictions = classify_batch(corpus, queries, k, cfg)
    correct = sum(p.label == r.label for p, r in zip(predictions, test_records))
    size = model_size(corpus, cfg)
    record = RunRecord(
        dataset=manifest.dataset,
        ratio=spec.train_ratio,
        repetition=spec.repetition,
        seed=cell_seed(spec),
        k=k,
        gzip_level=cfg.level,
        side=manifest.side,
        train_count=len(train_ids),
        test_count=len(test_ids),
        correct=correct,
        model_raw_bytes=size.raw_bytes,
        model_compressed_bytes=size.compressed_bytes,
    )
    logger.info(
        "ratio %s rep %d: %d/%d correct (accuracy %.4f)",
        spec.train_ratio,
        spec.repetition,
        correct,
        len(test_ids),
        record.accuracy,
    )
    return record


def aggregate(records: Sequence[RunRecord], base_seed: int) -> RatioAggregate:
    """Mean and sample standard deviation over the repetitions of one ratio."""
    accuracies = [r.accuracy for r in records]
    n = len(accuracies)
    lo, hi = min(accuracies), max(accuracies)
    mean = min(max(math.fsum(accuracies) / n, lo), hi)
    std = float(np.std(accuracies, ddof=1)) if n > 1 else 0.0
    first = records[0]
    return RatioAggregate(
        dataset=first.dataset,
        ratio=first.ratio,
        k=first.k,
        gzip_level=first.gzip_level,
        side=first.side,
        base_seed=base_seed,
        train_count=first.train_count,
        test_count=first.test_count,
        mean=mean,
        std=std,
        n=n,
        minimum=lo,
        maximum=hi,
        model_raw_bytes=round_half_up(Decimal(sum(r.model_raw_bytes for r in records)) / n),
        model_compressed_bytes=round_half_up(
            Decimal(sum(r.model_compressed_bytes for r in records)) / n
        ),
    )


def run_sweep(
    manifest: CorpusManifest,
    blobs: Dict[str, bytes],
    ratios: Sequence[float] = tuple(DEFAULT_RATIOS),
    repetitions: int = DEFAULT_REPETITIONS,
    k: int = DEFAULT_K,
    cfg: CompressorConfig = DEFAULT_CONFIG,
    base_seed: int = 0,
    threads: int = 1,
) -> SweepResult:
    """Run every (ratio, repetition) cell and aggregate per ratio.

    Cells are independent and keyed, so they run on ``threads`` workers and
    still assemble in (ratio, repetition) order.

    Args:
        manifest: The prepared corpus
        blobs: Canonical bytes keyed by digest
        ratios: Train ratios, each in (0, 1)
        repetitions: Splits drawn per ratio
        k: Number of neighbours
        cfg: Compressor settings
        base_seed: Base seed of the sweep
        threads: Worker threads across cells

    Returns:
        The sweep result
    """
    if repetitions < 1:
        raise ConfigError(f"repetitions must be >= 1, got {repetitions}")
    specs = [
        SplitSpec(train_ratio=ratio, repetition=rep, base_seed=base_seed)
        for ratio in ratios
        for rep in range(repetitions)
    ]
    # Fail on a degenerate ratio before any cell runs.
    for spec in specs[::repetitions]:
        stratified_split(manifest, spec)

    records = ordered_map(lambda s: _run_cell(manifest, blobs, s, k, cfg), specs, threads)
    aggregates = [
        aggregate(records[i : i + repetitions], base_seed)
        for i in range(0, len(records), repetitions)
    ]
    return SweepResult(records=list(records), aggregates=aggregates)
