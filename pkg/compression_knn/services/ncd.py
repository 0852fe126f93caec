"""Normalized Compression Distance and train x query distance matrices."""

import logging
from typing import List, Optional, Sequence

import numpy as np

from compression_knn.config import CompressorConfig
from compression_knn.errors import EmptyQuerySet, EmptyTrainSet
from compression_knn.models.distances import DistanceMatrix
from compression_knn.services.compressor import (
    DEFAULT_CONFIG,
    compress_len,
    compress_len_concat,
)
from compression_knn.shared_libraries.parallel import ordered_map

logger = logging.getLogger(__name__)

# Compressor imperfection keeps NCD slightly above 1 for unrelated inputs.
NCD_CEILING = 1.5


def ncd_from_lengths(c_x: int, c_y: int, c_xy: int) -> float:
    """(C(xy) - min(C(x), C(y))) / max(C(x), C(y)) on precomputed lengths."""
    return (c_xy - min(c_x, c_y)) / max(c_x, c_y)


def ncd(x: bytes, y: bytes, cfg: CompressorConfig = DEFAULT_CONFIG) -> float:
    """Normalized Compression Distance between ``x`` and ``y``.

    The concatenation is taken in the order (x, y); the result is not
    symmetrized.

    Args:
        x: First byte sequence
        y: Second byte sequence
        cfg: Compressor settings

    Returns:
        The distance, finite and non-negative
    """
    return ncd_from_lengths(
        compress_len(x, cfg), compress_len(y, cfg), compress_len_concat(x, y, cfg)
    )


def distance_matrix(
    train: Sequence[bytes],
    queries: Sequence[bytes],
    cfg: CompressorConfig = DEFAULT_CONFIG,
    threads: int = 1,
    row_ids: Optional[List[str]] = None,
    col_ids: Optional[List[str]] = None,
) -> DistanceMatrix:
    """Compute ``ncd(train[i], queries[j])`` for every pair.

    Single-sequence lengths are computed once and reused. Rows are spread over
    ``threads`` workers; each cell is computed by the same arithmetic as
    :func:`ncd`, so the matrix is bitwise identical for any thread count.

    Args:
        train: Training byte sequences (rows)
        queries: Query byte sequences (columns)
        cfg: Compressor settings
        threads: Worker threads
        row_ids: Optional identifiers for the rows
        col_ids: Optional identifiers for the columns

    Returns:
        A ``len(train) x len(queries)`` DistanceMatrix
    """
    if not train:
        raise EmptyTrainSet("distance matrix needs at least one training sequence")
    if not queries:
        raise EmptyQuerySet("distance matrix needs at least one query")

    train = list(train)
    queries = list(queries)
    train_lengths = ordered_map(lambda s: compress_len(s, cfg), train, threads)
    query_lengths = ordered_map(lambda s: compress_len(s, cfg), queries, threads)

    def compute_row(i: int) -> List[float]:
        x, c_x = train[i], train_lengths[i]
        return [
            ncd_from_lengths(c_x, c_y, compress_len_concat(x, y, cfg))
            for y, c_y in zip(queries, query_lengths)
        ]

    rows = ordered_map(compute_row, range(len(train)), threads)
    logger.debug(
        "distance matrix %dx%d computed with %d thread(s)", len(train), len(queries), threads
    )
    return DistanceMatrix(
        values=np.array(rows, dtype=np.float64).reshape(len(train), len(queries)),
        row_ids=list(row_ids) if row_ids else [],
        col_ids=list(col_ids) if col_ids else [],
    )
