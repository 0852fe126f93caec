"""Distance matrix model."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np


@dataclass
class DistanceMatrix:
    """
    NCD values between training items (rows) and queries (columns).

    ``values[i, j]`` is the distance from training item ``i`` to query ``j``.
    """

    values: np.ndarray
    row_ids: List[str] = field(default_factory=list)
    col_ids: List[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("distance matrix must be two-dimensional")
        rows, cols = self.values.shape
        self.row_ids = self.row_ids or [str(i) for i in range(rows)]
        self.col_ids = self.col_ids or [str(j) for j in range(cols)]
        if len(self.row_ids) != rows or len(self.col_ids) != cols:
            raise ValueError("row/column ids do not match the matrix shape")

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    def column(self, j: int) -> List[float]:
        """Distances from every training item to query ``j``."""
        return [float(v) for v in self.values[:, j]]

    def flat(self) -> List[float]:
        """Row-major list of all entries."""
        return [float(v) for v in self.values.ravel(order="C")]

    def to_csv_rows(self, precision: int = 6, corner: Optional[str] = "train") -> List[List[str]]:
        """Header row of query ids, then one row per training item."""
        rows = [[corner or ""] + list(self.col_ids)]
        for i, row_id in enumerate(self.row_ids):
            rows.append([row_id] + [f"{v:.{precision}f}" for v in self.values[i]])
        return rows
