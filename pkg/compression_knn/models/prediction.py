"""kNN prediction model."""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional


@dataclass(frozen=True)
class Neighbor:
    """One selected training item."""

    index: int
    item_id: str
    label: str
    distance: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "id": self.item_id,
            "label": self.label,
            "distance": round(self.distance, 6),
        }


@dataclass
class Prediction:
    """
    Outcome of a kNN vote for a single query.

    Attributes:
        label: Predicted label
        neighbors: The ``min(k, n)`` nearest training items, sorted by
            (distance, training index)
        tally: Vote count per label among the neighbors
        k: The k requested
        query_id: Identifier of the query, when known
    """

    label: str
    neighbors: List[Neighbor]
    tally: Dict[str, int]
    k: int
    query_id: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "query": self.query_id,
            "label": self.label,
            "k": self.k,
            "neighbors": [n.to_dict() for n in self.neighbors],
            "tally": dict(sorted(self.tally.items())),
        }
