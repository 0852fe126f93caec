"""
Record types for compression_knn.

This module imports all models to make them available from the models package.
"""

from compression_knn.models.corpus import CorpusItem, CorpusManifest, CorpusRecord, LabeledCorpus
from compression_knn.models.distances import DistanceMatrix
from compression_knn.models.images import CanonicalImage, RawImage
from compression_knn.models.prediction import Neighbor, Prediction
from compression_knn.models.results import (
    ModelSizeReport,
    RatioAggregate,
    RunRecord,
    SplitSpec,
    SweepResult,
)

__all__ = [
    "CanonicalImage",
    "CorpusItem",
    "CorpusManifest",
    "CorpusRecord",
    "DistanceMatrix",
    "LabeledCorpus",
    "ModelSizeReport",
    "Neighbor",
    "Prediction",
    "RatioAggregate",
    "RawImage",
    "RunRecord",
    "SplitSpec",
    "SweepResult",
]
