"""Seeded two-class image corpus for demos and acceptance tests.

Class ``flat`` holds constant-value images, class ``noise`` holds uniform
random images. Under gzip the two are far apart (noise is incompressible,
flat images compress to a few bytes), so a compression kNN separates them
perfectly.
"""

import logging
from pathlib import Path
from typing import Dict, Sequence, Union

import numpy as np

from compression_knn.config import DEFAULT_SIDE
from compression_knn.models.images import CanonicalImage
from compression_knn.services.imageprep import encode_png
from compression_knn.shared_libraries.atomic_io import write_bytes
from compression_knn.shared_libraries.seeding import derive_seed

logger = logging.getLogger(__name__)

SYNTHETIC_CLASSES = ("flat", "noise")


def synthetic_image(kind: str, rng: np.random.Generator, side: int = DEFAULT_SIDE) -> np.ndarray:
    """One ``side x side`` uint8 image of the given kind."""
    if kind == "flat":
        return np.full((side, side), rng.integers(0, 256), dtype=np.uint8)
    if kind == "noise":
        return rng.integers(0, 256, size=(side, side), dtype=np.uint8)
    raise ValueError(f"unknown synthetic class: {kind}")


def write_synthetic_dataset(
    root: Union[str, Path],
    per_class: int = 20,
    side: int = DEFAULT_SIDE,
    seed: int = 0,
    classes: Sequence[str] = SYNTHETIC_CLASSES,
) -> Dict[str, int]:
    """Write ``per_class`` PNG images into ``root/<class>/`` for each class.

    Args:
        root: Dataset root; created if missing
        per_class: Images per class
        side: Image side length
        seed: Generator seed; the same seed writes the same files
        classes: Subset of SYNTHETIC_CLASSES

    Returns:
        Number of images written per class
    """
    root = Path(root)
    counts: Dict[str, int] = {}
    for class_index, kind in enumerate(classes):
        rng = np.random.default_rng(derive_seed(seed, class_index))
        for i in range(per_class):
            pixels = synthetic_image(kind, rng, side)
            write_bytes(root / kind / f"{kind}_{i:03d}.png", encode_png(CanonicalImage(side, pixels)))
        counts[kind] = per_class
        logger.info("wrote %d %s image(s) under %s", per_class, kind, root / kind)
    return counts
