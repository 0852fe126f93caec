"""Shared fixtures for the unit tests."""

import numpy as np
import pytest

from compression_knn.services.dataset_service import ingest_dataset
from compression_knn.shared_libraries.synthetic import write_synthetic_dataset


@pytest.fixture
def random_bytes():
    """Factory for seeded random byte strings."""

    def make(size: int, seed: int = 0) -> bytes:
        return np.random.default_rng(seed).bytes(size)

    return make


@pytest.fixture
def synthetic_root(tmp_path):
    """A two-class PNG dataset with 6 images per class."""
    root = tmp_path / "synthetic"
    write_synthetic_dataset(root, per_class=6, seed=3)
    return root


@pytest.fixture
def prepared_cache(synthetic_root, tmp_path):
    """The synthetic dataset prepared into a canonical cache."""
    cache = tmp_path / "cache"
    ingest_dataset(synthetic_root, cache, seed=3, dataset="synthetic")
    return cache
