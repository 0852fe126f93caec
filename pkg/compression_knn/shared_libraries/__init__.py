"""Shared helpers for compression_knn services."""

from compression_knn.shared_libraries.atomic_io import write_bytes, write_json, write_text
from compression_knn.shared_libraries.parallel import ordered_map
from compression_knn.shared_libraries.seeding import derive_seed, splitmix64

__all__ = [
    "write_bytes",
    "write_json",
    "write_text",
    "ordered_map",
    "derive_seed",
    "splitmix64",
]
