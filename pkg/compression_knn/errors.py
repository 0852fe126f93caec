"""Error types for compression_knn.

Every error raised on purpose by the package derives from
``CompressionKnnError``. Errors that describe a bad argument also derive from
``ValueError`` so callers that only know the builtin still catch them.
"""

from pathlib import Path
from typing import Optional, Union


class CompressionKnnError(Exception):
    """Base class for all compression_knn errors."""


class ConfigError(CompressionKnnError, ValueError):
    """The command line or run configuration is invalid."""


class EmptyTrainSet(CompressionKnnError, ValueError):
    """A distance matrix or classification was requested with no training items."""


class EmptyQuerySet(CompressionKnnError, ValueError):
    """A distance matrix was requested with no queries."""


class UnsupportedChannelCount(CompressionKnnError, ValueError):
    """An image has a channel count other than 1, 3 or 4."""

    def __init__(self, channels: int, message: Optional[str] = None):
        self.channels = channels
        super().__init__(message or f"unsupported channel count: {channels} (expected 1, 3 or 4)")


class InvalidSide(CompressionKnnError, ValueError):
    """The canonical side length is smaller than one pixel."""


class InvalidK(CompressionKnnError, ValueError):
    """k is smaller than one."""


class LengthMismatch(CompressionKnnError, ValueError):
    """Distances and labels differ in length, or are empty."""


class MissingClassDir(CompressionKnnError):
    """A declared class has no directory under the dataset root."""

    def __init__(self, class_name: str, root: Union[str, Path]):
        self.class_name = class_name
        self.root = Path(root)
        super().__init__(f"missing class directory {class_name!r} under {self.root}")


class UndecodableImage(CompressionKnnError):
    """An image file could not be decoded."""

    def __init__(self, path: Union[str, Path], reason: str = ""):
        self.path = Path(path)
        detail = f": {reason}" if reason else ""
        super().__init__(f"cannot decode image {self.path}{detail}")


class InsufficientImages(CompressionKnnError):
    """A class holds fewer images than the per-class cap."""

    def __init__(self, class_name: str, available: int, required: int):
        self.class_name = class_name
        self.available = available
        self.required = required
        super().__init__(
            f"class {class_name!r} has {available} images, {required} required"
        )


class DegenerateSplit(CompressionKnnError):
    """A stratified split would leave a class with no train or no test items."""


class MalformedCsv(CompressionKnnError):
    """A results CSV is empty or does not follow the results format."""


class CacheError(CompressionKnnError):
    """A cached canonical blob is missing or does not match its digest."""
