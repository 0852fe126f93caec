"""Image models for compression_knn."""

from dataclasses import dataclass

import numpy as np

from compression_knn.errors import InvalidSide, UnsupportedChannelCount

SUPPORTED_CHANNELS = (1, 3, 4)


@dataclass
class RawImage:
    """
    A decoded source image before canonicalization.

    Pixels are 8-bit samples held as a ``(height, width, channels)`` array;
    flat row-major interleaved input is reshaped on construction.
    """

    width: int
    height: int
    channels: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image must be at least 1x1, got {self.width}x{self.height}")
        if self.channels not in SUPPORTED_CHANNELS:
            raise UnsupportedChannelCount(self.channels)
        pixels = np.asarray(self.pixels)
        expected = self.width * self.height * self.channels
        if pixels.size != expected:
            raise ValueError(
                f"expected {expected} samples for {self.width}x{self.height}x"
                f"{self.channels}, got {pixels.size}"
            )
        if pixels.size and (pixels.min() < 0 or pixels.max() > 255):
            raise ValueError("samples must lie in [0, 255]")
        self.pixels = np.ascontiguousarray(pixels, dtype=np.uint8).reshape(
            self.height, self.width, self.channels
        )

    @classmethod
    def from_array(cls, array: np.ndarray) -> "RawImage":
        """Wrap a ``(h, w)`` or ``(h, w, c)`` array."""
        array = np.asarray(array)
        if array.ndim == 2:
            return cls(width=array.shape[1], height=array.shape[0], channels=1, pixels=array)
        if array.ndim == 3:
            return cls(
                width=array.shape[1],
                height=array.shape[0],
                channels=array.shape[2],
                pixels=array,
            )
        raise ValueError(f"expected a 2-D or 3-D array, got {array.ndim} dimensions")

    @property
    def is_grayscale(self) -> bool:
        return self.channels == 1


@dataclass
class CanonicalImage:
    """A ``side x side`` 8-bit grayscale raster, the unit of classification."""

    side: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        if self.side < 1:
            raise InvalidSide(f"side must be >= 1, got {self.side}")
        pixels = np.asarray(self.pixels)
        if pixels.size != self.side * self.side:
            raise ValueError(
                f"expected {self.side * self.side} samples for side {self.side}, "
                f"got {pixels.size}"
            )
        if pixels.size and (pixels.min() < 0 or pixels.max() > 255):
            raise ValueError("samples must lie in [0, 255]")
        self.pixels = np.ascontiguousarray(pixels, dtype=np.uint8).reshape(self.side, self.side)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CanonicalImage):
            return NotImplemented
        return self.side == other.side and np.array_equal(self.pixels, other.pixels)
