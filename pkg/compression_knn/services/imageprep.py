"""
Image canonicalization.

Source images become fixed-size grayscale rasters serialized as headerless
row-major bytes; those bytes are what the compressor sees. Grayscale
conversion and resampling are done here in exact integer arithmetic rather
than through Pillow, so every platform produces the same bytes.
"""

import io
import logging
from pathlib import Path
from typing import Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from compression_knn.config import DEFAULT_SIDE
from compression_knn.errors import InvalidSide, UndecodableImage, UnsupportedChannelCount
from compression_knn.models.images import SUPPORTED_CHANNELS, CanonicalImage, RawImage

logger = logging.getLogger(__name__)

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".pgm")

# ITU-R BT.601 luma weights in thousandths; they sum to 1000.
GRAYSCALE_FORMULA_ID = "bt601-round-half-away"
LUMA_WEIGHTS = (299, 587, 114)

_SIXTEEN_BIT_MODES = ("I", "I;16", "I;16B", "I;16L", "I;16N")


def is_image_file(path: Path) -> bool:
    return path.is_file() and path.suffix.lower() in IMAGE_EXTENSIONS


def decode_image(path: Union[str, Path]) -> RawImage:
    """Decode an image file into a RawImage with 1, 3 or 4 channels.

    Palette images expand to RGB (RGBA with transparency), bilevel and
    luminance-alpha images reduce to luminance, 16-bit grayscale is scaled to
    8 bits, and any other mode is converted to RGB.

    Args:
        path: Image file path

    Returns:
        The decoded image

    Raises:
        UndecodableImage: If Pillow cannot read the file
    """
    path = Path(path)
    try:
        with Image.open(path) as image:
            image.load()
            return _to_raw(image)
    except (UnidentifiedImageError, OSError, ValueError, SyntaxError) as e:
        raise UndecodableImage(path, str(e)) from e


def _to_raw(image: Image.Image) -> RawImage:
    mode = image.mode
    if mode in ("L", "RGB", "RGBA"):
        return RawImage.from_array(np.asarray(image, dtype=np.uint8))
    if mode in ("1", "LA", "La"):
        return RawImage.from_array(np.asarray(image.convert("L"), dtype=np.uint8))
    if mode in ("P", "PA"):
        target = "RGBA" if mode == "PA" or "transparency" in image.info else "RGB"
        return RawImage.from_array(np.asarray(image.convert(target), dtype=np.uint8))
    if mode in _SIXTEEN_BIT_MODES:
        wide = np.clip(np.asarray(image, dtype=np.int64), 0, 65535)
        return RawImage.from_array(((wide * 255 + 32767) // 65535).astype(np.uint8))
    if mode == "F":
        values = np.clip(np.floor(np.asarray(image, dtype=np.float64) + 0.5), 0, 255)
        return RawImage.from_array(values.astype(np.uint8))
    return RawImage.from_array(np.asarray(image.convert("RGB"), dtype=np.uint8))


def to_grayscale(img: RawImage) -> RawImage:
    """Convert to one channel with BT.601 luma, rounding half away from zero.

    One-channel input is returned unchanged; a fourth (alpha) channel is ignored.
    """
    if img.channels not in SUPPORTED_CHANNELS:
        raise UnsupportedChannelCount(img.channels)
    if img.channels == 1:
        return img
    px = img.pixels.astype(np.int64)
    wr, wg, wb = LUMA_WEIGHTS
    weighted = wr * px[..., 0] + wg * px[..., 1] + wb * px[..., 2]
    gray = (weighted + 500) // 1000
    return RawImage(width=img.width, height=img.height, channels=1, pixels=gray.astype(np.uint8))


def _coverage_weights(src: int, dst: int) -> np.ndarray:
    """Integer overlap between output cells and source pixels along one axis.

    Coordinates are scaled by ``src * dst`` so every boundary is an integer:
    output cell ``o`` spans ``[o*src, (o+1)*src)`` and source pixel ``s`` spans
    ``[s*dst, (s+1)*dst)``. Each row sums to ``src``.
    """
    out_idx = np.arange(dst, dtype=np.int64)[:, None]
    src_idx = np.arange(src, dtype=np.int64)[None, :]
    lo = np.maximum(out_idx * src, src_idx * dst)
    hi = np.minimum((out_idx + 1) * src, (src_idx + 1) * dst)
    return np.clip(hi - lo, 0, None)


def resize(img: RawImage, side: int = DEFAULT_SIDE) -> CanonicalImage:
    """Area-weighted box resampling to ``side x side``.

    Each output sample is the coverage-weighted mean of the source region it
    maps to, rounded half away from zero. Upscaling uses the same fractional
    coverage. All arithmetic is integer, so results are exact.

    Args:
        img: A one-channel image
        side: Output side length in pixels

    Returns:
        The canonical image
    """
    if side < 1:
        raise InvalidSide(f"side must be >= 1, got {side}")
    if not img.is_grayscale:
        raise UnsupportedChannelCount(img.channels, "resize expects a one-channel image")
    if img.width == side and img.height == side:
        return CanonicalImage(side=side, pixels=img.pixels[..., 0].copy())

    wy = _coverage_weights(img.height, side)
    wx = _coverage_weights(img.width, side)
    numerator = wy @ img.pixels[..., 0].astype(np.int64) @ wx.T
    denominator = img.height * img.width
    samples = (2 * numerator + denominator) // (2 * denominator)
    return CanonicalImage(side=side, pixels=samples.astype(np.uint8))


def canonicalize(img: RawImage, side: int = DEFAULT_SIDE) -> CanonicalImage:
    """Grayscale then resize."""
    return resize(to_grayscale(img), side)


def canonicalize_file(path: Union[str, Path], side: int = DEFAULT_SIDE) -> CanonicalImage:
    """Decode and canonicalize one image file."""
    canonical = canonicalize(decode_image(path), side)
    logger.debug("canonicalized %s", path)
    return canonical


def serialize(img: CanonicalImage) -> bytes:
    """Raw row-major samples, no header or padding; ``side**2`` bytes."""
    return img.pixels.tobytes(order="C")


def deserialize(data: bytes, side: int = DEFAULT_SIDE) -> CanonicalImage:
    """Re-wrap serialized samples as a CanonicalImage."""
    if len(data) != side * side:
        raise ValueError(f"expected {side * side} bytes for side {side}, got {len(data)}")
    return CanonicalImage(side=side, pixels=np.frombuffer(data, dtype=np.uint8))


def encode_png(img: CanonicalImage) -> bytes:
    """Lossless PNG encoding of a canonical image."""
    buffer = io.BytesIO()
    Image.fromarray(img.pixels).save(buffer, format="PNG")
    return buffer.getvalue()
