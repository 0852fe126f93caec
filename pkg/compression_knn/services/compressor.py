"""
Compressed-length oracle.

The compressed length of a byte sequence stands in for its Kolmogorov
complexity. Lengths are measured on a complete gzip member (RFC 1952 framing
around a raw RFC 1951 DEFLATE stream) assembled here rather than by the
``gzip`` module, so the header bytes are pinned: mtime 0, no file name, OS 255.
The framing adds 18 bytes to every member.
"""

import struct
import time
import zlib
from typing import NewType

from compression_knn.config import Codec, CompressorConfig

CompressedLength = NewType("CompressedLength", int)

GZIP_MAGIC = b"\x1f\x8b"
GZIP_METHOD_DEFLATE = 8
GZIP_OS_UNKNOWN = 255
GZIP_FRAMING_BYTES = 18  # 10 header + 8 trailer

# zlib flushes a block every 16383 symbols (lit_bufsize - 1 at the default
# memLevel); a stored block costs 5 bytes of header.
STORED_BLOCK_SPAN = 16383
STORED_BLOCK_HEADER = 5

DEFAULT_CONFIG = CompressorConfig()


def _extra_flags(level: int) -> int:
    if level == 9:
        return 2
    if level == 1:
        return 4
    return 0


def gzip_header(cfg: CompressorConfig) -> bytes:
    """The fixed 10-byte member header for ``cfg``."""
    mtime = 0 if cfg.header_normalization else int(time.time())
    return GZIP_MAGIC + struct.pack(
        "<BBIBB", GZIP_METHOD_DEFLATE, 0, mtime, _extra_flags(cfg.level), GZIP_OS_UNKNOWN
    )


def gzip_member(data: bytes, cfg: CompressorConfig = DEFAULT_CONFIG) -> bytes:
    """Compress ``data`` into a single gzip member.

    A fresh compressor object is created per call; nothing is shared between
    calls, so this is safe to run from many threads.

    Args:
        data: Bytes to compress; may be empty
        cfg: Compressor settings

    Returns:
        The complete gzip member
    """
    if cfg.codec is not Codec.GZIP_DEFLATE:
        raise ValueError(f"unsupported codec: {cfg.codec}")
    deflater = zlib.compressobj(
        cfg.level, zlib.DEFLATED, -zlib.MAX_WBITS, zlib.DEF_MEM_LEVEL, zlib.Z_DEFAULT_STRATEGY
    )
    body = deflater.compress(data) + deflater.flush()
    trailer = struct.pack("<II", zlib.crc32(data) & 0xFFFFFFFF, len(data) & 0xFFFFFFFF)
    return gzip_header(cfg) + body + trailer


def compress_len(data: bytes, cfg: CompressorConfig = DEFAULT_CONFIG) -> CompressedLength:
    """Byte length of the gzip member of ``data``."""
    return CompressedLength(len(gzip_member(data, cfg)))


def compress_bound(raw_len: int) -> int:
    """Worst-case gzip member length for ``raw_len`` input bytes.

    Every block spans at least ``STORED_BLOCK_SPAN`` input bytes except the
    last, and an empty final block may follow a full one.
    """
    blocks = -(-raw_len // STORED_BLOCK_SPAN) + 1
    return raw_len + GZIP_FRAMING_BYTES + STORED_BLOCK_HEADER * blocks


def compress_len_concat(
    a: bytes, b: bytes, cfg: CompressorConfig = DEFAULT_CONFIG
) -> CompressedLength:
    """Compressed length of ``a`` followed by ``b``, with no separator."""
    return compress_len(a + b, cfg)
