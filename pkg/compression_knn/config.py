"""
Configuration for compression_knn.

Two validated models live here:
  - CompressorConfig: the compressor settings every length and distance depends on
  - RunConfig: one command-line invocation, checked before any work starts

Nothing here reads the environment; every value arrives through flags.
"""

import logging
import zlib
from decimal import Decimal, InvalidOperation
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from compression_knn.errors import ConfigError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

DEFAULT_SIDE = 32
DEFAULT_LEVEL = 6
DEFAULT_K = 1
DEFAULT_REPETITIONS = 5
DEFAULT_RATIOS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
MAX_SEED = 2**64 - 1

# Binary corpora built from the public five-class rice image dataset.
DATASET_PRESETS: Dict[str, List[str]] = {
    "jasmine-basmati": ["Jasmine", "Basmati"],
    "arborio-karacadag": ["Arborio", "Karacadag"],
}
PRESET_CAP = 80

SUBCOMMANDS = ("prepare", "ncd", "matrix", "classify", "eval", "report")


class Codec(str, Enum):
    """Compressed-length codecs."""

    GZIP_DEFLATE = "gzip-deflate"


class CompressorConfig(BaseModel):
    """Settings of the compressed-length oracle.

    Instances are immutable and hashable so they can key caches and be shared
    between worker threads.
    """

    model_config = ConfigDict(frozen=True)

    codec: Codec = Codec.GZIP_DEFLATE
    level: int = Field(DEFAULT_LEVEL, ge=1, le=9)
    header_normalization: bool = Field(
        True, description="Zero the gzip timestamp and pin the OS byte"
    )

    def encoder_identity(self) -> str:
        """Name and runtime version of the DEFLATE encoder behind the codec."""
        return f"zlib {zlib.ZLIB_RUNTIME_VERSION}"

    def snapshot(self) -> Dict[str, Any]:
        """Serializable record of the codec for manifests."""
        return {
            "codec": self.codec.value,
            "level": self.level,
            "header_normalization": self.header_normalization,
            "encoder": self.encoder_identity(),
        }

    @classmethod
    def from_snapshot(cls, data: Dict[str, Any]) -> "CompressorConfig":
        return cls(
            codec=data.get("codec", Codec.GZIP_DEFLATE.value),
            level=data.get("level", DEFAULT_LEVEL),
            header_normalization=data.get("header_normalization", True),
        )


def parse_ratio_grid(text: str) -> List[float]:
    """Parse a ratio grid.

    Accepts ``start:stop:step`` (stop inclusive), a comma separated list, or a
    single value. Decimal arithmetic keeps ``0.1:0.9:0.1`` at exactly nine
    points.

    Args:
        text: The grid as given on the command line

    Returns:
        The ratios in the order given, as floats
    """
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ConfigError(f"ratio grid must be start:stop:step, got {text!r}")
            start, stop, step = (Decimal(p) for p in parts)
            if step <= 0:
                raise ConfigError(f"ratio grid step must be positive, got {step}")
            ratios = []
            value = start
            while value <= stop:
                ratios.append(float(value))
                value += step
            return ratios
        return [float(Decimal(p)) for p in text.split(",") if p.strip()]
    except InvalidOperation as e:
        raise ConfigError(f"invalid ratio grid {text!r}") from e


def parse_int_list(text: str) -> List[int]:
    """Parse ``1,3,5`` into integers."""
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise ConfigError(f"expected a comma separated list of integers, got {text!r}") from e


def ratio_key(ratio: float) -> int:
    """A ratio in millionths; used wherever a ratio feeds a seed or a dict key."""
    return int(round(ratio * 1_000_000))


def configure_logging(level: str = "WARNING") -> None:
    """Configure the root logger for command-line runs."""
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, force=True)


class RunConfig(BaseModel):
    """Validated configuration of one CLI invocation."""

    model_config = ConfigDict(frozen=True)

    subcommand: Literal["prepare", "ncd", "matrix", "classify", "eval", "report"]
    positional: List[str] = Field(default_factory=list)

    # Paths
    root: Optional[Path] = None
    out: Optional[Path] = None
    cache: Optional[Path] = None
    model: Optional[Path] = None
    input: Optional[Path] = None
    train: Optional[Path] = None
    queries: Optional[Path] = None
    svg: Optional[Path] = None

    # Dataset selection
    dataset: Optional[str] = None
    classes: Optional[List[str]] = None
    preset: Optional[str] = None
    cap: Optional[int] = Field(None, ge=1)

    # Numeric knobs
    seed: int = Field(0, ge=0, le=MAX_SEED)
    side: int = Field(DEFAULT_SIDE, ge=1)
    gzip_level: int = Field(DEFAULT_LEVEL, ge=1, le=9)
    k: List[int] = Field(default_factory=lambda: [DEFAULT_K])
    ratios: List[float] = Field(default_factory=lambda: list(DEFAULT_RATIOS))
    reps: int = Field(DEFAULT_REPETITIONS, ge=1)
    threads: int = Field(1, ge=1)

    @field_validator("k")
    @classmethod
    def _check_k(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("at least one k is required")
        for k in value:
            if k < 1:
                raise ValueError(f"k must be >= 1, got {k}")
        return value

    @field_validator("ratios")
    @classmethod
    def _check_ratios(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("at least one ratio is required")
        for ratio in value:
            if not 0.0 < ratio < 1.0:
                raise ValueError(f"ratio must lie strictly between 0 and 1, got {ratio}")
        if len({ratio_key(r) for r in value}) != len(value):
            raise ValueError("ratios must be distinct")
        return value

    @field_validator("preset")
    @classmethod
    def _check_preset(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in DATASET_PRESETS:
            raise ValueError(
                f"unknown preset {value!r}; choose from {sorted(DATASET_PRESETS)}"
            )
        return value

    @model_validator(mode="after")
    def _check_subcommand_inputs(self) -> "RunConfig":
        required = {
            "prepare": ("root", "out"),
            "matrix": ("train", "queries"),
            "classify": ("model", "input"),
            "eval": ("cache", "out"),
        }.get(self.subcommand, ())
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            flags = ", ".join(f"--{name}" for name in missing)
            raise ValueError(f"{self.subcommand} requires {flags}")

        expected_positional = {"ncd": 2, "report": 1}.get(self.subcommand, 0)
        if len(self.positional) != expected_positional:
            raise ValueError(
                f"{self.subcommand} takes {expected_positional} positional "
                f"argument(s), got {len(self.positional)}"
            )
        if self.subcommand == "classify" and len(self.k) != 1:
            raise ValueError("classify takes a single k")
        if self.preset and self.classes:
            raise ValueError("--preset and --classes are mutually exclusive")
        return self

    def compressor(self) -> CompressorConfig:
        return CompressorConfig(level=self.gzip_level)

    def selected_classes(self) -> Optional[List[str]]:
        if self.preset:
            return list(DATASET_PRESETS[self.preset])
        return list(self.classes) if self.classes else None

    def per_class_cap(self) -> Optional[int]:
        if self.cap is None and self.preset:
            return PRESET_CAP
        return self.cap

    def dataset_name(self) -> str:
        if self.dataset:
            return self.dataset
        if self.preset:
            return self.preset
        return self.root.resolve().name if self.root else "corpus"

    def snapshot(self) -> Dict[str, Any]:
        """JSON-ready copy of every field, for run manifests."""
        return self.model_dump(mode="json")
