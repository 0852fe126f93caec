"""Corpus models: the prepared dataset manifest and the labeled training corpus."""

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

from compression_knn.errors import EmptyTrainSet


@dataclass(frozen=True)
class CorpusRecord:
    """One canonicalized image in a prepared corpus."""

    source_path: str  # relative to the dataset root, POSIX separators
    label: str
    digest: str  # sha256 of the canonical blob

    @property
    def item_id(self) -> str:
        return f"{self.label}/{self.source_path.rsplit('/', 1)[-1]}"

    def to_dict(self) -> Dict[str, Any]:
        return {"source_path": self.source_path, "label": self.label, "digest": self.digest}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CorpusRecord":
        return cls(source_path=data["source_path"], label=data["label"], digest=data["digest"])


@dataclass
class CorpusManifest:
    """
    Description of a prepared corpus and its cached canonical blobs.

    Attributes:
        dataset: Human readable corpus name
        classes: Declared class names, sorted
        records: One record per canonical image, sorted by (label, source_path)
        side: Canonical side length in pixels
        grayscale_formula: Identifier of the luma formula used
        codec: Snapshot of the compressor configuration used to prepare the corpus
    """

    dataset: str
    classes: List[str]
    records: List[CorpusRecord]
    side: int
    grayscale_formula: str
    codec: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        unknown = {r.label for r in self.records} - set(self.classes)
        if unknown:
            raise ValueError(f"records use undeclared classes: {sorted(unknown)}")

    def records_for(self, label: str) -> List[CorpusRecord]:
        return [r for r in self.records if r.label == label]

    def class_sizes(self) -> Dict[str, int]:
        return {name: len(self.records_for(name)) for name in self.classes}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dataset": self.dataset,
            "classes": list(self.classes),
            "records": [r.to_dict() for r in self.records],
            "side": self.side,
            "grayscale_formula": self.grayscale_formula,
            "codec": dict(self.codec),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CorpusManifest":
        return cls(
            dataset=data["dataset"],
            classes=list(data["classes"]),
            records=[CorpusRecord.from_dict(r) for r in data.get("records", [])],
            side=int(data["side"]),
            grayscale_formula=data["grayscale_formula"],
            codec=dict(data.get("codec", {})),
        )

    def digest(self) -> str:
        """sha256 over the canonical JSON form of the manifest."""
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CorpusItem:
    """A byte sequence with its label and a stable identifier."""

    item_id: str
    data: bytes
    label: str


@dataclass
class LabeledCorpus:
    """The kNN "model": labeled byte sequences consulted at prediction time."""

    items: List[CorpusItem]

    def __post_init__(self) -> None:
        if not self.items:
            raise EmptyTrainSet("a labeled corpus needs at least one item")

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple]) -> "LabeledCorpus":
        """Build from ``(data, label)`` pairs, numbering items by position."""
        return cls(
            items=[CorpusItem(item_id=str(i), data=data, label=label) for i, (data, label) in enumerate(pairs)]
        )

    @property
    def labels(self) -> List[str]:
        return [item.label for item in self.items]

    @property
    def label_set(self) -> List[str]:
        return sorted(set(self.labels))

    @property
    def sequences(self) -> List[bytes]:
        return [item.data for item in self.items]

    def __len__(self) -> int:
        return len(self.items)
