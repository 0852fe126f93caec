"""
Dataset ingest and canonical-blob cache.

Layout of a prepared cache directory::

    <cache>/manifest.json          corpus manifest, UTF-8, sorted keys
    <cache>/blobs/<sha256>.bin     one canonical image per file, named by digest
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from compression_knn.config import DEFAULT_SIDE, CompressorConfig
from compression_knn.errors import CacheError, ConfigError, InsufficientImages, MissingClassDir
from compression_knn.models.corpus import CorpusItem, CorpusManifest, CorpusRecord, LabeledCorpus
from compression_knn.services.compressor import DEFAULT_CONFIG
from compression_knn.services.imageprep import (
    GRAYSCALE_FORMULA_ID,
    canonicalize_file,
    is_image_file,
    serialize,
)
from compression_knn.shared_libraries.atomic_io import write_bytes, write_json
from compression_knn.shared_libraries.parallel import ordered_map
from compression_knn.shared_libraries.seeding import derive_seed

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
BLOB_DIR = "blobs"


def blob_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class DatasetService:
    """
    Prepares a class-per-directory image dataset into a canonical cache and
    reads it back.

    Discovery order is lexicographic by file name within each class and
    classes are processed in sorted order, so a fixed seed selects the same
    images on every machine.
    """

    def __init__(self, cache_dir: Union[str, Path], threads: int = 1):
        """Initialize the dataset service.

        Args:
            cache_dir: Directory holding (or receiving) the manifest and blobs
            threads: Worker threads used for canonicalization
        """
        self.cache_dir = Path(cache_dir)
        self.threads = threads

    @property
    def manifest_path(self) -> Path:
        return self.cache_dir / MANIFEST_NAME

    def blob_path(self, digest: str) -> Path:
        return self.cache_dir / BLOB_DIR / f"{digest}.bin"

    # ----- Ingest ----- #

    def discover_classes(self, root: Path, classes: Optional[Sequence[str]]) -> List[str]:
        """Resolve the class list against the directories under ``root``."""
        if not root.is_dir():
            raise ConfigError(f"dataset root {root} is not a directory")
        if classes:
            for name in classes:
                if not (root / name).is_dir():
                    raise MissingClassDir(name, root)
            return sorted(set(classes))
        found = sorted(p.name for p in root.iterdir() if p.is_dir() and not p.name.startswith("."))
        if not found:
            raise ConfigError(f"no class directories under {root}")
        return found

    def select_files(
        self,
        root: Path,
        class_name: str,
        class_index: int,
        per_class_cap: Optional[int],
        seed: int,
    ) -> List[Path]:
        """List a class's images and, when capped, sample them without replacement."""
        files = sorted(
            (p for p in (root / class_name).iterdir() if is_image_file(p)),
            key=lambda p: p.name,
        )
        if per_class_cap is None:
            return files
        if len(files) < per_class_cap:
            raise InsufficientImages(class_name, len(files), per_class_cap)
        rng = np.random.default_rng(derive_seed(seed, class_index))
        chosen = np.sort(rng.choice(len(files), size=per_class_cap, replace=False))
        return [files[i] for i in chosen]

    def ingest(
        self,
        root: Union[str, Path],
        classes: Optional[Sequence[str]] = None,
        per_class_cap: Optional[int] = None,
        seed: int = 0,
        side: int = DEFAULT_SIDE,
        cfg: CompressorConfig = DEFAULT_CONFIG,
        dataset: Optional[str] = None,
    ) -> CorpusManifest:
        """Canonicalize a dataset and write blobs plus manifest.

        Every selected image is decoded and canonicalized before anything is
        written, so an undecodable image aborts the run without touching the
        cache.

        Args:
            root: Dataset root with one subdirectory per class
            classes: Class directories to use; all subdirectories when omitted
            per_class_cap: Images sampled per class; all images when omitted
            seed: Sampling seed
            side: Canonical side length
            cfg: Compressor settings recorded in the manifest
            dataset: Corpus name; the root directory name when omitted

        Returns:
            The written manifest
        """
        root = Path(root)
        class_names = self.discover_classes(root, classes)

        selected: List[Tuple[str, Path]] = []
        for index, name in enumerate(class_names):
            files = self.select_files(root, name, index, per_class_cap, seed)
            logger.info("class %s: %d image(s) selected", name, len(files))
            selected.extend((name, path) for path in files)

        blobs = ordered_map(
            lambda item: serialize(canonicalize_file(item[1], side)), selected, self.threads
        )

        records = []
        for (label, path), blob in zip(selected, blobs):
            digest = blob_digest(blob)
            target = self.blob_path(digest)
            if not target.exists():
                write_bytes(target, blob)
            records.append(
                CorpusRecord(
                    source_path=path.relative_to(root).as_posix(),
                    label=label,
                    digest=digest,
                )
            )
        records.sort(key=lambda r: (r.label, r.source_path))

        manifest = CorpusManifest(
            dataset=dataset or root.resolve().name,
            classes=class_names,
            records=records,
            side=side,
            grayscale_formula=GRAYSCALE_FORMULA_ID,
            codec=cfg.snapshot(),
        )
        write_json(self.manifest_path, manifest.to_dict())
        logger.info(
            "prepared %d record(s) across %d class(es) into %s",
            len(records),
            len(class_names),
            self.cache_dir,
        )
        return manifest

    # ----- Read back ----- #

    def load_manifest(self) -> CorpusManifest:
        try:
            text = self.manifest_path.read_text(encoding="utf-8")
        except FileNotFoundError as e:
            raise CacheError(f"no {MANIFEST_NAME} in {self.cache_dir}") from e
        try:
            return CorpusManifest.from_dict(json.loads(text))
        except (KeyError, TypeError, ValueError) as e:
            raise CacheError(f"invalid manifest {self.manifest_path}: {e}") from e

    def read_blob(self, digest: str, side: int) -> bytes:
        """Read a blob and verify its digest and length."""
        try:
            data = self.blob_path(digest).read_bytes()
        except FileNotFoundError as e:
            raise CacheError(f"missing cached blob {digest}") from e
        if blob_digest(data) != digest or len(data) != side * side:
            raise CacheError(f"cached blob {digest} does not match its digest")
        return data

    def load(self) -> Tuple[CorpusManifest, Dict[str, bytes]]:
        """Load the manifest and every blob it references, verified."""
        manifest = self.load_manifest()
        digests = sorted({r.digest for r in manifest.records})
        blobs = ordered_map(lambda d: self.read_blob(d, manifest.side), digests, self.threads)
        return manifest, dict(zip(digests, blobs))


def ingest_dataset(
    root: Union[str, Path],
    out_dir: Union[str, Path],
    classes: Optional[Sequence[str]] = None,
    per_class_cap: Optional[int] = None,
    seed: int = 0,
    side: int = DEFAULT_SIDE,
    cfg: CompressorConfig = DEFAULT_CONFIG,
    dataset: Optional[str] = None,
    threads: int = 1,
) -> CorpusManifest:
    """Prepare ``root`` into the cache at ``out_dir``; see :meth:`DatasetService.ingest`."""
    return DatasetService(out_dir, threads=threads).ingest(
        root,
        classes=classes,
        per_class_cap=per_class_cap,
        seed=seed,
        side=side,
        cfg=cfg,
        dataset=dataset,
    )


def load_corpus(
    cache_dir: Union[str, Path], threads: int = 1
) -> Tuple[CorpusManifest, Dict[str, bytes]]:
    """Load a prepared cache; see :meth:`DatasetService.load`."""
    return DatasetService(cache_dir, threads=threads).load()


def corpus_from_records(
    records: Sequence[CorpusRecord], blobs: Dict[str, bytes]
) -> LabeledCorpus:
    """Labeled corpus over the given records, in the given order."""
    try:
        items = [CorpusItem(item_id=r.item_id, data=blobs[r.digest], label=r.label) for r in records]
    except KeyError as e:
        raise CacheError(f"missing cached blob {e.args[0]}") from e
    return LabeledCorpus(items=items)
