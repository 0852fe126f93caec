"""Tests for dataset ingest and the canonical cache."""

import json

import pytest

from compression_knn.errors import CacheError, InsufficientImages, MissingClassDir, UndecodableImage
from compression_knn.services.dataset_service import (
    MANIFEST_NAME,
    DatasetService,
    corpus_from_records,
    ingest_dataset,
    load_corpus,
)


def test_ingest_writes_manifest_and_blobs(synthetic_root, tmp_path):
    cache = tmp_path / "cache"
    manifest = ingest_dataset(synthetic_root, cache, dataset="synthetic")

    assert manifest.classes == ["flat", "noise"]
    assert manifest.class_sizes() == {"flat": 6, "noise": 6}
    assert manifest.side == 32
    assert manifest.grayscale_formula == "bt601-round-half-away"
    assert (cache / MANIFEST_NAME).is_file()
    for record in manifest.records:
        assert (cache / "blobs" / f"{record.digest}.bin").stat().st_size == 32 * 32

    labels = [r.label for r in manifest.records]
    assert labels == sorted(labels)


def test_manifest_is_byte_stable(synthetic_root, tmp_path):
    ingest_dataset(synthetic_root, tmp_path / "a", seed=9, per_class_cap=4)
    ingest_dataset(synthetic_root, tmp_path / "b", seed=9, per_class_cap=4)
    first = (tmp_path / "a" / MANIFEST_NAME).read_bytes()
    second = (tmp_path / "b" / MANIFEST_NAME).read_bytes()
    assert first == second
    assert "created_at" not in json.loads(first)


def test_cap_samples_per_class(synthetic_root, tmp_path):
    manifest = ingest_dataset(synthetic_root, tmp_path / "cache", per_class_cap=4, seed=1)
    assert manifest.class_sizes() == {"flat": 4, "noise": 4}


def test_cap_above_available(synthetic_root, tmp_path):
    with pytest.raises(InsufficientImages) as excinfo:
        ingest_dataset(synthetic_root, tmp_path / "cache", per_class_cap=7)
    assert excinfo.value.available == 6


def test_declared_class_without_directory(synthetic_root, tmp_path):
    with pytest.raises(MissingClassDir):
        ingest_dataset(synthetic_root, tmp_path / "cache", classes=["flat", "striped"])


def test_class_selection(synthetic_root, tmp_path):
    manifest = ingest_dataset(synthetic_root, tmp_path / "cache", classes=["noise"])
    assert manifest.classes == ["noise"]
    assert len(manifest.records) == 6


def test_undecodable_image_aborts_before_writing(synthetic_root, tmp_path):
    (synthetic_root / "noise" / "zz_broken.png").write_bytes(b"garbage")
    cache = tmp_path / "cache"
    with pytest.raises(UndecodableImage):
        ingest_dataset(synthetic_root, cache)
    assert not (cache / MANIFEST_NAME).exists()


def test_load_round_trip(prepared_cache):
    manifest, blobs = load_corpus(prepared_cache)
    corpus = corpus_from_records(manifest.records, blobs)
    assert len(corpus) == 12
    assert corpus.label_set == ["flat", "noise"]
    assert all(len(seq) == 1024 for seq in corpus.sequences)


def test_corrupted_blob_detected(prepared_cache):
    service = DatasetService(prepared_cache)
    digest = service.load_manifest().records[0].digest
    service.blob_path(digest).write_bytes(b"\x01" * 1000)
    with pytest.raises(CacheError):
        service.load()


def test_missing_manifest(tmp_path):
    with pytest.raises(CacheError):
        load_corpus(tmp_path)
