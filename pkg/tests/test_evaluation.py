"""Tests for splits, model size and sweeps."""

import unittest

import numpy as np
import pytest

from compression_knn.errors import ConfigError, DegenerateSplit
from compression_knn.models.corpus import CorpusManifest, CorpusRecord, LabeledCorpus
from compression_knn.models.results import SplitSpec
from compression_knn.services.compressor import compress_bound
from compression_knn.services.dataset_service import load_corpus
from compression_knn.services.evaluation_service import (
    model_size,
    per_class_train_count,
    run_sweep,
    stratified_split,
)


def make_manifest(sizes):
    records = [
        CorpusRecord(source_path=f"{label}/{i:03d}.png", label=label, digest=f"{label}{i}")
        for label, count in sorted(sizes.items())
        for i in range(count)
    ]
    return CorpusManifest(
        dataset="test",
        classes=sorted(sizes),
        records=records,
        side=32,
        grayscale_formula="bt601-round-half-away",
    )


class TestStratifiedSplit(unittest.TestCase):

    def test_eighty_per_class_at_one_tenth(self):
        manifest = make_manifest({"basmati": 80, "jasmine": 80})
        train, test = stratified_split(manifest, SplitSpec(train_ratio=0.1, base_seed=1234))
        self.assertEqual(len(train), 16)
        self.assertEqual(len(test), 144)
        train_labels = [manifest.records[i].label for i in train]
        self.assertEqual(train_labels.count("basmati"), 8)
        self.assertEqual(train_labels.count("jasmine"), 8)

    def test_disjoint_and_covering(self):
        manifest = make_manifest({"a": 7, "b": 11})
        train, test = stratified_split(manifest, SplitSpec(train_ratio=0.3, repetition=2))
        self.assertFalse(set(train) & set(test))
        self.assertEqual(sorted(train + test), list(range(18)))

    def test_same_spec_same_split(self):
        manifest = make_manifest({"a": 20, "b": 20})
        spec = SplitSpec(train_ratio=0.5, repetition=1, base_seed=7)
        self.assertEqual(stratified_split(manifest, spec), stratified_split(manifest, spec))

    def test_repetitions_redraw(self):
        manifest = make_manifest({"a": 80, "b": 80})
        first = stratified_split(manifest, SplitSpec(train_ratio=0.5, repetition=0))
        second = stratified_split(manifest, SplitSpec(train_ratio=0.5, repetition=1))
        self.assertNotEqual(first, second)

    def test_half_rounds_up(self):
        self.assertEqual(per_class_train_count(0.05, 10), 1)
        self.assertEqual(per_class_train_count(0.25, 10), 3)

    def test_degenerate_train_side(self):
        manifest = make_manifest({"a": 10, "b": 10})
        with self.assertRaises(DegenerateSplit):
            stratified_split(manifest, SplitSpec(train_ratio=0.04))

    def test_degenerate_test_side(self):
        manifest = make_manifest({"a": 10, "b": 10})
        with self.assertRaises(DegenerateSplit):
            stratified_split(manifest, SplitSpec(train_ratio=0.95))

    def test_ratio_bounds(self):
        with self.assertRaises(ConfigError):
            SplitSpec(train_ratio=1.0)


class TestModelSize(unittest.TestCase):

    def test_single_image(self):
        report = model_size(LabeledCorpus.from_pairs([(bytes(1024), "jasmine")]))
        self.assertEqual(report.raw_bytes, 1025)
        self.assertEqual(report.item_count, 1)

    def test_zero_images_compress_small(self):
        corpus = LabeledCorpus.from_pairs([(bytes(1024), "a")] * 8 + [(bytes(1024), "b")] * 8)
        report = model_size(corpus)
        self.assertEqual(report.raw_bytes, 16 * 1024 + 16)
        self.assertLess(report.compressed_bytes, 100)

    def test_compressed_bounded_by_raw(self):
        rng = np.random.default_rng(3)
        corpus = LabeledCorpus.from_pairs([(rng.bytes(1024), str(i % 2)) for i in range(16)])
        report = model_size(corpus)
        self.assertLessEqual(report.compressed_bytes, compress_bound(report.raw_bytes))
        self.assertGreater(report.compressed_bytes, report.raw_bytes)

    def test_too_many_labels(self):
        corpus = LabeledCorpus.from_pairs([(b"x", f"label{i}") for i in range(257)])
        with self.assertRaises(ConfigError):
            model_size(corpus)


def test_sweep_on_synthetic_cache(prepared_cache):
    manifest, blobs = load_corpus(prepared_cache)
    result = run_sweep(manifest, blobs, ratios=[0.5, 0.34], repetitions=2, k=1, base_seed=5)

    assert len(result.records) == 4
    assert [r.ratio for r in result.records] == [0.5, 0.5, 0.34, 0.34]
    assert [a.ratio for a in result.aggregates] == [0.5, 0.34]
    for agg in result.aggregates:
        assert agg.n == 2
        assert agg.minimum <= agg.mean <= agg.maximum
        assert agg.mean == pytest.approx(1.0)
    first = result.aggregate_for(0.5)
    assert (first.train_count, first.test_count) == (6, 6)
    assert all(r.model_compressed_bytes > 0 for r in result.records)


def test_sweep_single_repetition_has_zero_std(prepared_cache):
    manifest, blobs = load_corpus(prepared_cache)
    result = run_sweep(manifest, blobs, ratios=[0.5], repetitions=1, k=3)
    assert result.aggregates[0].std == 0.0
    assert result.aggregates[0].n == 1


def test_sweep_threads_match_serial(prepared_cache):
    manifest, blobs = load_corpus(prepared_cache)
    serial = run_sweep(manifest, blobs, ratios=[0.5], repetitions=3, base_seed=8)
    threaded = run_sweep(manifest, blobs, ratios=[0.5], repetitions=3, base_seed=8, threads=3)
    assert serial.records == threaded.records
    assert serial.aggregates == threaded.aggregates


def test_sweep_rejects_degenerate_ratio(prepared_cache):
    manifest, blobs = load_corpus(prepared_cache)
    with pytest.raises(DegenerateSplit):
        run_sweep(manifest, blobs, ratios=[0.05], repetitions=1)
