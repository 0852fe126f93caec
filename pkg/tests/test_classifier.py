"""Tests for kNN prediction."""

import unittest

import numpy as np

from compression_knn.errors import EmptyTrainSet, InvalidK, LengthMismatch
from compression_knn.models.corpus import LabeledCorpus
from compression_knn.services.classifier import (
    CompressionKnnClassifier,
    classify_batch,
    knn_predict,
)
from compression_knn.services.ncd import distance_matrix


class TestKnnPredict(unittest.TestCase):

    def test_nearest_wins_with_k1(self):
        prediction = knn_predict([0.5, 0.1, 0.3], ["a", "b", "a"], k=1)
        self.assertEqual(prediction.label, "b")
        self.assertEqual([n.index for n in prediction.neighbors], [1])

    def test_majority_with_k3(self):
        prediction = knn_predict([0.5, 0.1, 0.3], ["a", "b", "a"], k=3)
        self.assertEqual(prediction.label, "a")
        self.assertEqual(prediction.tally, {"a": 2, "b": 1})

    def test_count_tie_broken_by_mean_distance(self):
        prediction = knn_predict([0.2, 0.1], ["a", "b"], k=2)
        self.assertEqual(prediction.label, "b")

    def test_distance_tie_broken_by_index(self):
        prediction = knn_predict([0.2, 0.2], ["b", "a"], k=1)
        self.assertEqual(prediction.label, "b")
        self.assertEqual(prediction.neighbors[0].index, 0)

    def test_full_tie_broken_by_label(self):
        prediction = knn_predict([0.3, 0.3], ["b", "a"], k=2)
        self.assertEqual(prediction.label, "a")

    def test_k_larger_than_corpus_uses_everything(self):
        prediction = knn_predict([0.4, 0.2], ["x", "x"], k=10)
        self.assertEqual(prediction.label, "x")
        self.assertEqual(len(prediction.neighbors), 2)

    def test_invalid_k(self):
        with self.assertRaises(InvalidK):
            knn_predict([0.1], ["a"], k=0)

    def test_length_mismatch(self):
        with self.assertRaises(LengthMismatch):
            knn_predict([0.1, 0.2], ["a"], k=1)
        with self.assertRaises(LengthMismatch):
            knn_predict([], [], k=1)

    def test_accepts_distance_matrix_column(self):
        flat, noise = bytes(512), np.random.default_rng(4).bytes(512)
        matrix = distance_matrix([noise, flat], [bytes(600)])
        prediction = knn_predict(matrix.values[:, 0], ["noise", "flat"], k=1)
        self.assertEqual(prediction.label, "flat")
        self.assertEqual(prediction.neighbors[0].index, 1)
        with self.assertRaises(LengthMismatch):
            knn_predict(np.array([]), [], k=1)

    def test_to_dict(self):
        payload = knn_predict([0.1234567], ["a"], k=1, item_ids=["a/1.png"], query_id="q").to_dict()
        self.assertEqual(payload["query"], "q")
        self.assertEqual(payload["neighbors"][0]["id"], "a/1.png")
        self.assertEqual(payload["neighbors"][0]["distance"], 0.123457)


class TestClassifier(unittest.TestCase):

    def setUp(self):
        rng = np.random.default_rng(11)
        self.flat = [bytes([v]) * 1024 for v in (0, 40, 90, 200)]
        self.noise = [rng.bytes(1024) for _ in range(4)]
        self.corpus = LabeledCorpus.from_pairs(
            [(x, "flat") for x in self.flat[:3]] + [(x, "noise") for x in self.noise[:3]]
        )

    def test_classify_batch_separates_classes(self):
        predictions = classify_batch(self.corpus, [self.flat[3], self.noise[3]], k=1)
        self.assertEqual([p.label for p in predictions], ["flat", "noise"])

    def test_classifier_threads_agree(self):
        queries = [self.flat[3], self.noise[3]]
        serial = CompressionKnnClassifier(k=3).fit(self.corpus).predict(queries)
        threaded = CompressionKnnClassifier(k=3, threads=3).fit(self.corpus).predict(queries)
        self.assertEqual([p.to_dict() for p in serial], [p.to_dict() for p in threaded])

    def test_predict_requires_fit(self):
        with self.assertRaises(RuntimeError):
            CompressionKnnClassifier().predict([b"x"])

    def test_empty_corpus(self):
        with self.assertRaises(EmptyTrainSet):
            LabeledCorpus.from_pairs([])
