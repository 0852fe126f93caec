"""Tests for NCD and distance matrices."""

import unittest

import numpy as np
import pytest

from compression_knn.errors import EmptyQuerySet, EmptyTrainSet
from compression_knn.services.ncd import distance_matrix, ncd, ncd_from_lengths


def _random(size: int, seed: int) -> bytes:
    return np.random.default_rng(seed).bytes(size)


class TestNcd(unittest.TestCase):

    def test_identical_random_items_are_close(self):
        x = _random(4096, 7)
        self.assertGreaterEqual(ncd(x, x), 0.0)
        self.assertLessEqual(ncd(x, x), 0.1)

    def test_unrelated_random_items_are_far(self):
        value = ncd(_random(4096, 7), _random(4096, 8))
        self.assertGreaterEqual(value, 0.9)
        self.assertLessEqual(value, 1.1)

    def test_empty_inputs(self):
        self.assertGreaterEqual(ncd(b"", b""), 0.0)
        self.assertGreaterEqual(ncd(b"", b"abc"), 0.0)

    def test_from_lengths(self):
        self.assertEqual(ncd_from_lengths(100, 50, 120), 0.7)


class TestDistanceMatrix(unittest.TestCase):

    def setUp(self):
        self.train = [_random(300 + 10 * i, i) for i in range(5)] + [b"a" * 400]
        self.queries = [_random(256, 100 + j) for j in range(3)] + [b"b" * 400]

    def test_shape_and_entries(self):
        matrix = distance_matrix(self.train, self.queries)
        self.assertEqual((matrix.rows, matrix.cols), (6, 4))
        for i, x in enumerate(self.train):
            for j, y in enumerate(self.queries):
                self.assertEqual(matrix.values[i, j], ncd(x, y))

    def test_thread_count_does_not_change_values(self):
        serial = distance_matrix(self.train, self.queries, threads=1)
        threaded = distance_matrix(self.train, self.queries, threads=4)
        self.assertTrue(np.array_equal(serial.values, threaded.values))

    def test_empty_sides(self):
        with self.assertRaises(EmptyTrainSet):
            distance_matrix([], self.queries)
        with self.assertRaises(EmptyQuerySet):
            distance_matrix(self.train, [])

    def test_csv_rows(self):
        matrix = distance_matrix(
            self.train[:2], self.queries[:2], row_ids=["t0", "t1"], col_ids=["q0", "q1"]
        )
        rows = matrix.to_csv_rows()
        self.assertEqual(rows[0], ["train", "q0", "q1"])
        self.assertEqual([r[0] for r in rows[1:]], ["t0", "t1"])
        self.assertEqual(rows[1][1], f"{matrix.values[0, 0]:.6f}")


@pytest.mark.parametrize("seed", range(5))
def test_distances_are_finite_and_non_negative(seed):
    rng = np.random.default_rng(seed)
    x = rng.bytes(int(rng.integers(0, 2000)))
    y = bytes(rng.integers(0, 4, size=int(rng.integers(1, 2000)), dtype=np.uint8))
    value = ncd(x, y)
    assert np.isfinite(value)
    assert value >= 0.0
