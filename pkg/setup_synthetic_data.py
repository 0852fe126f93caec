#!/usr/bin/env python3
"""
Set up a synthetic demo corpus for compression-knn.
This writes a two-class PNG dataset and prepares it into a canonical cache.
"""

import logging
import sys

from absl import app, flags

from compression_knn.errors import CompressionKnnError
from compression_knn.services.dataset_service import ingest_dataset
from compression_knn.shared_libraries.synthetic import write_synthetic_dataset

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

FLAGS = flags.FLAGS
flags.DEFINE_string("root", "demo_data/synthetic", "Where the PNG class directories go.")
flags.DEFINE_string("cache", "demo_data/synthetic_cache", "Where the prepared cache goes.")
flags.DEFINE_integer("per_class", 40, "Images per class.")
flags.DEFINE_integer("seed", 0, "Generator seed.")


def main(argv):
    """Write the dataset, then prepare it"""
    del argv  # unused
    logger.info("Writing synthetic dataset to %s", FLAGS.root)
    counts = write_synthetic_dataset(FLAGS.root, per_class=FLAGS.per_class, seed=FLAGS.seed)

    try:
        manifest = ingest_dataset(FLAGS.root, FLAGS.cache, seed=FLAGS.seed, dataset="synthetic")
    except CompressionKnnError as e:
        logger.error("Preparing %s failed: %s", FLAGS.root, e)
        sys.exit(1)

    logger.info("Prepared %d images (%s) into %s", len(manifest.records), counts, FLAGS.cache)
    logger.info(
        "Try: compression-knn eval --cache %s --reps 3 --out results.csv --svg curve.svg",
        FLAGS.cache,
    )


if __name__ == "__main__":
    app.run(main)
