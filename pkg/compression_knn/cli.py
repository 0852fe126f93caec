"""Command-line interface for compression_knn.

Usage::

    compression-knn prepare --root <dataset> --out <cache> [--preset jasmine-basmati]
    compression-knn ncd <fileA> <fileB>
    compression-knn matrix --train <path> --queries <path> [--out matrix.csv]
    compression-knn classify --model <cache> --input <image-or-dir> [--k 1]
    compression-knn eval --cache <cache> --ratios 0.1:0.9:0.1 --reps 5 --k 1 --out results.csv [--svg curve.svg]
    compression-knn report results.csv [--svg curve.svg]

Flags accept hyphenated spellings (``--gzip-level``) as well as underscores.
Exit status: 0 on success, 1 for usage errors, 2 for runtime failures.
"""

import csv
import io
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from absl import flags
from pydantic import ValidationError

from compression_knn.config import (
    DEFAULT_LEVEL,
    DEFAULT_REPETITIONS,
    DEFAULT_SIDE,
    SUBCOMMANDS,
    RunConfig,
    configure_logging,
    parse_int_list,
    parse_ratio_grid,
)
from compression_knn.errors import CompressionKnnError, ConfigError
from compression_knn.services.classifier import classify_batch
from compression_knn.services.dataset_service import (
    MANIFEST_NAME,
    corpus_from_records,
    ingest_dataset,
    load_corpus,
)
from compression_knn.services.evaluation_service import run_sweep
from compression_knn.services.imageprep import canonicalize_file, is_image_file, serialize
from compression_knn.services.ncd import distance_matrix, ncd
from compression_knn.services.report_service import (
    read_results_csv,
    summary_lines,
    write_results_csv,
    write_run_manifest,
    write_svg,
)
from compression_knn.shared_libraries.atomic_io import dumps_json, write_text

logger = logging.getLogger(__name__)

FLAGS = flags.FLAGS

flags.DEFINE_string("root", None, "Dataset root with one subdirectory per class (prepare).")
flags.DEFINE_string("out", None, "Output cache directory (prepare) or output file.")
flags.DEFINE_string("cache", None, "Prepared cache directory (eval).")
flags.DEFINE_string("model", None, "Prepared cache directory used as the kNN corpus (classify).")
flags.DEFINE_string("input", None, "Image file or directory of images to classify.")
flags.DEFINE_string("train", None, "Training sequences: a file, a directory, or a prepared cache.")
flags.DEFINE_string("queries", None, "Query sequences: a file, a directory, or a prepared cache.")
flags.DEFINE_string("svg", None, "Write the mean-accuracy chart to this SVG file.")
flags.DEFINE_string("dataset", None, "Corpus name recorded in manifests and results.")
flags.DEFINE_list("classes", None, "Class directories to ingest, comma separated.")
flags.DEFINE_string("preset", None, "Binary rice corpus: jasmine-basmati or arborio-karacadag.")
flags.DEFINE_integer("cap", None, "Images sampled per class at ingest.")
flags.DEFINE_integer("seed", 0, "Base seed for sampling and splits.")
flags.DEFINE_integer("side", DEFAULT_SIDE, "Canonical image side length in pixels.")
flags.DEFINE_integer("gzip_level", DEFAULT_LEVEL, "DEFLATE compression level, 1..9.")
flags.DEFINE_string("k", "1", "Number of neighbours; eval accepts a list such as 1,3,5.")
flags.DEFINE_string("ratios", "0.1:0.9:0.1", "Train ratios: start:stop:step or a comma list.")
flags.DEFINE_integer("reps", DEFAULT_REPETITIONS, "Repetitions per train ratio.")
flags.DEFINE_integer("threads", 1, "Worker threads.")
flags.DEFINE_enum(
    "log_level", "WARNING", ["DEBUG", "INFO", "WARNING", "ERROR"], "Logging verbosity (stderr)."
)

USAGE = "usage: compression-knn {" + ",".join(SUBCOMMANDS) + "} [flags] [args]"


def normalize_argv(argv: Sequence[str]) -> List[str]:
    """Rewrite ``--gzip-level=9`` as ``--gzip_level=9``; stops at ``--``."""
    normalized = [argv[0]] if argv else ["compression-knn"]
    passthrough = False
    for token in argv[1:]:
        if passthrough or not token.startswith("--") or token == "--":
            passthrough = passthrough or token == "--"
            normalized.append(token)
            continue
        name, sep, value = token[2:].partition("=")
        normalized.append("--" + name.replace("-", "_") + sep + value)
    return normalized


def build_config(subcommand: str, positional: List[str]) -> RunConfig:
    """Turn parsed flags into a validated RunConfig."""

    def path(value: Optional[str]) -> Optional[Path]:
        return Path(value) if value else None

    return RunConfig(
        subcommand=subcommand,
        positional=positional,
        root=path(FLAGS.root),
        out=path(FLAGS.out),
        cache=path(FLAGS.cache),
        model=path(FLAGS.model),
        input=path(FLAGS.input),
        train=path(FLAGS.train),
        queries=path(FLAGS.queries),
        svg=path(FLAGS.svg),
        dataset=FLAGS.dataset,
        classes=FLAGS.classes,
        preset=FLAGS.preset,
        cap=FLAGS.cap,
        seed=FLAGS.seed,
        side=FLAGS.side,
        gzip_level=FLAGS.gzip_level,
        k=parse_int_list(FLAGS.k),
        ratios=parse_ratio_grid(FLAGS.ratios),
        reps=FLAGS.reps,
        threads=FLAGS.threads,
    )


# ----- Inputs ----- #


def read_sequences(path: Path, threads: int = 1) -> Tuple[List[str], List[bytes]]:
    """Identifiers and bytes of a sequence source.

    A prepared cache yields its canonical blobs, a directory yields every
    regular file in name order, and a file yields itself.
    """
    if path.is_dir() and (path / MANIFEST_NAME).is_file():
        manifest, blobs = load_corpus(path, threads=threads)
        corpus = corpus_from_records(manifest.records, blobs)
        return [item.item_id for item in corpus.items], corpus.sequences
    if path.is_dir():
        files = sorted(
            (p for p in path.iterdir() if p.is_file() and not p.name.startswith(".")),
            key=lambda p: p.name,
        )
        return [p.name for p in files], [p.read_bytes() for p in files]
    return [path.name], [path.read_bytes()]


def image_inputs(path: Path) -> List[Path]:
    if path.is_dir():
        return sorted((p for p in path.iterdir() if is_image_file(p)), key=lambda p: p.name)
    return [path]


# ----- Subcommands ----- #


def cmd_prepare(config: RunConfig) -> None:
    manifest = ingest_dataset(
        config.root,
        config.out,
        classes=config.selected_classes(),
        per_class_cap=config.per_class_cap(),
        seed=config.seed,
        side=config.side,
        cfg=config.compressor(),
        dataset=config.dataset_name(),
        threads=config.threads,
    )
    write_run_manifest(config.out / MANIFEST_NAME, config, corpus_digest=manifest.digest())
    sizes = ", ".join(f"{name}={count}" for name, count in manifest.class_sizes().items())
    print(f"prepared {len(manifest.records)} images ({sizes}) into {config.out}")


def cmd_ncd(config: RunConfig) -> None:
    a, b = (Path(p).read_bytes() for p in config.positional)
    print(f"{ncd(a, b, config.compressor()):.6f}")


def cmd_matrix(config: RunConfig) -> None:
    row_ids, train = read_sequences(config.train, config.threads)
    col_ids, queries = read_sequences(config.queries, config.threads)
    matrix = distance_matrix(
        train, queries, config.compressor(), threads=config.threads, row_ids=row_ids, col_ids=col_ids
    )
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerows(matrix.to_csv_rows())
    if config.out:
        write_text(config.out, buffer.getvalue())
        write_run_manifest(config.out, config)
    else:
        sys.stdout.write(buffer.getvalue())


def cmd_classify(config: RunConfig) -> None:
    manifest, blobs = load_corpus(config.model, threads=config.threads)
    corpus = corpus_from_records(manifest.records, blobs)
    paths = image_inputs(config.input)
    if not paths:
        raise ConfigError(f"no images under {config.input}")
    queries = [serialize(canonicalize_file(p, manifest.side)) for p in paths]
    predictions = classify_batch(
        corpus,
        queries,
        config.k[0],
        config.compressor(),
        threads=config.threads,
        query_ids=[p.name for p in paths],
    )
    payload = [p.to_dict() for p in predictions]
    text = dumps_json(payload if config.input.is_dir() else payload[0])
    if config.out:
        write_text(config.out, text)
        write_run_manifest(config.out, config, corpus_digest=manifest.digest())
    else:
        sys.stdout.write(text)


def cmd_eval(config: RunConfig) -> None:
    manifest, blobs = load_corpus(config.cache, threads=config.threads)
    logger.info("loaded %d record(s) of %s", len(manifest.records), manifest.dataset)
    results = [
        run_sweep(
            manifest,
            blobs,
            ratios=config.ratios,
            repetitions=config.reps,
            k=k,
            cfg=config.compressor(),
            base_seed=config.seed,
            threads=config.threads,
        )
        for k in config.k
    ]
    digest = manifest.digest()
    write_results_csv(config.out, results)
    write_run_manifest(config.out, config, corpus_digest=digest)
    aggregates = [agg for result in results for agg in result.aggregates]
    if config.svg:
        write_svg(config.svg, aggregates)
        write_run_manifest(config.svg, config, corpus_digest=digest)
    for result in results:
        print("\n".join(summary_lines(result)))


def cmd_report(config: RunConfig) -> None:
    result = read_results_csv(config.positional[0])
    print("\n".join(summary_lines(result)))
    if config.svg:
        write_svg(config.svg, result.aggregates)
        write_run_manifest(config.svg, config)


COMMANDS = {
    "prepare": cmd_prepare,
    "ncd": cmd_ncd,
    "matrix": cmd_matrix,
    "classify": cmd_classify,
    "eval": cmd_eval,
    "report": cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and run one subcommand.

    Args:
        argv: Program name followed by the subcommand, flags and arguments

    Returns:
        The process exit status
    """
    argv = list(sys.argv if argv is None else argv)
    FLAGS.unparse_flags()
    try:
        remaining = FLAGS(normalize_argv(argv))
    except flags.Error as e:
        print(f"{e}\n{USAGE}", file=sys.stderr)
        return 1
    configure_logging(FLAGS.log_level)

    if len(remaining) < 2 or remaining[1] not in COMMANDS:
        print(USAGE, file=sys.stderr)
        return 1
    subcommand, positional = remaining[1], remaining[2:]

    try:
        config = build_config(subcommand, positional)
    except (ValidationError, ConfigError) as e:
        print(f"{subcommand}: {e}\n{USAGE}", file=sys.stderr)
        return 1

    try:
        COMMANDS[subcommand](config)
    except ConfigError as e:
        logger.error("%s: %s", subcommand, e)
        return 1
    except (CompressionKnnError, OSError) as e:
        logger.error("%s failed: %s", subcommand, e)
        return 2
    return 0


def run() -> None:
    """Console-script entry point."""
    sys.exit(main(sys.argv))


if __name__ == "__main__":
    run()
