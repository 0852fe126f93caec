"""
Results files, summary tables and the accuracy chart.

``results.csv`` holds one row per (ratio, repetition) cell followed by one
aggregate row per ratio, for every k of the sweep. Numbers are written with
fixed precision so two runs with the same flags produce identical bytes.
"""

import csv
import dataclasses
import io
import logging
from collections import OrderedDict
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
from xml.sax.saxutils import escape

from compression_knn import __version__
from compression_knn.config import RunConfig, ratio_key
from compression_knn.errors import MalformedCsv
from compression_knn.models.results import RatioAggregate, RunRecord, SweepResult
from compression_knn.services.evaluation_service import REFERENCE_FOOTPRINTS, aggregate
from compression_knn.shared_libraries.atomic_io import write_json, write_text

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "dataset",
    "ratio",
    "repetition",
    "seed",
    "k",
    "gzip_level",
    "side",
    "train_count",
    "test_count",
    "accuracy",
    "agg",
    "mean",
    "std",
    "n",
    "model_raw_bytes",
    "model_compressed_bytes",
]

RUN_MANIFEST_SUFFIX = ".run.json"


def format_ratio(ratio: float) -> str:
    """Up to six decimals, trailing zeros dropped: 0.1 -> "0.1"."""
    return f"{ratio:.6f}".rstrip("0").rstrip(".")


def format_fixed(value: float) -> str:
    return f"{value:.6f}"


# ----- CSV ----- #


def _cell_row(record: RunRecord) -> Dict[str, str]:
    return {
        "dataset": record.dataset,
        "ratio": format_ratio(record.ratio),
        "repetition": str(record.repetition),
        "seed": str(record.seed),
        "k": str(record.k),
        "gzip_level": str(record.gzip_level),
        "side": str(record.side),
        "train_count": str(record.train_count),
        "test_count": str(record.test_count),
        "accuracy": format_fixed(record.accuracy),
        "agg": "0",
        "mean": "",
        "std": "",
        "n": "",
        "model_raw_bytes": str(record.model_raw_bytes),
        "model_compressed_bytes": str(record.model_compressed_bytes),
    }


def _aggregate_row(agg: RatioAggregate) -> Dict[str, str]:
    return {
        "dataset": agg.dataset,
        "ratio": format_ratio(agg.ratio),
        "repetition": "",
        "seed": str(agg.base_seed),
        "k": str(agg.k),
        "gzip_level": str(agg.gzip_level),
        "side": str(agg.side),
        "train_count": str(agg.train_count),
        "test_count": str(agg.test_count),
        "accuracy": "",
        "agg": "1",
        "mean": format_fixed(agg.mean),
        "std": format_fixed(agg.std),
        "n": str(agg.n),
        "model_raw_bytes": str(agg.model_raw_bytes),
        "model_compressed_bytes": str(agg.model_compressed_bytes),
    }


def results_csv_text(results: Sequence[SweepResult]) -> str:
    """Render sweeps (one per k) as results CSV text."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for result in results:
        for record in result.records:
            writer.writerow(_cell_row(record))
        for agg in result.aggregates:
            writer.writerow(_aggregate_row(agg))
    return buffer.getvalue()


def write_results_csv(path: Union[str, Path], results: Sequence[SweepResult]) -> Path:
    written = write_text(path, results_csv_text(results))
    logger.info("wrote %s", written)
    return written


def _int(row: Dict[str, str], column: str, default: Optional[int] = None) -> int:
    value = row.get(column, "")
    if value == "" and default is not None:
        return default
    return int(value)


def _parse_row(row: Dict[str, str]) -> Union[RunRecord, RatioAggregate]:
    if row.get("agg") == "1":
        mean = float(row["mean"])
        return RatioAggregate(
            dataset=row["dataset"],
            ratio=float(row["ratio"]),
            k=_int(row, "k"),
            gzip_level=_int(row, "gzip_level"),
            side=_int(row, "side"),
            base_seed=_int(row, "seed", 0),
            train_count=_int(row, "train_count"),
            test_count=_int(row, "test_count"),
            mean=mean,
            std=float(row["std"] or 0.0),
            n=_int(row, "n", 1),
            minimum=mean,
            maximum=mean,
            model_raw_bytes=_int(row, "model_raw_bytes", 0),
            model_compressed_bytes=_int(row, "model_compressed_bytes", 0),
        )
    test_count = _int(row, "test_count")
    if test_count < 1:
        raise ValueError("cell row with no test items")
    return RunRecord(
        dataset=row["dataset"],
        ratio=float(row["ratio"]),
        repetition=_int(row, "repetition"),
        seed=_int(row, "seed"),
        k=_int(row, "k"),
        gzip_level=_int(row, "gzip_level"),
        side=_int(row, "side"),
        train_count=_int(row, "train_count"),
        test_count=test_count,
        correct=round(float(row["accuracy"]) * test_count),
        model_raw_bytes=_int(row, "model_raw_bytes", 0),
        model_compressed_bytes=_int(row, "model_compressed_bytes", 0),
    )


def _group_key(item: Union[RunRecord, RatioAggregate]) -> Tuple[str, int, int]:
    return (item.dataset, item.k, ratio_key(item.ratio))


def read_results_csv(path: Union[str, Path]) -> SweepResult:
    """Read a results CSV back.

    Aggregate rows are used when present; otherwise aggregates are recomputed
    from the cell rows, grouped by (dataset, k, ratio) in order of appearance.

    Raises:
        MalformedCsv: If the file is empty, lacks required columns, or holds
            unparseable values
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise MalformedCsv(f"results file {path} does not exist") from e
    reader = csv.DictReader(io.StringIO(text))
    if not reader.fieldnames:
        raise MalformedCsv(f"{path} is empty")
    missing = [c for c in ("dataset", "ratio", "k", "train_count", "test_count", "agg")
               if c not in reader.fieldnames]
    if missing:
        raise MalformedCsv(f"{path} lacks column(s) {', '.join(missing)}")

    records: List[RunRecord] = []
    aggregates: List[RatioAggregate] = []
    line_no = 1
    try:
        for line_no, row in enumerate(reader, start=2):
            parsed = _parse_row(row)
            if isinstance(parsed, RatioAggregate):
                aggregates.append(parsed)
            else:
                records.append(parsed)
    except (csv.Error, KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise MalformedCsv(f"{path} line {line_no}: {e}") from e
    if not records and not aggregates:
        raise MalformedCsv(f"{path} has a header but no rows")

    groups: "OrderedDict[Tuple[str, int, int], List[RunRecord]]" = OrderedDict()
    for record in records:
        groups.setdefault(_group_key(record), []).append(record)

    if not aggregates:
        aggregates = [aggregate(members, base_seed=0) for members in groups.values()]
    else:
        aggregates = [_with_range(agg, groups.get(_group_key(agg))) for agg in aggregates]
    return SweepResult(records=records, aggregates=aggregates)


def _with_range(agg: RatioAggregate, members: Optional[List[RunRecord]]) -> RatioAggregate:
    """Fill min/max of a stored aggregate from its cell rows, when present."""
    if not members:
        return agg
    accuracies = [m.accuracy for m in members]
    return dataclasses.replace(agg, minimum=min(accuracies), maximum=max(accuracies))


# ----- Summary ----- #


def format_kilobytes(num_bytes: float) -> str:
    return f"{num_bytes / 1000:.2f} kB"


def format_megabytes(num_bytes: float) -> str:
    return f"{num_bytes / 1_000_000:.2f} MB"


def summary_lines(result: SweepResult) -> List[str]:
    """Per-ratio mean +- std, then an accuracy / model-size table.

    The size column and the reference-footprint comparison appear only when
    the aggregates carry a model size.
    """
    lines: List[str] = []
    for agg in result.aggregates:
        lines.append(
            f"{agg.dataset} k={agg.k} ratio {format_ratio(agg.ratio)} "
            f"({agg.train_count} train / {agg.test_count} test): "
            f"{format_fixed(agg.mean)} +- {format_fixed(agg.std)} (n={agg.n})"
        )

    has_size = any(agg.model_compressed_bytes > 0 for agg in result.aggregates)
    lines.append("")
    lines.append("Training set | Accuracy" + (" | Model size" if has_size else ""))
    for agg in result.aggregates:
        row = f"{agg.train_count} train images | {agg.mean * 100:.2f}%"
        if has_size:
            row += f" | {format_kilobytes(agg.model_compressed_bytes)}"
        lines.append(row)

    if has_size:
        largest = max(agg.model_compressed_bytes for agg in result.aggregates)
        smallest_name, smallest_bytes = min(REFERENCE_FOOTPRINTS.items(), key=lambda kv: kv[1])
        lines.append("")
        lines.append("Reference footprints")
        for name, size in sorted(REFERENCE_FOOTPRINTS.items()):
            lines.append(f"{name} | {format_megabytes(size)}")
        lines.append(
            f"largest compression model ({format_kilobytes(largest)}) is "
            f"{smallest_bytes / largest:.0f}x smaller than {smallest_name}"
        )
    return lines


# ----- SVG chart ----- #

SVG_WIDTH = 640
SVG_HEIGHT = 400
_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 60, 110, 40, 50
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def render_svg(aggregates: Sequence[RatioAggregate], title: Optional[str] = None) -> str:
    """Mean accuracy against training-set size, one line per k, +-1 std error bars.

    Output depends only on the aggregates, so it is byte-stable.
    """
    if not aggregates:
        raise MalformedCsv("no aggregate rows to plot")
    plot_w = SVG_WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = SVG_HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM
    counts = sorted({agg.train_count for agg in aggregates})
    x_lo, x_hi = counts[0], counts[-1]
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 1, x_hi + 1

    def px(count: float) -> float:
        return _MARGIN_LEFT + (count - x_lo) / (x_hi - x_lo) * plot_w

    def py(accuracy: float) -> float:
        return _MARGIN_TOP + (1.0 - min(max(accuracy, 0.0), 1.0)) * plot_h

    title = title or f"Mean accuracy: {aggregates[0].dataset}"
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" '
        f'height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" '
        'font-family="sans-serif" font-size="11">',
        f'<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<text x="{SVG_WIDTH // 2}" y="20" text-anchor="middle" font-size="14">'
        f"{escape(title)}</text>",
    ]

    # Axes and grid
    bottom = _MARGIN_TOP + plot_h
    out.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{bottom}" x2="{_MARGIN_LEFT + plot_w}" '
        f'y2="{bottom}" stroke="black"/>'
    )
    out.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" x2="{_MARGIN_LEFT}" '
        f'y2="{bottom}" stroke="black"/>'
    )
    for tick in range(0, 11, 2):
        y = py(tick / 10)
        out.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{_fmt(y)}" x2="{_MARGIN_LEFT + plot_w}" '
            f'y2="{_fmt(y)}" stroke="#dddddd"/>'
        )
        out.append(
            f'<text x="{_MARGIN_LEFT - 6}" y="{_fmt(y + 4)}" text-anchor="end">'
            f"{tick / 10:.1f}</text>"
        )
    for count in counts:
        x = px(count)
        out.append(
            f'<text x="{_fmt(x)}" y="{bottom + 16}" text-anchor="middle">{count}</text>'
        )
    out.append(
        f'<text x="{_MARGIN_LEFT + plot_w // 2}" y="{SVG_HEIGHT - 10}" '
        'text-anchor="middle">training images</text>'
    )
    out.append(
        f'<text x="16" y="{_MARGIN_TOP + plot_h // 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_MARGIN_TOP + plot_h // 2})">mean accuracy</text>'
    )

    series: "OrderedDict[int, List[RatioAggregate]]" = OrderedDict()
    for agg in aggregates:
        series.setdefault(agg.k, []).append(agg)

    for index, (k, points) in enumerate(series.items()):
        color = _PALETTE[index % len(_PALETTE)]
        points = sorted(points, key=lambda a: (a.train_count, a.ratio))
        coords = " ".join(f"{_fmt(px(a.train_count))},{_fmt(py(a.mean))}" for a in points)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2"/>')
        for a in points:
            x, y_top, y_bot = px(a.train_count), py(a.mean + a.std), py(a.mean - a.std)
            out.append(
                f'<line x1="{_fmt(x)}" y1="{_fmt(y_top)}" x2="{_fmt(x)}" y2="{_fmt(y_bot)}" '
                f'stroke="{color}"/>'
            )
            for cap in (y_top, y_bot):
                out.append(
                    f'<line x1="{_fmt(x - 4)}" y1="{_fmt(cap)}" x2="{_fmt(x + 4)}" '
                    f'y2="{_fmt(cap)}" stroke="{color}"/>'
                )
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(py(a.mean))}" r="3" fill="{color}"/>')
        legend_y = _MARGIN_TOP + 14 * index
        legend_x = _MARGIN_LEFT + plot_w + 12
        out.append(
            f'<line x1="{legend_x}" y1="{legend_y}" x2="{legend_x + 18}" y2="{legend_y}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<text x="{legend_x + 24}" y="{legend_y + 4}">k={k}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path: Union[str, Path], aggregates: Sequence[RatioAggregate]) -> Path:
    written = write_text(path, render_svg(aggregates))
    logger.info("wrote %s", written)
    return written


# ----- Run manifests ----- #


def run_manifest_path(output: Union[str, Path]) -> Path:
    output = Path(output)
    return output.with_name(output.name + RUN_MANIFEST_SUFFIX)


def write_run_manifest(
    output: Union[str, Path],
    config: RunConfig,
    corpus_digest: Optional[str] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> Path:
    """Record how ``output`` was produced in ``<output>.run.json``.

    Args:
        output: The file (or directory) the run wrote
        config: The validated run configuration
        corpus_digest: Digest of the corpus manifest read, if any
        extra: Additional fields to record

    Returns:
        Path of the run manifest
    """
    payload: Dict[str, Any] = {
        "subcommand": config.subcommand,
        "config": config.snapshot(),
        "version": __version__,
        "codec": config.compressor().snapshot(),
        "corpus_manifest_digest": corpus_digest,
        "created_at": datetime.now(timezone.utc).isoformat(),
    }
    if extra:
        payload.update(extra)
    return write_json(run_manifest_path(output), payload)
