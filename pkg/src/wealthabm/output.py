"""Writers for run, batch and sweep outputs.

Numbers are formatted the same way everywhere: integers as-is, floats with
Python's shortest round-trip ``repr``, missing values as empty CSV cells.
Files are written with ``\\n`` line endings so digests are platform-stable.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

from .engine import BATCH_METRICS, ReplicationManifest, RunResult
from .sensitivity import OFAT_METRICS
from .stats import histogram

TIMESERIES_HEADER = ("tick", "mean", "variance", "top10_total", "bottom50_total", "gap", "critical")
BATCH_HEADER = ("run", "seed", "mean", "variance", "top10_total", "bottom50_total", "diff",
                "first_critical_tick", "return_periods")
RUN_FILES = ("timeseries.csv", "histogram.json", "result.json")


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write(path: Path, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)


def timeseries_csv(result: RunResult) -> str:
    return csv_text(TIMESERIES_HEADER, (
        (s.tick, s.mean, s.variance, s.top10_total, s.bottom50_total, s.gap, s.critical)
        for s in result.series
    ))


def write_run(directory, result: RunResult, bin_width: int = 10) -> ReplicationManifest:
    """Write ``timeseries.csv``, ``histogram.json``, ``result.json`` and ``manifest.json``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    hist = histogram(result.final_balances, bin_width)
    _write(directory / "timeseries.csv", timeseries_csv(result))
    _write(directory / "histogram.json", json_text(hist.to_dict(tick=result.final.tick)))
    _write(directory / "result.json", json_text(result.to_dict()))
    manifest = ReplicationManifest(
        config=result.config,
        seed=result.seed,
        engine_version=result.engine_version,
        digests={name: sha256_file(directory / name) for name in RUN_FILES},
        histogram_bin_width=bin_width,
    )
    _write(directory / "manifest.json", json_text(manifest.to_dict()))
    return manifest


def read_manifest(path) -> ReplicationManifest:
    return ReplicationManifest.from_dict(json.loads(Path(path).read_text()))


def batch_csv(summary) -> str:
    return csv_text(BATCH_HEADER, (
        tuple(getattr(row, name) for name in BATCH_HEADER) for row in summary.rows
    ))


def write_batch(directory, summary, seeds, bin_width: int = 10) -> None:
    """Per-seed run directories plus ``batch_summary.csv`` and ``batch_manifest.json``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for result in summary.results:
        write_run(directory / f"seed-{result.seed}", result, bin_width)
    _write(directory / "batch_summary.csv", batch_csv(summary))
    _write(directory / "batch_manifest.json", json_text({
        "engine_version": summary.results[0].engine_version,
        "config": summary.config.to_dict(),
        "config_digest": summary.config.digest(),
        "seeds": list(seeds),
        "histogram_bin_width": bin_width,
        "aggregates": {m: summary.aggregates[m] for m in BATCH_METRICS},
        "outputs": {"batch_summary.csv": sha256_file(directory / "batch_summary.csv")},
    }))


def ofat_csv(table) -> str:
    header = ["value_index", "parameter", "value", "replicates", "total_money"]
    for metric in OFAT_METRICS:
        header += [f"{metric}_mean", f"{metric}_min", f"{metric}_max"]
    rows = []
    for row in table.rows:
        cells = [row.value_index, table.parameter, row.value, row.replicates, row.total_money]
        for metric in OFAT_METRICS:
            cells += [row.stat(metric, "mean"), row.stat(metric, "min"), row.stat(metric, "max")]
        rows.append(cells)
    return csv_text(header, rows)


def write_ofat(directory, table, plan) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / "ofat_table.csv"
    _write(path, ofat_csv(table))
    _write(directory / "ofat_plan.json", json_text({
        "base": plan.base.to_dict(),
        "parameter": plan.parameter,
        "values": list(plan.values),
        "replicates": plan.replicates,
        "seed_base": plan.seed_base,
    }))
    return path


def read_batch(directory):
    """Return ``(label, rows)`` for a batch directory written by :func:`write_batch`."""
    directory = Path(directory)
    meta = json.loads((directory / "batch_manifest.json").read_text())
    charity = meta["config"].get("charity")
    label = charity["strategy"] if charity else "none"
    with open(directory / "batch_summary.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    return label, rows


def write_text(path, text: str) -> None:
    _write(Path(path), text)
