"""CSV / JSON artifact writers.

All numbers are written with 12 significant digits via ``format(x, ".12g")``,
which does not depend on the process locale.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .evaluation import METRICS, POLICIES, AggregateReport


def fmt(x) -> str:
    return format(float(x), ".12g")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(_round_floats(obj), indent=2) + "\n"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def cdf_rows(report: AggregateReport, metric):
    """Rows ``(policy, trial_index, value, cdf)`` sorted by value within each policy."""
    rows = []
    for p in POLICIES:
        vals = report.samples[str(p)][metric]
        order = sorted(range(vals.size), key=lambda i: (vals[i], report.trial_indices[i]))
        n = vals.size
        for rank, i in enumerate(order, start=1):
            rows.append((str(p), int(report.trial_indices[i]), fmt(vals[i]), fmt(rank / n)))
    return rows


def run_artifacts(report: AggregateReport) -> dict[str, str]:
    """File name -> content for a single Monte Carlo run."""
    cfg = report.config
    stem = f"{cfg.output.experiment_id}_seed{cfg.harness.master_seed}"
    files = {}
    if "csv" in cfg.output.formats:
        for m in METRICS:
            files[f"{stem}_{m}.csv"] = _csv_text(
                ["policy", "trial_index", m, "cdf"], cdf_rows(report, m))
    if "json" in cfg.output.formats:
        files[f"{stem}_summary.json"] = _json_text(report.summary())
    return files


def sweep_artifacts(reports: dict, axis: str) -> dict[str, str]:
    """File name -> content for a sweep; ``reports`` maps axis value to report."""
    first = next(iter(reports.values()))
    cfg = first.config
    stem = f"{cfg.output.experiment_id}_{axis}_seed{cfg.harness.master_seed}"
    files = {}
    if "csv" in cfg.output.formats:
        header = ["axis", "axis_value", "policy"]
        for m in METRICS:
            header += [f"median_{m}", f"mean_{m}"]
        rows = []
        for v, rep in reports.items():
            for p in POLICIES:
                row = [axis, fmt(v), str(p)]
                for m in METRICS:
                    row += [fmt(rep.median(p, m)), fmt(rep.mean(p, m))]
                rows.append(row)
        files[f"{stem}.csv"] = _csv_text(header, rows)
        for m in METRICS:
            files[f"{stem}_{m}.csv"] = _csv_text(
                ["policy", "sweep_value", f"median_{m}", f"mean_{m}"],
                [(str(p), fmt(v), fmt(rep.median(p, m)), fmt(rep.mean(p, m)))
                 for p in POLICIES for v, rep in reports.items()])
    if "json" in cfg.output.formats:
        summary = {
            "axis": axis,
            "values": [float(v) for v in reports],
            "points": [rep.summary() for rep in reports.values()],
        }
        files[f"{stem}_summary.json"] = _json_text(summary)
    return files


def write_files(files: dict[str, str], out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in files.items():
        path = out / name
        path.write_text(text, encoding="utf-8", newline="")
        paths.append(path)
    return paths
