"""Plain-text serialization of fit reports, performance reports and study summaries.

Every document starts with ``#`` comment lines. A fit report then has
tab-separated ``key value`` lines, one blank line, and a per-center table.
"""

from __future__ import annotations

import json
import math
from typing import Sequence, TextIO

import numpy as np

from . import __version__
from .pipeline import FitReport
from .roc_metrics import PerformanceReport
from .simgen import StudySummary


def num(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def header_lines(command: str, config: dict) -> list[str]:
    return [
        f"adjauc {__version__}",
        f"command: {command}",
        f"seed: {config.get('seed', 'none')}",
        "config: " + json.dumps(config, sort_keys=True, default=str),
    ]


def write_header(sink: TextIO, lines: Sequence[str]) -> None:
    for line in lines:
        sink.write(f"# {line}\n")


def _center_table(sink: TextIO, perf: PerformanceReport) -> None:
    sink.write("center\tn_cases\tn_controls\tweight\tauc\n")
    for c, nd, nb, w, a in perf.rows():
        sink.write(f"{c}\t{nd}\t{nb}\t{num(w)}\t{num(a)}\n")


def write_performance(sink: TextIO, perf: PerformanceReport, extra: dict | None = None) -> None:
    for k, v in {**(extra or {}), **perf.summary()}.items():
        sink.write(f"{k}\t{num(v) if isinstance(v, (float, int, np.floating)) else v}\n")
    sink.write("\n")
    _center_table(sink, perf)


def write_fit_report(sink: TextIO, report: FitReport) -> None:
    res = report.result
    kv = {
        "lambda": num(report.lam),
        "objective": num(res.objective),
        "start_objective": num(report.start_objective),
        "iterations": res.iterations,
        "converged": str(res.converged).lower(),
        "stop_reason": res.reason,
        "standardized": str(report.scaling is not None).lower(),
        "logistic_converged": "" if report.logistic is None else str(report.logistic.converged).lower(),
        "dropped_centers": ",".join(report.dropped),
    }
    for name, t in zip(report.marker_names, report.theta):
        kv[f"coef.{name}"] = num(t)
    for name, t in zip(report.marker_names, report.start):
        kv[f"start.{name}"] = num(t)
    for c, h in zip(report.apparent.centers, report.bandwidths):
        kv[f"bandwidth.{c}"] = num(h)
    for k, v in kv.items():
        sink.write(f"{k}\t{v}\n")
    write_performance(sink, report.apparent)


def read_fit_report(source: TextIO) -> dict:
    """Parse the key/value block and per-center table of a fit report."""
    kv, table, in_table = {}, [], False
    for line in source:
        if line.startswith("#"):
            continue
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if parts[0] == "center" and parts[1:2] == ["n_cases"]:
            in_table = True
            continue
        if in_table:
            table.append((parts[0], int(parts[1]), int(parts[2]), float(parts[3]), float(parts[4])))
        else:
            kv[parts[0]] = parts[1] if len(parts) > 1 else ""
    names = [k[5:] for k in kv if k.startswith("coef.")]
    return {
        "values": kv,
        "marker_names": names,
        "theta": np.array([float(kv[f"coef.{n}"]) for n in names]),
        "centers": table,
    }


def write_summary(sink: TextIO, summary: StudySummary) -> None:
    sink.write(f"# replications: {summary.replications}, failures: {summary.failures}\n")
    sink.write("method\taauc_mean\taauc_sd\tmin_auc_mean\tmin_auc_sd\tmax_auc_mean\tmax_auc_sd\n")
    for m in summary.methods:
        mu, sd = summary.mean[m], summary.sd[m]
        cells = [num(v) for stat in ("aauc", "min_auc", "max_auc") for v in (mu[stat], sd[stat])]
        sink.write(m + "\t" + "\t".join(cells) + "\n")
