"""Leave-one-center-out cross-validation over a penalty grid."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Sequence, TextIO

import numpy as np

from ._parallel import pmap
from .dataset import Dataset, split_centers
from .errors import AdjAUCError, ConfigurationError
from .pipeline import FitConfig, fit
from .roc_metrics import empirical_auc

log = logging.getLogger(__name__)

CV_COLUMNS = (
    "lambda",
    "log10_lambda",
    "center",
    "holdout_auc",
    "cv_aauc",
    "sd_about_cv_aauc",
    "sd_about_train_aauc",
    "fold_converged",
)


def default_grid(size: int = 50, low: float = 0.1, high: float = 200.0) -> np.ndarray:
    if size < 1 or not 0 < low <= high:
        raise ConfigurationError("grid needs size >= 1 and 0 < low <= high")
    return np.logspace(math.log10(low), math.log10(high), size)


@dataclass(frozen=True)
class CvConfig:
    lambdas: tuple[float, ...] = tuple(default_grid())
    fit: FitConfig = field(default_factory=FitConfig)
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        if lam.size == 0:
            raise ConfigurationError("lambda grid is empty")
        if np.any(~np.isfinite(lam)) or np.any(lam < 0) or np.any(np.diff(lam) <= 0):
            raise ConfigurationError("lambda grid must be finite, >= 0 and strictly increasing")
        object.__setattr__(self, "lambdas", tuple(float(v) for v in lam))


@dataclass(frozen=True)
class CvRow:
    lam: float
    center: str
    holdout_auc: float
    converged: bool
    failed: bool
    train_aauc: float
    train_variability: float
    theta: tuple[float, ...] = ()


@dataclass(frozen=True)
class CvAggregate:
    lam: float
    cv_aauc: float
    var_about_cv: float
    var_about_train: float
    var_holdout_about_train: float
    completeness: float

    @property
    def sd_about_cv(self) -> float:
        return math.sqrt(self.var_about_cv)

    @property
    def sd_about_train(self) -> float:
        return math.sqrt(self.var_about_train)


@dataclass(frozen=True, eq=False)
class CvTable:
    rows: list[CvRow]
    aggregates: list[CvAggregate]
    centers: tuple[str, ...]
    case_counts: dict

    @property
    def completeness(self) -> float:
        return sum(not r.failed for r in self.rows) / len(self.rows)

    def aggregate(self, lam: float) -> CvAggregate:
        for a in self.aggregates:
            if a.lam == lam:
                return a
        raise KeyError(lam)

    def holdout(self, lam: float) -> dict:
        return {r.center: r.holdout_auc for r in self.rows if r.lam == lam}


def _fold(args):
    data, label, lam, fit_config = args
    train = data.drop_center(label)
    held = data.subset(data.center_index[label])
    try:
        rep = fit(train, fit_config.with_lambda(lam))
    except AdjAUCError as exc:
        log.warning("fold %s at lambda=%g failed: %s", label, lam, exc)
        return CvRow(lam, label, math.nan, False, True, math.nan, math.nan)
    d = held.outcome == 1
    scores = held.markers @ rep.theta
    return CvRow(
        lam=lam,
        center=label,
        holdout_auc=empirical_auc(scores[d], scores[~d]),
        converged=rep.converged,
        failed=False,
        train_aauc=rep.apparent.aauc,
        train_variability=rep.apparent.variability,
        theta=tuple(float(t) for t in rep.theta),
    )


def _aggregate(lam, rows, case_counts) -> CvAggregate:
    ok = [r for r in rows if not r.failed]
    if not ok:
        nan = math.nan
        return CvAggregate(lam, nan, nan, nan, nan, 0.0)
    n = np.array([case_counts[r.center] for r in ok], dtype=float)
    w = n / n.sum()
    auc = np.array([r.holdout_auc for r in ok])
    train = np.array([r.train_aauc for r in ok])
    cv = float(w @ auc)
    return CvAggregate(
        lam=lam,
        cv_aauc=cv,
        var_about_cv=float(w @ (auc - cv) ** 2),
        var_about_train=float(np.mean([r.train_variability for r in ok])),
        var_holdout_about_train=float(w @ (auc - train) ** 2),
        completeness=len(ok) / len(rows),
    )


def run_lococv(data: Dataset, config: CvConfig = CvConfig()) -> CvTable:
    """Fit on all centers but one, score the held-out center, for every lambda.

    Concordant centers are removed first. Each fold refits from scratch
    (logistic start, bandwidths, ascent) using only the retained centers.
    """
    views, dropped = split_centers(data)
    if len(views) < 3:
        raise ConfigurationError(f"LOCOCV needs at least 3 usable centers, found {len(views)}")
    labels = [v.center for v in views]
    usable = data.select_centers(labels) if dropped else data
    case_counts = {v.center: v.n_cases for v in views}
    fit_config = replace(config.fit, optimizer=replace(config.fit.optimizer, seed=config.seed))
    jobs = [(usable, c, lam, fit_config) for lam in config.lambdas for c in labels]
    rows = pmap(_fold, jobs, config.threads)
    aggs = []
    for k, lam in enumerate(config.lambdas):
        block = rows[k * len(labels):(k + 1) * len(labels)]
        aggs.append(_aggregate(lam, block, case_counts))
    return CvTable(rows, aggs, tuple(labels), case_counts)


def _fmt(x) -> str:
    return repr(float(x)) if not (isinstance(x, float) and math.isnan(x)) else "nan"


def emit_cv_table(table: CvTable, sink: TextIO, delimiter: str = ",", header_lines: Sequence[str] = ()) -> None:
    """Write one line per (lambda, held-out center); standard deviations are square roots of variances."""
    if not table.rows:
        raise ConfigurationError("CV table is empty")
    for line in header_lines:
        sink.write(f"# {line}\n")
    w = csv.writer(sink, delimiter=delimiter, lineterminator="\n")
    w.writerow(CV_COLUMNS)
    agg = {a.lam: a for a in table.aggregates}
    for r in table.rows:
        a = agg[r.lam]
        w.writerow(
            [
                _fmt(r.lam),
                _fmt(math.log10(r.lam)) if r.lam > 0 else "-inf",
                r.center,
                _fmt(r.holdout_auc),
                _fmt(a.cv_aauc),
                _fmt(math.sqrt(a.var_about_cv)),
                _fmt(math.sqrt(a.var_about_train)),
                int(r.converged and not r.failed),
            ]
        )


def read_cv_table(source: TextIO, delimiter: str = ",") -> list[dict]:
    lines = [ln for ln in source if not ln.startswith("#")]
    out = []
    for rec in csv.DictReader(lines, delimiter=delimiter):
        row = {k: float(v) for k, v in rec.items() if k != "center"}
        row["center"] = rec["center"]
        row["fold_converged"] = int(row["fold_converged"])
        out.append(row)
    return out
