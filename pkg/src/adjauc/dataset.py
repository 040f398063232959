"""Grouped case-control data: loading, validation, per-center views, scaling."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import (
    DegenerateMarkerError,
    EmptyInputError,
    ParseError,
    SchemaError,
    UnusableDataError,
    ValidationError,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Observation:
    center: str
    outcome: int
    markers: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class Dataset:
    """Observations stored column-wise.

    ``centers`` holds string labels, ``outcome`` 0/1 integers and ``markers``
    an ``(n, p)`` float matrix. Center order is first appearance and is fixed
    for the lifetime of the object.
    """

    centers: np.ndarray
    outcome: np.ndarray
    markers: np.ndarray
    marker_names: tuple[str, ...] = ()
    center_index: dict = field(init=False, repr=False)

    def __post_init__(self):
        centers = np.array(self.centers, dtype=str)
        outcome = np.asarray(self.outcome)
        markers = np.array(self.markers, dtype=float)
        if markers.ndim == 1:
            markers = markers[:, None]
        n = centers.shape[0]
        if n == 0:
            raise EmptyInputError("dataset has no observations")
        if outcome.shape != (n,) or markers.shape[0] != n:
            raise ValidationError("centers, outcome and markers disagree in length")
        if markers.shape[1] < 1:
            raise ValidationError("need at least one marker")
        if not np.all((outcome == 0) | (outcome == 1)):
            raise ValidationError("outcome must be 0 or 1")
        if not np.all(np.isfinite(markers)):
            raise ValidationError("markers contain non-finite values")
        names = tuple(self.marker_names) or tuple(f"x{k + 1}" for k in range(markers.shape[1]))
        if len(names) != markers.shape[1]:
            raise ValidationError("marker_names length does not match marker columns")

        index: dict[str, list[int]] = {}
        for i, c in enumerate(centers):
            index.setdefault(c, []).append(i)
        for arr in (centers, markers):
            arr.setflags(write=False)
        outcome = outcome.astype(np.int8)
        outcome.setflags(write=False)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "outcome", outcome)
        object.__setattr__(self, "markers", markers)
        object.__setattr__(self, "marker_names", names)
        object.__setattr__(
            self, "center_index", {c: np.asarray(ix) for c, ix in index.items()}
        )

    @classmethod
    def from_observations(cls, observations: Iterable[Observation], marker_names=()):
        obs = list(observations)
        if not obs:
            raise EmptyInputError("no observations")
        p = len(obs[0].markers)
        if any(len(o.markers) != p for o in obs):
            raise ValidationError("observations have differing marker counts")
        return cls(
            centers=np.array([o.center for o in obs]),
            outcome=np.array([o.outcome for o in obs]),
            markers=np.array([o.markers for o in obs], dtype=float).reshape(len(obs), p),
            marker_names=marker_names,
        )

    @property
    def n(self) -> int:
        return self.outcome.shape[0]

    @property
    def p(self) -> int:
        return self.markers.shape[1]

    @property
    def center_labels(self) -> list[str]:
        return list(self.center_index)

    def observations(self) -> list[Observation]:
        return [
            Observation(str(c), int(d), tuple(float(v) for v in x))
            for c, d, x in zip(self.centers, self.outcome, self.markers)
        ]

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows)
        return Dataset(self.centers[rows], self.outcome[rows], self.markers[rows], self.marker_names)

    def select_centers(self, labels: Sequence[str]) -> "Dataset":
        rows = np.concatenate([self.center_index[c] for c in labels])
        return self.subset(np.sort(rows))

    def drop_center(self, label: str) -> "Dataset":
        return self.select_centers([c for c in self.center_index if c != label])

    def with_markers(self, markers: np.ndarray) -> "Dataset":
        return Dataset(self.centers, self.outcome, markers, self.marker_names)


@dataclass(frozen=True, eq=False)
class CenterView:
    center: str
    cases: np.ndarray
    controls: np.ndarray

    def __post_init__(self):
        if self.cases.shape[0] < 1 or self.controls.shape[0] < 1:
            raise ValidationError(f"center {self.center!r} needs at least one case and one control")

    @property
    def n_cases(self) -> int:
        return self.cases.shape[0]

    @property
    def n_controls(self) -> int:
        return self.controls.shape[0]

    @property
    def n(self) -> int:
        return self.n_cases + self.n_controls

    @property
    def p(self) -> int:
        return self.cases.shape[1]

    def all_rows(self) -> np.ndarray:
        return np.vstack([self.cases, self.controls])


def split_centers(data: Dataset) -> tuple[list[CenterView], list[str]]:
    """Per-center case/control views; concordant centers are dropped."""
    views, dropped = [], []
    for label, rows in data.center_index.items():
        d = data.outcome[rows]
        x = data.markers[rows]
        if d.all() or not d.any():
            dropped.append(label)
            continue
        views.append(CenterView(label, x[d == 1], x[d == 0]))
    if dropped:
        log.warning("dropping %d concordant center(s): %s", len(dropped), ", ".join(dropped))
    if not views:
        raise UnusableDataError("every center is concordant (all cases or all controls)")
    return views, dropped


@dataclass(frozen=True, eq=False)
class ScalingRecord:
    means: np.ndarray
    scales: np.ndarray

    def transform(self, markers: np.ndarray) -> np.ndarray:
        return (markers - self.means) / self.scales

    def to_original(self, theta, normalize: bool = True) -> np.ndarray:
        """Coefficients on the original marker scale.

        Scores differ from the standardized ones by a constant shift and a
        positive factor, so every empirical AUC is unchanged.
        """
        out = np.asarray(theta, dtype=float) / self.scales
        if normalize:
            out = out / np.linalg.norm(out)
        return out

    def offset(self, theta) -> float:
        """Constant removed from original-unit scores by standardization."""
        return float(np.dot(self.to_original(theta, normalize=False), self.means))


def standardize(data: Dataset) -> tuple[Dataset, ScalingRecord]:
    means = data.markers.mean(axis=0)
    if data.n < 2:
        raise DegenerateMarkerError(data.marker_names[0])
    sds = data.markers.std(axis=0, ddof=1)
    for name, s in zip(data.marker_names, sds):
        if not s > 0:
            raise DegenerateMarkerError(name)
    rec = ScalingRecord(means, sds)
    return data.with_markers(rec.transform(data.markers)), rec


def load_table(
    source: TextIO | str,
    center_col: str = "center",
    outcome_col: str = "outcome",
    marker_cols: Sequence[str] | None = None,
    delimiter: str = ",",
) -> Dataset:
    """Read a delimited table with a header row.

    ``source`` is an open text stream or a path. Row numbers in parse errors
    count data rows from 1 (the header is not counted). With ``marker_cols``
    unset, every column other than center/outcome is a marker, in file order.
    """
    if isinstance(source, str):
        with open(source, newline="", encoding="utf-8") as fh:
            return load_table(fh, center_col, outcome_col, marker_cols, delimiter)

    reader = csv.reader(source, delimiter=delimiter)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise EmptyInputError("input has no header row") from None
    for col in (center_col, outcome_col):
        if col not in header:
            raise SchemaError(col)
    if marker_cols is None:
        marker_cols = [h for h in header if h not in (center_col, outcome_col)]
    if not marker_cols:
        raise SchemaError("<markers>", "no marker columns")
    for col in marker_cols:
        if col not in header:
            raise SchemaError(col)
    ci, oi = header.index(center_col), header.index(outcome_col)
    mi = [header.index(c) for c in marker_cols]

    centers, outcome, markers = [], [], []
    for rownum, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < len(header):
            row = row + [""] * (len(header) - len(row))
        centers.append(row[ci].strip())
        d = row[oi].strip()
        if d not in ("0", "1", "0.0", "1.0"):
            raise ParseError(rownum, outcome_col, f"outcome {d!r} is not 0 or 1")
        outcome.append(int(float(d)))
        vals = []
        for col, j in zip(marker_cols, mi):
            cell = row[j].strip()
            if not cell:
                raise ParseError(rownum, col, "missing value")
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(rownum, col, f"cannot parse {cell!r} as a number") from None
            if not math.isfinite(v):
                raise ParseError(rownum, col, f"non-finite value {cell!r}")
            vals.append(v)
        markers.append(vals)
    if not outcome:
        raise EmptyInputError("input has no data rows")
    return Dataset(np.array(centers), np.array(outcome), np.array(markers), tuple(marker_cols))


def write_table(data: Dataset, sink: TextIO, delimiter: str = ",") -> None:
    w = csv.writer(sink, delimiter=delimiter, lineterminator="\n")
    w.writerow(["center", "outcome", *data.marker_names])
    for c, d, x in zip(data.centers, data.outcome, data.markers):
        w.writerow([c, int(d), *(repr(float(v)) for v in x)])


def loads_table(text: str, **kwargs) -> Dataset:
    return load_table(io.StringIO(text), **kwargs)
