"""Empirical center-specific AUCs, case-count weights and the adjusted AUC."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import CenterView
from .errors import ValidationError


def empirical_auc(case_scores, control_scores, ties: str = "strict") -> float:
    """Fraction of case/control pairs where the case scores higher.

    With ``ties="strict"`` tied pairs count 0, otherwise ``"half"`` counts
    them 0.5. Runs in O(n log n) via a sorted search over control scores; the
    integer pair count is exact, so the result matches the pairwise
    definition bit for bit.
    """
    cases = np.asarray(case_scores, dtype=float).ravel()
    controls = np.sort(np.asarray(control_scores, dtype=float).ravel())
    if cases.size == 0 or controls.size == 0:
        raise ValidationError("empirical_auc needs at least one case and one control")
    below = np.searchsorted(controls, cases, side="left")
    count = int(below.sum())
    denom = cases.size * controls.size
    if ties == "strict":
        return count / denom
    if ties == "half":
        tied = int((np.searchsorted(controls, cases, side="right") - below).sum())
        return (2 * count + tied) / (2 * denom)
    raise ValueError(f"unknown tie policy {ties!r}")


def pairwise_auc(case_scores, control_scores) -> float:
    """O(n^2) reference with the strict indicator."""
    count = 0
    for a in case_scores:
        for b in control_scores:
            if a > b:
                count += 1
    return count / (len(case_scores) * len(control_scores))


def center_weights(views: Sequence[CenterView]) -> np.ndarray:
    if not views:
        raise ValidationError("need at least one center")
    counts = np.array([v.n_cases for v in views], dtype=float)
    return counts / counts.sum()


def variability(center_aucs, weights, reference: float) -> float:
    """Weighted mean squared deviation of center AUCs from ``reference``."""
    a = np.asarray(center_aucs, dtype=float)
    w = np.asarray(weights, dtype=float)
    if a.shape != w.shape:
        raise ValidationError("center_aucs and weights differ in length")
    return float(np.sum(w * (a - reference) ** 2))


@dataclass(frozen=True, eq=False)
class PerformanceReport:
    centers: tuple[str, ...]
    aucs: np.ndarray
    weights: np.ndarray
    n_cases: tuple[int, ...]
    n_controls: tuple[int, ...]
    aauc: float
    variability: float
    reference: float | None = None
    variability_about_reference: float | None = None

    @property
    def sd(self) -> float:
        return float(np.sqrt(self.variability))

    @property
    def sd_about_reference(self) -> float | None:
        v = self.variability_about_reference
        return None if v is None else float(np.sqrt(v))

    @property
    def min_auc(self) -> float:
        return float(self.aucs.min())

    @property
    def max_auc(self) -> float:
        return float(self.aucs.max())

    def rows(self):
        """Per-center ``(center, n_cases, n_controls, weight, auc)`` tuples."""
        return [
            (c, nd, nb, float(w), float(a))
            for c, nd, nb, w, a in zip(self.centers, self.n_cases, self.n_controls, self.weights, self.aucs)
        ]

    def summary(self) -> dict:
        out = {
            "aauc": self.aauc,
            "variability": self.variability,
            "sd": self.sd,
            "min_auc": self.min_auc,
            "max_auc": self.max_auc,
        }
        if self.reference is not None:
            out["reference"] = self.reference
            out["variability_about_reference"] = self.variability_about_reference
            out["sd_about_reference"] = self.sd_about_reference
        return out


def report_from_aucs(views, aucs, reference=None) -> PerformanceReport:
    aucs = np.asarray(aucs, dtype=float)
    w = center_weights(views)
    aauc = float(np.dot(w, aucs))
    return PerformanceReport(
        centers=tuple(v.center for v in views),
        aucs=aucs,
        weights=w,
        n_cases=tuple(v.n_cases for v in views),
        n_controls=tuple(v.n_controls for v in views),
        aauc=aauc,
        variability=variability(aucs, w, aauc),
        reference=reference,
        variability_about_reference=None if reference is None else variability(aucs, w, reference),
    )


def center_aucs(theta, views: Sequence[CenterView], ties: str = "strict") -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    out = np.empty(len(views))
    for k, v in enumerate(views):
        if v.p != theta.shape[0]:
            raise ValidationError(f"theta has length {theta.shape[0]} but data have {v.p} markers")
        out[k] = empirical_auc(v.cases @ theta, v.controls @ theta, ties=ties)
    return out


def adjusted_auc(theta, views: Sequence[CenterView], reference: float | None = None) -> PerformanceReport:
    """Score every row with ``theta`` and summarize per-center empirical AUCs."""
    return report_from_aucs(views, center_aucs(theta, views), reference)
