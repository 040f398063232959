"""Probit-smoothed center AUCs and the (penalized) smoothed adjusted AUC.

For center ``c`` with case rows ``X_D`` and control rows ``X_Dbar`` the
smoothed AUC is the mean of ``Phi(theta'(x_i - x_j) / h_c)`` over all
case/control pairs. The objective is the case-weighted average of these,
minus ``lam`` times their case-weighted variance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import ndtr

from .dataset import CenterView
from .errors import ValidationError
from .roc_metrics import center_weights

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)
BANDWIDTH_REL_FLOOR = 1e-4
BANDWIDTH_ABS_FLOOR = 1e-8


def normal_pdf(z):
    return _INV_SQRT_2PI * np.exp(-0.5 * np.square(z))


@dataclass(frozen=True, eq=False)
class Bandwidths:
    h: np.ndarray
    floor: float

    def __len__(self):
        return len(self.h)


def bandwidth_from_scores(score_sd: float, n: int) -> float:
    return score_sd * n ** (-1.0 / 3.0)


def bandwidths(theta_start, views: Sequence[CenterView]) -> Bandwidths:
    """``h_c = sd_c * n_c^(-1/3)`` from the starting direction's scores.

    ``sd_c`` is the sample standard deviation (ddof=1) of the scores of all
    observations in center ``c``. Values are floored at 1e-4 times the pooled
    score standard deviation, and never below 1e-8.
    """
    theta = np.asarray(theta_start, dtype=float)
    per_center = [v.all_rows() @ theta for v in views]
    pooled = np.concatenate(per_center)
    pooled_sd = float(pooled.std(ddof=1)) if pooled.size > 1 else 0.0
    floor = max(BANDWIDTH_REL_FLOOR * pooled_sd, BANDWIDTH_ABS_FLOOR)
    h = np.empty(len(views))
    for k, s in enumerate(per_center):
        sd = float(s.std(ddof=1)) if s.size > 1 else 0.0
        h[k] = max(bandwidth_from_scores(sd, s.size), floor)
    return Bandwidths(h, floor)


def smooth_center_auc(theta, view: CenterView, h: float) -> float:
    theta = np.asarray(theta, dtype=float)
    z = np.subtract.outer(view.cases @ theta, view.controls @ theta) / h
    return float(ndtr(z).mean())


def _center_value_grad(theta, view: CenterView, h: float, need_grad: bool):
    sc = view.cases @ theta
    sb = view.controls @ theta
    z = np.subtract.outer(sc, sb) / h
    value = float(ndtr(z).mean())
    if not need_grad:
        return value, None
    phi = normal_pdf(z)
    # sum_ij phi_ij (x_i - x_j) split into case and control parts
    g = phi.sum(axis=1) @ view.cases - phi.sum(axis=0) @ view.controls
    return value, g / (z.size * h)


@dataclass(frozen=True, eq=False)
class ObjectiveSpec:
    views: tuple[CenterView, ...]
    weights: np.ndarray
    bandwidths: np.ndarray
    lam: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "views", tuple(self.views))
        w = np.asarray(self.weights, dtype=float)
        h = np.asarray(getattr(self.bandwidths, "h", self.bandwidths), dtype=float)
        if not self.lam >= 0:
            raise ValidationError(f"penalty lambda must be >= 0, got {self.lam}")
        if len(w) != len(self.views) or len(h) != len(self.views):
            raise ValidationError("need one weight and one bandwidth per center")
        if abs(w.sum() - 1.0) > 1e-12 or np.any(w < 0):
            raise ValidationError("weights must be nonnegative and sum to 1")
        if np.any(~(h > 0)):
            raise ValidationError("bandwidths must be positive")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bandwidths", h)

    @classmethod
    def build(cls, views, theta_start, lam: float = 0.0) -> "ObjectiveSpec":
        return cls(tuple(views), center_weights(views), bandwidths(theta_start, views).h, lam)

    @property
    def p(self) -> int:
        return self.views[0].p

    def with_lambda(self, lam: float) -> "ObjectiveSpec":
        return ObjectiveSpec(self.views, self.weights, self.bandwidths, lam)

    def _check(self, theta):
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.p,):
            raise ValidationError(f"theta must have length {self.p}")
        return theta

    def center_values(self, theta) -> np.ndarray:
        theta = self._check(theta)
        return np.array([_center_value_grad(theta, v, h, False)[0] for v, h in zip(self.views, self.bandwidths)])

    def value_and_grad(self, theta):
        theta = self._check(theta)
        m = len(self.views)
        R = np.empty(m)
        G = np.empty((m, self.p))
        for k, (v, h) in enumerate(zip(self.views, self.bandwidths)):
            R[k], G[k] = _center_value_grad(theta, v, h, True)
        w = self.weights
        aR = float(w @ R)
        g_aR = w @ G
        if self.lam == 0:
            return aR, g_aR
        dev = R - aR
        value = aR - self.lam * float(w @ dev**2)
        grad = g_aR - 2.0 * self.lam * ((w * dev) @ (G - g_aR))
        return value, grad

    def value(self, theta) -> float:
        R = self.center_values(theta)
        aR = float(self.weights @ R)
        if self.lam == 0:
            return aR
        return aR - self.lam * float(self.weights @ (R - aR) ** 2)

    def gradient(self, theta) -> np.ndarray:
        return self.value_and_grad(theta)[1]

    def smoothed_variability(self, theta) -> float:
        R = self.center_values(theta)
        aR = float(self.weights @ R)
        return float(self.weights @ (R - aR) ** 2)


def smooth_aauc(theta, spec: ObjectiveSpec) -> float:
    return float(spec.weights @ spec.center_values(theta))


def penalized_objective(theta, spec: ObjectiveSpec) -> float:
    return spec.value(theta)


def gradient(theta, spec: ObjectiveSpec) -> np.ndarray:
    return spec.gradient(theta)
