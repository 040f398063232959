"""Logistic regression with fixed center intercepts, fitted by IRLS.

Serves as the GLM comparator and as the source of starting directions.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import expit as _expit

from .dataset import CenterView
from .errors import SingularDesignError, ValidationError

log = logging.getLogger(__name__)

SLOPE_CAP = 30.0
RIDGE = 1e-10


@dataclass(frozen=True, eq=False)
class LogisticFit:
    slopes: np.ndarray
    intercepts: np.ndarray
    centers: tuple[str, ...]
    converged: bool
    iterations: int
    deviance: float
    deviance_trace: list[float] = field(repr=False, default_factory=list)
    warning: str = ""


def _design(views: Sequence[CenterView]):
    m = len(views)
    blocks, ys = [], []
    for k, v in enumerate(views):
        x = v.all_rows()
        onehot = np.zeros((x.shape[0], m))
        onehot[:, k] = 1.0
        blocks.append(np.hstack([onehot, x]))
        ys.append(np.r_[np.ones(v.n_cases), np.zeros(v.n_controls)])
    return np.vstack(blocks), np.concatenate(ys)


def _deviance(eta, y):
    return float(2.0 * np.sum(np.logaddexp(0.0, eta) - y * eta))


def fit_logistic(
    views: Sequence[CenterView],
    max_iterations: int = 100,
    tol: float = 1e-10,
    slope_cap: float = SLOPE_CAP,
) -> LogisticFit:
    """IRLS for ``logit P(D=1 | X, C) = alpha_C + beta'X``.

    Steps are halved while the deviance increases. If any slope, measured in
    pooled marker standard deviations, exceeds ``slope_cap`` the fit stops
    with ``converged=False`` and the coefficients clipped to the cap; this is
    how quasi-complete separation shows up.
    """
    if not views:
        raise ValidationError("fit_logistic needs at least one center")
    Z, y = _design(views)
    m = len(views)
    if np.linalg.matrix_rank(Z) < Z.shape[1]:
        raise SingularDesignError("design with center indicators is rank deficient")
    marker_sd = Z[:, m:].std(axis=0)
    marker_sd[marker_sd == 0] = 1.0
    limit = slope_cap / marker_sd

    beta = np.zeros(Z.shape[1])
    for k, v in enumerate(views):
        beta[k] = np.log(v.n_cases / v.n_controls)
    eta = Z @ beta
    dev = _deviance(eta, y)
    trace = [dev]
    converged = False
    note = ""
    it = 0
    ridge = RIDGE * np.eye(Z.shape[1])
    while it < max_iterations:
        mu = _expit(eta)
        w = mu * (1.0 - mu)
        H = Z.T @ (w[:, None] * Z) + ridge
        score = Z.T @ (y - mu)
        try:
            step = np.linalg.solve(H, score)
        except np.linalg.LinAlgError:
            raise SingularDesignError("IRLS normal equations are singular") from None
        t = 1.0
        for _ in range(30):
            cand = beta + t * step
            eta_c = Z @ cand
            dev_c = _deviance(eta_c, y)
            if dev_c <= dev:
                break
            t *= 0.5
        else:
            converged = True  # no descent available at machine precision
            break
        it += 1
        beta, eta = cand, eta_c
        dev_old, dev = dev, dev_c
        trace.append(dev)
        if np.any(np.abs(beta[m:]) > limit):
            beta[m:] = np.clip(beta[m:], -limit, limit)
            note = "slopes hit the separation cap"
            break
        if abs(dev_old - dev) / (abs(dev) + 0.1) < tol:
            converged = True
            break
    if not converged and not note:
        note = f"IRLS did not converge in {max_iterations} iterations"
    if note:
        log.warning("logistic fit: %s", note)
    return LogisticFit(
        slopes=beta[m:].copy(),
        intercepts=beta[:m].copy(),
        centers=tuple(v.center for v in views),
        converged=converged,
        iterations=it,
        deviance=dev,
        deviance_trace=trace,
        warning=note,
    )


def logistic_score(fit: LogisticFit, views: Sequence[CenterView]) -> np.ndarray:
    """Gradient of the log-likelihood at the fitted coefficients."""
    Z, y = _design(views)
    beta = np.r_[fit.intercepts, fit.slopes]
    return Z.T @ (y - _expit(Z @ beta))


def direction_from(fit: LogisticFit) -> np.ndarray:
    s = np.asarray(fit.slopes, dtype=float)
    nrm = np.linalg.norm(s)
    if nrm == 0 or not np.isfinite(nrm):
        warnings.warn("logistic slopes are all zero; using the equal-weight direction", RuntimeWarning)
        return np.full(s.shape[0], 1.0 / np.sqrt(s.shape[0]))
    return s / nrm
