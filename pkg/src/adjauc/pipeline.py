"""End-to-end SaAUC fit: logistic start, bandwidths, sphere ascent, evaluation."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, ScalingRecord, split_centers, standardize
from .errors import ConfigurationError, ValidationError
from .logistic_baseline import LogisticFit, direction_from, fit_logistic
from .roc_metrics import PerformanceReport, adjusted_auc
from .smooth_objective import ObjectiveSpec
from .sphere_optimizer import FitResult, OptimizerConfig, maximize_on_sphere, multi_start

log = logging.getLogger(__name__)

START_POLICIES = ("logistic", "user", "logistic+restarts")


@dataclass(frozen=True)
class FitConfig:
    lam: float = 0.0
    standardize: bool = False
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    start: str = "logistic"
    theta_start: tuple[float, ...] | None = None

    def __post_init__(self):
        if not (self.lam >= 0 and np.isfinite(self.lam)):
            raise ConfigurationError(f"lambda must be a finite value >= 0, got {self.lam}")
        if self.start not in START_POLICIES:
            raise ConfigurationError(f"start policy must be one of {START_POLICIES}")
        if self.start == "user" and self.theta_start is None:
            raise ConfigurationError("start policy 'user' needs theta_start")

    def with_lambda(self, lam: float) -> "FitConfig":
        return FitConfig(lam, self.standardize, self.optimizer, self.start, self.theta_start)


@dataclass(frozen=True, eq=False)
class FitReport:
    theta: np.ndarray
    result: FitResult
    apparent: PerformanceReport
    bandwidths: np.ndarray
    start: np.ndarray
    start_objective: float
    lam: float
    logistic: LogisticFit | None
    dropped: tuple[str, ...]
    scaling: ScalingRecord | None
    marker_names: tuple[str, ...]
    spec: ObjectiveSpec = field(repr=False)

    @property
    def theta_fit(self) -> np.ndarray:
        """Direction in the units the optimizer saw (standardized if requested)."""
        return self.result.theta

    @property
    def objective(self) -> float:
        return self.result.objective

    @property
    def converged(self) -> bool:
        return self.result.converged


def fit(data: Dataset, config: FitConfig = FitConfig()) -> FitReport:
    views_orig, dropped = split_centers(data)
    if config.lam > 0 and len(views_orig) < 2:
        raise ConfigurationError("a penalized fit needs at least 2 usable centers")

    scaling = None
    work = data
    if config.standardize:
        work, scaling = standardize(data.select_centers([v.center for v in views_orig]))
    views = split_centers(work)[0] if config.standardize else views_orig

    logistic = None
    if config.start == "user":
        start = np.asarray(config.theta_start, dtype=float)
        if start.shape != (data.p,):
            raise ValidationError(f"theta_start must have length {data.p}")
        if scaling is not None:
            # express the user direction in standardized units
            start = start * scaling.scales
        start = start / np.linalg.norm(start)
    else:
        logistic = fit_logistic(views)
        start = direction_from(logistic)

    spec = ObjectiveSpec.build(views, start, config.lam)
    start_objective = spec.value(start)
    if config.start == "logistic+restarts" or config.optimizer.restarts > 0:
        result = multi_start(spec.value, None, [start], config.optimizer, spec.value_and_grad)
    else:
        result = maximize_on_sphere(spec.value, None, start, config.optimizer, spec.value_and_grad)

    theta = result.theta if scaling is None else scaling.to_original(result.theta)
    apparent = adjusted_auc(theta, views_orig)
    return FitReport(
        theta=theta,
        result=result,
        apparent=apparent,
        bandwidths=spec.bandwidths,
        start=start,
        start_objective=start_objective,
        lam=config.lam,
        logistic=logistic,
        dropped=tuple(dropped),
        scaling=scaling,
        marker_names=data.marker_names,
        spec=spec,
    )


def evaluate(theta, data: Dataset, reference: float | None = None) -> PerformanceReport:
    """Empirical per-center AUCs of ``theta`` on ``data``.

    ``reference`` is an external adjusted AUC (typically the training value)
    about which a second variability is reported.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (data.p,):
        raise ValidationError(f"theta has length {theta.shape[0]} but data have {data.p} markers")
    nrm = np.linalg.norm(theta)
    if not np.isclose(nrm, 1.0, rtol=0, atol=1e-10):
        warnings.warn("theta is not unit norm; renormalizing", RuntimeWarning)
        theta = theta / nrm
    views, _ = split_centers(data)
    return adjusted_auc(theta, views, reference)
