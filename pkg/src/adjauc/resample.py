"""Bootstrap correction of the optimism in an apparent adjusted AUC."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap
from .dataset import Dataset, split_centers
from .errors import AdjAUCError, BootstrapFailure, ConfigurationError
from .pipeline import FitConfig, fit
from .roc_metrics import adjusted_auc

log = logging.getLogger(__name__)

SCHEMES = ("stratified", "center")
MAX_REDRAWS = 10


@dataclass(frozen=True)
class BootstrapConfig:
    B: int = 200
    scheme: str = "stratified"
    seed: int = 0
    fit: FitConfig = field(default_factory=FitConfig)
    threads: int = 1

    def __post_init__(self):
        if self.B < 1:
            raise ConfigurationError("B must be >= 1")
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"scheme must be one of {SCHEMES}")


@dataclass(frozen=True, eq=False)
class BootstrapResult:
    apparent: float
    corrected: float
    optimism: np.ndarray
    skipped: int

    @property
    def mean_optimism(self) -> float:
        return float(np.mean(self.optimism))


def resample_stratified(data: Dataset, rng: np.random.Generator) -> Dataset:
    """Resample cases and controls with replacement inside each center, keeping every count."""
    rows = []
    for label, ix in data.center_index.items():
        d = data.outcome[ix]
        for stratum in (ix[d == 1], ix[d == 0]):
            if stratum.size:
                rows.append(rng.choice(stratum, size=stratum.size, replace=True))
    return data.subset(np.concatenate(rows))


def resample_centers(data: Dataset, rng: np.random.Generator) -> Dataset:
    """Draw centers with replacement; repeated draws become distinct centers."""
    labels = list(data.center_index)
    picks = rng.integers(0, len(labels), size=len(labels))
    centers, outcome, markers = [], [], []
    for k, j in enumerate(picks):
        ix = data.center_index[labels[j]]
        centers.append(np.full(ix.size, f"{labels[j]}#{k}"))
        outcome.append(data.outcome[ix])
        markers.append(data.markers[ix])
    return Dataset(np.concatenate(centers), np.concatenate(outcome), np.vstack(markers), data.marker_names)


def bootstrap_sample(data: Dataset, scheme: str, rng: np.random.Generator) -> Dataset:
    if scheme == "stratified":
        return resample_stratified(data, rng)
    if scheme == "center":
        return resample_centers(data, rng)
    raise ConfigurationError(f"unknown scheme {scheme!r}")


def _replicate(args):
    data, views, b, config = args
    for attempt in range(MAX_REDRAWS + 1):
        rng = np.random.default_rng([config.seed, b, attempt])
        boot = bootstrap_sample(data, config.scheme, rng)
        try:
            rep = fit(boot, config.fit)
        except AdjAUCError as exc:
            log.info("bootstrap replicate %d attempt %d failed: %s", b, attempt, exc)
            continue
        return rep.apparent.aauc - adjusted_auc(rep.theta, views).aauc
    return None


def bootstrap_corrected_aauc(data: Dataset, config: BootstrapConfig = BootstrapConfig()) -> BootstrapResult:
    """Apparent aAUC minus the mean bootstrap optimism.

    Optimism of replicate ``b`` is the apparent aAUC of the fit on the
    bootstrap data minus that fit's aAUC on the original data. Replicate
    ``b`` uses the stream seeded by ``(seed, b, attempt)``.
    """
    apparent = fit(data, config.fit).apparent.aauc
    views, _ = split_centers(data)
    jobs = [(data, views, b, config) for b in range(config.B)]
    draws = pmap(_replicate, jobs, config.threads)
    optimism = np.array([d for d in draws if d is not None])
    skipped = sum(d is None for d in draws)
    if optimism.size == 0:
        raise BootstrapFailure(f"all {config.B} bootstrap replicates failed")
    if skipped:
        log.warning("skipped %d of %d bootstrap replicates", skipped, config.B)
    return BootstrapResult(apparent, apparent - float(np.mean(optimism)), optimism, skipped)
