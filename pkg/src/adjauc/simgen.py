"""Seeded simulation populations and the replication-study driver.

Three families are available:

``two_marker_outlier``
    Two markers drawn from a normal mixture with an outlier component and
    a cubic true risk model.
``ten_marker``
    Ten normal markers with center-dependent means; only the first two are
    exposed for fitting.
``four_marker``
    Four independent normal markers with center-specific variances and
    center-specific coefficients, under a symmetric or asymmetric link.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import expit

from ._parallel import pmap
from .dataset import CenterView, Dataset, split_centers
from .errors import AdjAUCError, ConfigurationError
from .logistic_baseline import direction_from, fit_logistic
from .pipeline import FitConfig, fit
from .roc_metrics import adjusted_auc

log = logging.getLogger(__name__)

FAMILIES = ("two_marker_outlier", "ten_marker", "four_marker")
METHODS = ("GLM", "SaAUC")


@dataclass(frozen=True)
class PopulationSpec:
    family: str = "two_marker_outlier"
    M: int = 50
    N_c: int = 5000
    m: int = 6
    n_c: int = 200
    pi: float = 0.05
    link: str = "f"
    variance_mode: str = "per_marker"
    sigma_range: tuple[float, float] = (0.5, 1.5)
    gamma_range: tuple[float, float] = (0.5, 1.5)
    intercept_range: tuple[float, float] | None = None
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"family must be one of {FAMILIES}")
        if not (1 <= self.m <= self.M):
            raise ConfigurationError("need 1 <= m <= M")
        if not (1 <= self.n_c <= self.N_c):
            raise ConfigurationError("need 1 <= n_c <= N_c")
        if not 0 <= self.pi <= 1:
            raise ConfigurationError("pi must lie in [0, 1]")
        if self.link not in ("f", "g"):
            raise ConfigurationError("link must be 'f' or 'g'")
        if self.variance_mode not in ("per_marker", "per_center"):
            raise ConfigurationError("variance_mode must be 'per_marker' or 'per_center'")
        for lo, hi in (self.sigma_range, self.gamma_range):
            if lo > hi:
                raise ConfigurationError("ranges must be (low, high) with low <= high")
        if self.family == "four_marker" and self.sigma_range[0] <= 0:
            raise ConfigurationError("sigma_range must be positive")

    @property
    def intercepts(self) -> tuple[float, float]:
        if self.intercept_range is not None:
            return tuple(self.intercept_range)
        return (0.2, 0.8) if self.family == "ten_marker" else (-1.0, 1.0)


@dataclass(frozen=True, eq=False)
class Population:
    """``markers[c]`` is the ``(N_c, p)`` matrix of center ``c``."""

    markers: list[np.ndarray]
    outcomes: list[np.ndarray]
    intercepts: np.ndarray
    outlier: list[np.ndarray] | None = None
    params: dict = field(default_factory=dict)

    @property
    def M(self) -> int:
        return len(self.markers)


def link_f(v):
    return expit(v)


def link_g(v):
    """Asymmetric logistic link; both branches give 0.5 at 0."""
    v = np.asarray(v, dtype=float)
    return np.where(v < 0, expit(v / 3.0), expit(3.0 * v))


def _rng(spec_or_seed) -> np.random.Generator:
    seed = spec_or_seed.seed if isinstance(spec_or_seed, PopulationSpec) else spec_or_seed
    return np.random.default_rng(seed)


def gen_two_marker(spec: PopulationSpec, rng: np.random.Generator | None = None) -> Population:
    rng = _rng(spec) if rng is None else rng
    cov0 = 0.2 * np.array([[1.0, 0.9], [0.9, 1.0]])
    chol0 = np.linalg.cholesky(cov0)
    lo, hi = spec.intercepts
    intercepts = rng.uniform(lo, hi, size=spec.M)
    markers, outcomes, outl = [], [], []
    for c in range(spec.M):
        z0 = rng.standard_normal((spec.N_c, 2)) @ chol0.T
        z1 = rng.standard_normal((spec.N_c, 2)) * np.sqrt(2.0)
        delta = rng.random(spec.N_c) < spec.pi
        x = np.where(delta[:, None], z1, z0)
        v = intercepts[c] + 4 * x[:, 0] - 3 * x[:, 1] - (x[:, 0] - x[:, 1]) ** 3
        d = (rng.random(spec.N_c) < expit(v)).astype(np.int8)
        markers.append(x)
        outcomes.append(d)
        outl.append(delta)
    return Population(markers, outcomes, intercepts, outl)


def ten_marker_means(M: int) -> np.ndarray:
    """Center means -1 for the first fifth, +1 up to 80%, 0 for the rest.

    With ``M = 50`` this is -1 for centers 1-10, +1 for 11-40, 0 for 41-50.
    """
    mu = np.zeros(M)
    a, b = int(round(0.2 * M)), int(round(0.8 * M))
    mu[:a] = -1.0
    mu[a:b] = 1.0
    return mu


_TEN_COEF = np.array([0.0, -2, 1, -3, 1, -4, 1, -1, 1, -1])


def gen_ten_marker(spec: PopulationSpec, rng: np.random.Generator | None = None) -> Population:
    rng = _rng(spec) if rng is None else rng
    lo, hi = spec.intercepts
    intercepts = rng.uniform(lo, hi, size=spec.M)
    mu = ten_marker_means(spec.M)
    markers, outcomes = [], []
    for c in range(spec.M):
        x = mu[c] + rng.standard_normal((spec.N_c, 10))
        v = intercepts[c] + x[:, 0] ** 2 + x @ _TEN_COEF
        d = (rng.random(spec.N_c) < expit(v)).astype(np.int8)
        markers.append(x[:, :2].copy())
        outcomes.append(d)
    return Population(markers, outcomes, intercepts, params={"mu": mu})


def gen_four_marker(spec: PopulationSpec, rng: np.random.Generator | None = None) -> Population:
    rng = _rng(spec) if rng is None else rng
    lo, hi = spec.intercepts
    intercepts = rng.uniform(lo, hi, size=spec.M)
    if spec.variance_mode == "per_marker":
        sigma = rng.uniform(*spec.sigma_range, size=(spec.M, 4))
    else:
        sigma = np.repeat(rng.uniform(*spec.sigma_range, size=(spec.M, 1)), 4, axis=1)
    gamma = rng.uniform(*spec.gamma_range, size=(spec.M, 4))
    signs = np.array([1.0, -1.0, 1.0, -1.0])
    link = link_f if spec.link == "f" else link_g
    markers, outcomes = [], []
    for c in range(spec.M):
        x = rng.standard_normal((spec.N_c, 4)) * sigma[c]
        v = intercepts[c] + x @ (signs * gamma[c])
        d = (rng.random(spec.N_c) < link(v)).astype(np.int8)
        markers.append(x)
        outcomes.append(d)
    return Population(markers, outcomes, intercepts, params={"sigma": sigma, "gamma": gamma})


GENERATORS = {
    "two_marker_outlier": gen_two_marker,
    "ten_marker": gen_ten_marker,
    "four_marker": gen_four_marker,
}


def generate(spec: PopulationSpec, rng: np.random.Generator | None = None) -> Population:
    return GENERATORS[spec.family](spec, rng)


@dataclass(frozen=True, eq=False)
class Study:
    train: Dataset
    test: list[CenterView]
    train_centers: np.ndarray
    test_centers: np.ndarray
    test_dropped: tuple[str, ...] = ()


def sample_study(population: Population, spec: PopulationSpec, rng: np.random.Generator | None = None) -> Study:
    """Sample ``m`` training centers and ``n_c`` rows within each; the rest is test data."""
    rng = _rng(spec.seed + 1) if rng is None else rng
    chosen = np.sort(rng.choice(population.M, size=spec.m, replace=False))
    rest = np.setdiff1d(np.arange(population.M), chosen)
    labels, outs, xs = [], [], []
    for c in chosen:
        rows = np.sort(rng.choice(population.markers[c].shape[0], size=spec.n_c, replace=False))
        labels.append(np.full(spec.n_c, f"c{c + 1}"))
        outs.append(population.outcomes[c][rows])
        xs.append(population.markers[c][rows])
    train = Dataset(np.concatenate(labels), np.concatenate(outs), np.vstack(xs))
    test, dropped = [], []
    for c in rest:
        d = population.outcomes[c]
        x = population.markers[c]
        if d.all() or not d.any():
            dropped.append(f"c{c + 1}")
            continue
        test.append(CenterView(f"c{c + 1}", x[d == 1], x[d == 0]))
    return Study(train, test, chosen, rest, tuple(dropped))


@dataclass(frozen=True)
class ReplicationRecord:
    replication: int
    method: str
    aauc: float
    min_auc: float
    max_auc: float
    train_dropped: int
    start_objective: float = float("nan")
    final_objective: float = float("nan")
    converged: bool = True
    theta: tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class StudySummary:
    methods: tuple[str, ...]
    mean: dict
    sd: dict
    records: list[ReplicationRecord] = field(repr=False)
    replications: int = 0
    failures: int = 0

    @property
    def completeness(self) -> float:
        return (self.replications - self.failures) / self.replications if self.replications else 0.0

    def table_rows(self):
        """``(method, stat, mean, sd)`` rows, one per method and statistic."""
        rows = []
        for meth in self.methods:
            for stat in ("aauc", "min_auc", "max_auc"):
                rows.append((meth, stat, self.mean[meth][stat], self.sd[meth][stat]))
        return rows


def replication_rng(seed: int, replication: int) -> np.random.Generator:
    return np.random.default_rng([seed, replication])


def run_replication(spec: PopulationSpec, replication: int, methods=METHODS, fit_config: FitConfig = FitConfig()):
    rng = replication_rng(spec.seed, replication)
    pop = generate(spec, rng)
    study = sample_study(pop, spec, rng)
    views, dropped = split_centers(study.train)
    records = []
    glm_dir = None
    if "GLM" in methods or fit_config.start != "user":
        glm_dir = direction_from(fit_logistic(views))
    for meth in methods:
        if meth == "GLM":
            theta = glm_dir
            start_obj = final_obj = float("nan")
            converged = True
        elif meth == "SaAUC":
            rep = fit(study.train, fit_config)
            theta = rep.theta
            start_obj, final_obj = rep.start_objective, rep.objective
            converged = rep.converged
        else:
            raise ConfigurationError(f"unknown method {meth!r}")
        perf = adjusted_auc(theta, study.test)
        records.append(
            ReplicationRecord(
                replication=replication,
                method=meth,
                aauc=perf.aauc,
                min_auc=perf.min_auc,
                max_auc=perf.max_auc,
                train_dropped=len(dropped),
                start_objective=start_obj,
                final_objective=final_obj,
                converged=converged,
                theta=tuple(float(t) for t in theta),
            )
        )
    return records


def _run_one(args):
    spec, r, methods, fit_config = args
    try:
        return run_replication(spec, r, methods, fit_config)
    except AdjAUCError as exc:
        log.warning("replication %d failed: %s", r, exc)
        return None


def summarize(records: Sequence[ReplicationRecord], methods, replications: int, failures: int) -> StudySummary:
    mean, sd = {}, {}
    for meth in methods:
        rs = [r for r in records if r.method == meth]
        mean[meth], sd[meth] = {}, {}
        for stat in ("aauc", "min_auc", "max_auc"):
            vals = np.array([getattr(r, stat) for r in rs])
            mean[meth][stat] = float(vals.mean()) if vals.size else float("nan")
            sd[meth][stat] = float(vals.std(ddof=1)) if vals.size > 1 else float("nan")
    return StudySummary(tuple(methods), mean, sd, list(records), replications, failures)


def run_study(
    spec: PopulationSpec,
    replications: int,
    methods: Sequence[str] = METHODS,
    fit_config: FitConfig = FitConfig(),
    threads: int = 1,
) -> StudySummary:
    """Repeat generate / sample / fit / evaluate and summarize test performance.

    Replication ``r`` draws everything from the stream seeded by
    ``(spec.seed, r)``, so results do not depend on ``threads``.
    """
    if replications < 1:
        raise ConfigurationError("replications must be >= 1")
    for meth in methods:
        if meth not in METHODS:
            raise ConfigurationError(f"unknown method {meth!r}")
    jobs = [(spec, r, tuple(methods), fit_config) for r in range(replications)]
    outs = pmap(_run_one, jobs, threads)
    records = [rec for out in outs if out is not None for rec in out]
    failures = sum(out is None for out in outs)
    return summarize(records, methods, replications, failures)


def spec_dict(spec: PopulationSpec) -> dict:
    return asdict(spec)
