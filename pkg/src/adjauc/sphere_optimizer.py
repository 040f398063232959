"""Projected gradient ascent on the unit sphere with Armijo backtracking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, NumericalError


@dataclass(frozen=True)
class OptimizerConfig:
    max_iterations: int = 500
    objective_tol: float = 1e-8
    gradient_tol: float = 1e-6
    shrink: float = 0.5
    sufficient_increase: float = 1e-4
    initial_step: float = 1.0
    step_growth: float = 2.0
    max_step: float = 1e8
    max_backtracks: int = 60
    restarts: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 0:
            raise ConfigurationError("max_iterations must be >= 0")
        if not (self.objective_tol > 0 and self.gradient_tol > 0 and self.sufficient_increase > 0):
            raise ConfigurationError("tolerances must be positive")
        if not 0 < self.shrink < 1:
            raise ConfigurationError("shrink factor must lie in (0, 1)")
        if not self.initial_step > 0:
            raise ConfigurationError("initial_step must be positive")
        if self.step_growth < 1:
            raise ConfigurationError("step_growth must be >= 1")
        if self.restarts < 0:
            raise ConfigurationError("restarts must be >= 0")


@dataclass(frozen=True, eq=False)
class FitResult:
    theta: np.ndarray
    objective: float
    trace: list[float] = field(repr=False)
    iterations: int
    converged: bool
    start_index: int = 0
    start_objective: float = float("nan")
    reason: str = ""


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    nrm = np.linalg.norm(v)
    if not np.isfinite(nrm) or nrm == 0:
        raise NumericalError("starting vector must be finite and nonzero", theta=v)
    return v / nrm


def _evaluate(value_and_grad, theta):
    f, g = value_and_grad(theta)
    g = np.asarray(g, dtype=float)
    if not np.isfinite(f) or not np.all(np.isfinite(g)):
        raise NumericalError("non-finite objective or gradient", theta=theta.copy())
    return float(f), g


def maximize_on_sphere(
    objective: Callable[[np.ndarray], float],
    gradient: Callable[[np.ndarray], np.ndarray] | None,
    theta0,
    config: OptimizerConfig = OptimizerConfig(),
    value_and_grad: Callable | None = None,
) -> FitResult:
    """Maximize ``objective`` over unit vectors.

    Each step moves along the tangent component of the gradient, then
    renormalizes. The first trial step is ``config.initial_step``; later
    iterations start from ``step_growth`` times the last accepted step. Trial
    steps shrink until ``f(new) >= f(old) + c * step * |g_tan|^2``. Pass
    ``value_and_grad`` to share work between the two evaluations.
    """
    if value_and_grad is None:
        def value_and_grad(t):
            return objective(t), gradient(t)

    theta = _unit(theta0)
    f, g = _evaluate(value_and_grad, theta)
    trace = [f]
    f_start = f
    reason = "max_iterations"
    converged = False
    it = 0
    trial = config.initial_step
    while it < config.max_iterations:
        g_tan = g - (g @ theta) * theta
        gnorm2 = float(g_tan @ g_tan)
        if np.sqrt(gnorm2) < config.gradient_tol:
            converged, reason = True, "gradient"
            break
        step = trial
        accepted = False
        for _ in range(config.max_backtracks):
            cand = theta + step * g_tan
            cand = cand / np.linalg.norm(cand)
            f_new = objective(cand) if objective is not None else value_and_grad(cand)[0]
            if not np.isfinite(f_new):
                raise NumericalError("non-finite objective", theta=cand)
            if f_new >= f + config.sufficient_increase * step * gnorm2 and f_new > f:
                accepted = True
                break
            step *= config.shrink
        if not accepted:
            converged, reason = True, "line_search"
            break
        it += 1
        trial = min(step * config.step_growth, config.max_step)
        f_old = f
        theta = cand
        f, g = _evaluate(value_and_grad, theta)
        trace.append(f)
        if abs(f - f_old) <= config.objective_tol * max(abs(f_old), 1e-12):
            converged, reason = True, "objective"
            break
    return FitResult(
        theta=theta,
        objective=f,
        trace=trace,
        iterations=it,
        converged=converged,
        start_objective=f_start,
        reason=reason,
    )


def multi_start(
    objective,
    gradient,
    starts: Sequence,
    config: OptimizerConfig = OptimizerConfig(),
    value_and_grad=None,
) -> FitResult:
    """Best of several ascents; extra random unit starts come from ``config.seed``.

    Ties on the final objective are broken by the lexicographically largest
    direction, so the result does not depend on evaluation order.
    """
    starts = [np.asarray(s, dtype=float) for s in starts]
    if not starts:
        raise ConfigurationError("multi_start needs at least one start")
    p = starts[0].shape[0]
    rng = np.random.default_rng(config.seed)
    for _ in range(config.restarts):
        starts.append(rng.standard_normal(p))
    best, best_key = None, None
    errors = []
    for k, s in enumerate(starts):
        try:
            res = maximize_on_sphere(objective, gradient, s, config, value_and_grad)
        except NumericalError as exc:
            errors.append(exc)
            continue
        key = (res.objective, tuple(res.theta))
        if best is None or key > best_key:
            best, best_key = res, key
            best_index = k
    if best is None:
        raise errors[0]
    return FitResult(
        theta=best.theta,
        objective=best.objective,
        trace=best.trace,
        iterations=best.iterations,
        converged=best.converged,
        start_index=best_index,
        start_objective=best.start_objective,
        reason=best.reason,
    )
