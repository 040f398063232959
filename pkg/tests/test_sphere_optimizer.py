import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adjauc.dataset import split_centers
from adjauc.errors import ConfigurationError, NumericalError
from adjauc.logistic_baseline import direction_from, fit_logistic
from adjauc.smooth_objective import ObjectiveSpec
from adjauc.sphere_optimizer import OptimizerConfig, maximize_on_sphere, multi_start
from conftest import grid_objective, make_dataset

A = np.diag([2.0, 1.0])


def quad(t):
    return float(t @ A @ t)


def quad_grad(t):
    return 2 * A @ t


def test_quadratic_form_on_circle():
    res = maximize_on_sphere(quad, quad_grad, [1 / np.sqrt(2), 1 / np.sqrt(2)])
    assert res.converged
    assert res.objective == pytest.approx(2.0, abs=1e-8)
    assert abs(res.theta[0]) == pytest.approx(1.0, abs=1e-4)
    assert np.linalg.norm(res.theta) == pytest.approx(1.0, abs=1e-12)


def test_stationary_start_returns_immediately():
    res = maximize_on_sphere(quad, quad_grad, [1.0, 0.0])
    assert res.iterations == 0 and res.converged and res.reason == "gradient"
    np.testing.assert_array_equal(res.theta, [1.0, 0.0])


def test_start_is_normalized():
    res = maximize_on_sphere(quad, quad_grad, [3.0, 0.0])
    np.testing.assert_array_equal(res.theta, [1.0, 0.0])


def test_trace_non_decreasing_and_unit_norm():
    rng = np.random.default_rng(0)
    B = rng.normal(size=(4, 4))
    B = B + B.T
    res = maximize_on_sphere(lambda t: t @ B @ t, lambda t: 2 * B @ t, rng.normal(size=4))
    assert np.all(np.diff(res.trace) > 0)
    assert np.linalg.norm(res.theta) == pytest.approx(1.0, abs=1e-12)
    assert res.objective == pytest.approx(np.linalg.eigvalsh(B).max(), abs=1e-6)


def test_non_finite_objective_raises():
    with pytest.raises(NumericalError) as err:
        maximize_on_sphere(lambda t: np.nan, lambda t: t, [1.0, 0.0])
    assert err.value.theta is not None
    with pytest.raises(NumericalError):
        maximize_on_sphere(quad, quad_grad, [0.0, 0.0])


def test_config_validation():
    with pytest.raises(ConfigurationError):
        OptimizerConfig(shrink=1.5)
    with pytest.raises(ConfigurationError):
        OptimizerConfig(objective_tol=0)


def test_multi_start_single_matches_plain():
    start = [0.3, 0.9]
    a = maximize_on_sphere(quad, quad_grad, start)
    b = multi_start(quad, quad_grad, [start])
    np.testing.assert_array_equal(a.theta, b.theta)
    assert a.objective == b.objective and b.start_index == 0


def test_multi_start_picks_better_branch():
    # maximum at e1, a local maximum sits at -e1
    def f(t):
        return t[0] + 0.5 * t[0] ** 2

    def g(t):
        return np.array([1 + t[0], 0.0])

    res = multi_start(f, g, [[-1.0, 0.0], [1.0, 0.0]])
    np.testing.assert_allclose(res.theta, [1.0, 0.0])
    assert res.start_index == 1


def smooth_problem(seed):
    rng = np.random.default_rng(seed)
    data = make_dataset(rng, m=3, n=30)
    views, _ = split_centers(data)
    start = direction_from(fit_logistic(views))
    return ObjectiveSpec.build(views, start), start


def test_sphere_fit_reaches_angle_grid_maximum():
    spec, start = smooth_problem(4)
    res = maximize_on_sphere(spec.value, None, start, value_and_grad=spec.value_and_grad)
    _, q, _ = grid_objective(spec.views, spec.weights, spec.bandwidths, 0.0)
    assert res.objective >= q.max() - 1e-3


def test_restarts_never_worse_than_single_start():
    spec, start = smooth_problem(25)
    single = maximize_on_sphere(spec.value, None, start, value_and_grad=spec.value_and_grad)
    multi = multi_start(spec.value, None, [start], OptimizerConfig(restarts=5, seed=1), spec.value_and_grad)
    assert multi.objective >= single.objective
    again = multi_start(spec.value, None, [start], OptimizerConfig(restarts=5, seed=1), spec.value_and_grad)
    np.testing.assert_array_equal(multi.theta, again.theta)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 5))
def test_ascent_never_below_start(seed, p):
    rng = np.random.default_rng(seed)
    B = rng.normal(size=(p, p))
    B = B + B.T
    res = maximize_on_sphere(lambda t: t @ B @ t, lambda t: 2 * B @ t, rng.normal(size=p))
    assert res.objective >= res.trace[0]
    assert abs(np.linalg.norm(res.theta) - 1) <= 1e-12
