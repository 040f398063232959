
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import norm

from adjauc.dataset import CenterView, split_centers
from adjauc.errors import ValidationError
from adjauc.roc_metrics import center_weights, empirical_auc
from adjauc.smooth_objective import (
    ObjectiveSpec,
    bandwidths,
    gradient,
    normal_pdf,
    penalized_objective,
    smooth_aauc,
    smooth_center_auc,
)
from conftest import make_dataset


def unit_sd(values):
    v = np.asarray(values, dtype=float)
    return (v - v.mean()) / v.std(ddof=1)


def one_d_view(label, cases, controls):
    return CenterView(label, np.asarray(cases, float).reshape(-1, 1), np.asarray(controls, float).reshape(-1, 1))


@pytest.mark.parametrize("sd,n,expected", [(1.0, 8, 0.5), (2.0, 27, 2.0 / 3.0)])
def test_bandwidth_rule(sd, n, expected):
    rng = np.random.default_rng(n)
    s = sd * unit_sd(rng.normal(size=n))
    v = one_d_view("c", s[: n // 2], s[n // 2:])
    bw = bandwidths([1.0], [v])
    assert bw.h[0] == pytest.approx(expected, rel=1e-12)


def test_bandwidth_floor_for_constant_scores():
    flat = one_d_view("a", [1.0, 1.0], [1.0, 1.0])
    spread = one_d_view("b", [0.0, 3.0], [1.0, 2.0])
    bw = bandwidths([1.0], [flat, spread])
    pooled = np.r_[1, 1, 1, 1, 0, 3, 1, 2].std(ddof=1)
    assert bw.h[0] == bw.floor == pytest.approx(1e-4 * pooled)
    assert bandwidths([1.0], [flat]).h[0] == 1e-8


def test_smooth_auc_zero_differences():
    v = CenterView("a", np.ones((3, 2)), np.ones((4, 2)))
    assert smooth_center_auc([0.6, 0.8], v, 0.3) == 0.5


def test_smooth_auc_one_pair_at_bandwidth():
    v = one_d_view("a", [1.7], [1.2])
    assert smooth_center_auc([1.0], v, 0.5) == pytest.approx(0.8413447460685429, abs=1e-12)


def test_small_bandwidth_matches_empirical_auc():
    rng = np.random.default_rng(7)
    for _ in range(20):
        cases, controls = rng.normal(size=(12, 2)), rng.normal(size=(15, 2))
        v = CenterView("a", cases, controls)
        theta = rng.normal(size=2)
        theta /= np.linalg.norm(theta)
        emp = empirical_auc(cases @ theta, controls @ theta)
        assert abs(smooth_center_auc(theta, v, 1e-9) - emp) <= 1e-6


def exact_views():
    # integer-separated scores with h = 1e-3 make every Phi term exactly 0 or 1
    a = one_d_view("A", [3.0], [0, 1, 2, 5, 6])
    b = one_d_view("B", [10, 10, 1], [0, 0, 5, 5, 5])
    return [a, b]


def test_smooth_aauc_weighted_average():
    views = exact_views()
    spec = ObjectiveSpec(views, center_weights(views), [1e-3, 1e-3])
    np.testing.assert_array_equal(spec.center_values([1.0]), [0.6, 0.8])
    assert smooth_aauc([1.0], spec) == pytest.approx(0.75, abs=1e-12)


def test_smooth_aauc_single_and_identical_centers():
    rng = np.random.default_rng(3)
    v = CenterView("a", rng.normal(size=(5, 2)), rng.normal(size=(6, 2)))
    theta = np.array([0.6, 0.8])
    single = ObjectiveSpec([v], [1.0], [0.4])
    assert smooth_aauc(theta, single) == smooth_center_auc(theta, v, 0.4)
    twin = ObjectiveSpec([v, CenterView("b", v.cases, v.controls)], [0.5, 0.5], [0.4, 0.4])
    assert smooth_aauc(theta, twin) == pytest.approx(smooth_center_auc(theta, v, 0.4), abs=1e-15)
    assert penalized_objective(theta, single.with_lambda(7.0)) == smooth_aauc(theta, single)


def test_penalized_hand_example():
    a = one_d_view("A", [3.0], [0, 1, 2, 5, 6])
    b = one_d_view("B", [4.5], [0, 1, 2, 3, 5])
    spec = ObjectiveSpec([a, b], [0.5, 0.5], [1e-3, 1e-3], lam=1.0)
    assert penalized_objective([1.0], spec) == pytest.approx(0.69, abs=1e-12)


def test_lambda_zero_is_bitwise_smooth_aauc(rng):
    data = make_dataset(rng, m=4)
    views, _ = split_centers(data)
    spec = ObjectiveSpec.build(views, [1.0, 0.0], lam=0.0)
    for _ in range(10):
        theta = rng.normal(size=2)
        assert penalized_objective(theta, spec) == smooth_aauc(theta, spec)
        assert spec.value_and_grad(theta)[0] == smooth_aauc(theta, spec)


def test_gradient_zero_when_differences_vanish():
    v = CenterView("a", np.ones((3, 2)), np.ones((2, 2)))
    spec = ObjectiveSpec([v], [1.0], [0.5], lam=3.0)
    np.testing.assert_array_equal(gradient([0.3, 0.7], spec), [0.0, 0.0])


def test_gradient_single_pair():
    v = one_d_view("a", [1.0], [0.0])
    spec = ObjectiveSpec([v], [1.0], [1.0])
    assert gradient([1.0], spec)[0] == pytest.approx(norm.pdf(1.0), abs=1e-15)
    assert normal_pdf(1.0) == pytest.approx(0.24197072451914337, abs=1e-16)


def central_difference(f, theta, rel_step=1e-6):
    g = np.empty_like(theta)
    for k in range(theta.size):
        step = rel_step * (1 + abs(theta[k]))
        e = np.zeros_like(theta)
        e[k] = step
        g[k] = (f(theta + e) - f(theta - e)) / (2 * step)
    return g


def rel_error(g, ref):
    return np.linalg.norm(g - ref) / max(np.linalg.norm(ref), 1e-12)


@pytest.mark.parametrize("lam", [0.0, 1.0, 50.0])
def test_gradient_matches_finite_differences(lam):
    rng = np.random.default_rng(int(lam) + 11)
    for _ in range(20):
        p = int(rng.integers(1, 5))
        data = make_dataset(rng, m=int(rng.integers(2, 5)), n=25, p=p)
        views, _ = split_centers(data)
        spec = ObjectiveSpec.build(views, rng.normal(size=p), lam=lam)
        theta = rng.normal(size=p)
        g = gradient(theta, spec)
        fd = central_difference(spec.value, theta)
        assert rel_error(g, fd) <= 1e-5


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.floats(0, 100))
def test_penalty_never_raises_objective(seed, lam):
    rng = np.random.default_rng(seed)
    data = make_dataset(rng, m=3, n=20)
    views, _ = split_centers(data)
    spec = ObjectiveSpec.build(views, [1.0, 1.0], lam=lam)
    theta = rng.normal(size=2)
    R = spec.center_values(theta)
    assert np.all((R > 0) & (R < 1))
    assert penalized_objective(theta, spec) <= smooth_aauc(theta, spec) + 1e-15


def test_spec_validation():
    v = one_d_view("a", [1.0], [0.0])
    with pytest.raises(ValidationError):
        ObjectiveSpec([v], [1.0], [1.0], lam=-1.0)
    with pytest.raises(ValidationError):
        ObjectiveSpec([v], [0.5], [1.0])
    with pytest.raises(ValidationError):
        ObjectiveSpec([v], [1.0], [0.0])
    with pytest.raises(ValidationError):
        smooth_aauc([1.0, 0.0], ObjectiveSpec([v], [1.0], [1.0]))
