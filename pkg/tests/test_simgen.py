import numpy as np
import pytest

from adjauc.errors import ConfigurationError
from adjauc.simgen import (
    PopulationSpec,
    generate,
    link_f,
    link_g,
    run_study,
    sample_study,
    ten_marker_means,
)


def small(family="two_marker_outlier", **kw):
    base = dict(family=family, M=12, N_c=800, m=4, n_c=100, seed=5)
    base.update(kw)
    return PopulationSpec(**base)


def test_no_outlier_covariance():
    pop = generate(small(pi=0.0, M=4, N_c=20000))
    x = np.vstack(pop.markers)
    np.testing.assert_allclose(np.cov(x.T), 0.2 * np.array([[1, 0.9], [0.9, 1]]), atol=0.02)
    assert not any(o.any() for o in pop.outlier)


def test_outlier_fraction_within_three_se():
    pi, n = 0.05, 12 * 800
    pop = generate(small(pi=pi))
    frac = np.concatenate(pop.outlier).mean()
    assert abs(frac - pi) <= 3 * np.sqrt(pi * (1 - pi) / n)


def test_generation_is_seeded():
    a, b = generate(small()), generate(small())
    for xa, xb in zip(a.markers, b.markers):
        np.testing.assert_array_equal(xa, xb)
    c = generate(small(seed=6))
    assert not np.array_equal(a.markers[0], c.markers[0])


def test_ten_marker_means_and_exposure():
    mu = ten_marker_means(50)
    assert np.all(mu[:10] == -1) and np.all(mu[10:40] == 1) and np.all(mu[40:] == 0)
    pop = generate(small("ten_marker", M=50, N_c=3000))
    assert all(x.shape[1] == 2 for x in pop.markers)
    np.testing.assert_allclose([pop.markers[c].mean() for c in range(10)], -1, atol=0.06)
    assert np.all((pop.intercepts >= 0.2) & (pop.intercepts <= 0.8))


def test_links():
    assert link_g(0.0) == 0.5 == link_f(0.0)
    eps = 1e-9
    assert abs(link_g(eps) - link_g(-eps)) < 1e-8
    v = np.linspace(-3, 3, 101)
    assert np.all(np.diff(link_g(v)) > 0)
    assert link_g(1.0) == pytest.approx(1 / (1 + np.exp(-3)))
    assert link_g(-1.0) == pytest.approx(1 / (1 + np.exp(1 / 3)))


def test_four_marker_degenerate_ranges():
    spec = small("four_marker", sigma_range=(1.0, 1.0), gamma_range=(1.0, 1.0), variance_mode="per_center")
    pop = generate(spec)
    np.testing.assert_array_equal(pop.params["sigma"], 1.0)
    np.testing.assert_array_equal(pop.params["gamma"], 1.0)


def test_sample_study_partition():
    spec = small()
    pop = generate(spec)
    st = sample_study(pop, spec, np.random.default_rng(0))
    assert st.train.n == spec.m * spec.n_c
    assert set(st.train_centers).isdisjoint(st.test_centers)
    assert len(st.train_centers) + len(st.test_centers) == spec.M
    assert len(st.test) + len(st.test_dropped) == spec.M - spec.m
    assert all(n == spec.n_c for n in (ix.size for ix in st.train.center_index.values()))


def test_run_study_determinism_and_sandwich():
    spec = small(M=10, N_c=500, n_c=80)
    a = run_study(spec, 3)
    b = run_study(spec, 3)
    assert [r.aauc for r in a.records] == [r.aauc for r in b.records]
    assert a.completeness == 1.0
    for r in a.records:
        assert r.min_auc <= r.aauc <= r.max_auc
        assert abs(np.linalg.norm(r.theta) - 1) < 1e-12
        if r.method == "SaAUC":
            assert r.final_objective >= r.start_objective
    rows = a.table_rows()
    assert len(rows) == 6 and rows[0][:2] == ("GLM", "aauc")


def test_replications_are_independent_of_count():
    spec = small(M=10, N_c=500, n_c=80)
    two = run_study(spec, 2, methods=("GLM",))
    three = run_study(spec, 3, methods=("GLM",))
    assert [r.aauc for r in two.records] == [r.aauc for r in three.records[:2]]


@pytest.mark.parametrize(
    "kw",
    [dict(m=20), dict(n_c=5000), dict(pi=1.5), dict(link="h"), dict(family="x"), dict(sigma_range=(2.0, 1.0))],
)
def test_spec_validation(kw):
    with pytest.raises(ConfigurationError):
        small(**kw)


def test_run_study_validation():
    with pytest.raises(ConfigurationError):
        run_study(small(), 0)
    with pytest.raises(ConfigurationError):
        run_study(small(), 1, methods=("LASSO",))
