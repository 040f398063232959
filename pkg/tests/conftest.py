import logging

import numpy as np
import pytest
from scipy.stats import norm

from adjauc.dataset import Dataset

logging.getLogger("adjauc").setLevel(logging.ERROR)


def make_dataset(rng, m=3, n=40, p=2, shift=None, prevalence=0.4, center_effect=0.5):
    """Small multicenter data with a linear signal and center-specific marker shifts."""
    beta = rng.normal(size=p) if shift is None else np.asarray(shift, dtype=float)
    centers, outcome, markers = [], [], []
    for c in range(m):
        d = (rng.random(n) < prevalence).astype(int)
        d[0], d[1] = 1, 0
        x = rng.normal(size=(n, p)) + center_effect * rng.normal(size=p)
        x += d[:, None] * beta * rng.uniform(0.5, 1.5)
        centers += [f"c{c}"] * n
        outcome.append(d)
        markers.append(x)
    return Dataset(np.array(centers), np.concatenate(outcome), np.vstack(markers))


def grid_objective(views, weights, h, lam, n_angles=20000):
    """Penalized smoothed objective over a dense circle of p=2 directions.

    Written independently of ``ObjectiveSpec``: scores every direction at
    once and uses scipy's normal CDF.
    """
    phi = np.linspace(0.0, 2 * np.pi, n_angles, endpoint=False)
    dirs = np.stack([np.cos(phi), np.sin(phi)])
    R = np.empty((len(views), n_angles))
    for k, v in enumerate(views):
        sc = v.cases @ dirs
        sb = v.controls @ dirs
        z = (sc[:, None, :] - sb[None, :, :]) / h[k]
        R[k] = norm.cdf(z).mean(axis=(0, 1))
    w = np.asarray(weights)[:, None]
    aR = (w * R).sum(axis=0)
    var = (w * (R - aR) ** 2).sum(axis=0)
    return dirs.T, aR - lam * var, var


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE = []


def record_criterion(number, passed, detail):
    ACCEPTANCE.append((number, bool(passed), detail))
    print(f"criterion {number}: {'PASS' if passed else 'FAIL'} {detail}")
    return bool(passed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE, key=lambda r: (str(r[0]).zfill(3), r[2])):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
