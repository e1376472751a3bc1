"""Shared data generators for the test suite."""

import numpy as np
import pytest

from sdar import PersistenceKind, PersistenceParams, SdarParams, TimeSeries

# Two-regime AR(3) coefficients used by the SETAR recovery oracles.
SETAR_C1 = -1.3292280
SETAR_PHI1 = np.array([0.2297850, 0.2442498, 0.1805137])
SETAR_C2 = -0.6589916
SETAR_PHI2 = np.array([0.4226148, 0.3088542, 0.1112698])
SETAR_THRESHOLD = -4.0
SETAR_SIGMA = 0.05


def gen_setar(n, seed, sigma1=SETAR_SIGMA, sigma2=SETAR_SIGMA, burn=200):
    """Simulate the two-regime AR(3) used as the SETAR recovery truth."""
    rng = np.random.default_rng(seed)
    state = np.full(3, SETAR_THRESHOLD)
    out = np.empty(n + burn)
    for t in range(n + burn):
        if state[-1] <= SETAR_THRESHOLD:
            mean = SETAR_C1 + SETAR_PHI1 @ state[::-1]
            s = sigma1
        else:
            mean = SETAR_C2 + SETAR_PHI2 @ state[::-1]
            s = sigma2
        new = mean + s * rng.standard_normal()
        out[t] = new
        state = np.append(state[1:], new)
    return out[burn:]


def gen_ar1(n, seed, alpha=-1.0, phi=None, sigma=0.5, burn=0):
    """Simulate a Gaussian AR(1) path started at zero."""
    if phi is None:
        phi = float(np.exp(-0.4))
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(n + burn) * sigma
    y = np.empty(n + burn)
    prev = 0.0
    for t in range(n + burn):
        prev = alpha + phi * prev + eps[t]
        y[t] = prev
    return y[burn:]


def m1_truth():
    """A well-behaved M1 parameter set used across simulation tests."""
    return SdarParams(
        -1.5, PersistenceParams(0.4, 0.07, 0.32), 0.5, PersistenceKind.M1
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
