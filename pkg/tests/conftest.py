import math

import numpy as np
import pytest

from pdroots import Interval, SupportSpec, construct_f, f1_spec, periodic_spec


def random_spec(rng, k, unbounded=False):
    """A symmetric layout with k components on [0, inf)."""
    b0 = rng.uniform(0.5, 2.0)
    pos = []
    edge = b0
    for j in range(1, k):
        lo = edge + rng.uniform(0.3, 3.0)
        if unbounded and j == k - 1:
            pos.append(Interval(lo, math.inf))
            break
        hi = lo + rng.uniform(0.6, 4.0)
        pos.append(Interval(lo, hi))
        edge = hi
    return SupportSpec(Interval(-b0, b0), tuple(pos))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def f1_layout():
    return f1_spec()


@pytest.fixture
def per_spec():
    return periodic_spec(4.0, 2.0)


@pytest.fixture(scope="session")
def constructions():
    """A fixed family of (spec, n, f) triples covering bounded, unbounded and periodic layouts."""
    rng = np.random.default_rng(7)
    out = []
    for k in (1, 2, 3, 4):
        for n in (2, 3):
            out.append(construct_f(random_spec(rng, k), n))
    out.append(construct_f(random_spec(rng, 3, unbounded=True), 2))
    out.append(construct_f(random_spec(rng, 2, unbounded=True), 3))
    out.append(construct_f(f1_spec(), 2))
    out.append(construct_f(periodic_spec(4.0, 2.0), 2))
    return out
