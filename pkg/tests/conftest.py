"""Shared fixtures and hypothesis strategies for the test suite."""

from __future__ import annotations

import cmath
import math
from random import Random

import pytest
from hypothesis import strategies as st

from thetacb.params import IdentitySize
from thetacb.sampling import sample_param_point


def ring_complex(lo: float, hi: float) -> st.SearchStrategy:
    """Complex numbers with log-uniform-ish magnitude in [lo, hi]."""
    return st.builds(
        lambda mag, ang: cmath.rect(math.exp(mag), ang),
        st.floats(math.log(lo), math.log(hi)),
        st.floats(0.0, 2.0 * math.pi),
    )


def unit_complex(rng: Random, lo: float, hi: float) -> complex:
    mag = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    return cmath.rect(mag, rng.uniform(0.0, 2.0 * math.pi))


@pytest.fixture
def rng() -> Random:
    return Random(20260809)


@pytest.fixture
def generic_point(rng):
    """One generic parameter point, safe for depths up to (6, 6)."""
    return sample_param_point(rng, IdentitySize(6, 6))


@pytest.fixture
def point_factory(rng):
    def make(m: int = 6, n: int = 6, **kwargs):
        return sample_param_point(rng, IdentitySize(m, n), **kwargs)

    return make
