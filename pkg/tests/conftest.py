import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240915)


class StubRng:
    """Deterministic stand-in for a Generator, for plug-in identity tests."""

    def __init__(self, uniforms=(), exponentials=(), gammas=(), normals=()):
        self._u = list(uniforms)
        self._e = list(exponentials)
        self._g = list(gammas)
        self._n = list(normals)

    def random(self, size=None):
        return self._u.pop(0) if size is None else np.array(
            [self._u.pop(0) for _ in range(size)]
        )

    def exponential(self, scale=1.0, size=None):
        assert size is None
        return self._e.pop(0) * scale

    def gamma(self, shape, scale=1.0, size=None):
        if size is None:
            return self._g.pop(0) * scale
        return np.array([self._g.pop(0) for _ in range(size)]) * scale

    def standard_normal(self, size=None):
        if size is None:
            return self._n.pop(0)
        return np.array([self._n.pop(0) for _ in range(size)])


@pytest.fixture
def stub_rng_factory():
    return StubRng
