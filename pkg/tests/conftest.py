import numpy as np
import pytest

from detune.metaheuristics import ParamSpec, SearchSpace


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def unit_space():
    return SearchSpace((ParamSpec("x", 0.0, 1.0),))


@pytest.fixture
def box5_space():
    return SearchSpace(tuple(ParamSpec(f"x{i}", -5.0, 5.0) for i in range(5)))


class TapeRng:
    """Scripted stand-in for numpy's Generator, for hand-traced runs.

    Each method pops from its own queue; running dry is a test bug and
    raises immediately.
    """

    def __init__(self, integers=(), randoms=(), uniforms=(), normals=()):
        self._integers = list(integers)
        self._randoms = list(randoms)
        self._uniforms = list(uniforms)
        self._normals = list(normals)

    def integers(self, *_args, **_kwargs):
        if not self._integers:
            raise AssertionError("integers tape exhausted")
        return self._integers.pop(0)

    def random(self, size=None):
        if not self._randoms:
            raise AssertionError("random tape exhausted")
        value = self._randoms.pop(0)
        return np.asarray(value, dtype=float) if size is not None else float(value)

    def uniform(self, low=0.0, high=1.0, size=None):
        if not self._uniforms:
            raise AssertionError("uniform tape exhausted")
        return np.asarray(self._uniforms.pop(0), dtype=float)

    def normal(self, loc=0.0, scale=1.0, size=None):
        if not self._normals:
            raise AssertionError("normal tape exhausted")
        return np.asarray(self._normals.pop(0), dtype=float)

    def permutation(self, n):
        return np.arange(n)


@pytest.fixture
def tape_rng_cls():
    return TapeRng
