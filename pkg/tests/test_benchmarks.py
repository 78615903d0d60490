import numpy as np
import pytest

from detune.errors import ConfigurationError
from detune.metaheuristics import benchmark_objective, rastrigin, rosenbrock, sphere


class TestAnalyticMinima:
    def test_sphere_zero_at_origin(self):
        assert sphere(np.zeros(7)) == 0.0

    def test_sphere_hand_value(self):
        assert sphere(np.array([1.0, 2.0, 3.0])) == 14.0

    def test_rastrigin_zero_at_origin(self):
        assert rastrigin(np.zeros(4)) == pytest.approx(0.0, abs=1e-12)

    def test_rastrigin_positive_off_origin(self, rng):
        for _ in range(20):
            x = rng.uniform(-5.12, 5.12, size=4)
            if np.any(np.abs(x) > 1e-6):
                assert rastrigin(x) > 0.0

    def test_rosenbrock_zero_at_ones(self):
        assert rosenbrock(np.ones(6)) == 0.0

    def test_rosenbrock_hand_value(self):
        # 100*(0-0)^2 + (1-0)^2 = 1 for x = [0, 0]
        assert rosenbrock(np.zeros(2)) == 1.0


class TestBenchmarkObjective:
    def test_lookup_and_dimension_check(self):
        objective = benchmark_objective("sphere", 3)
        assert objective(np.array([1.0, 2.0, 3.0])) == 14.0
        with pytest.raises(ValueError):
            objective(np.zeros(4))

    def test_unknown_name(self):
        with pytest.raises(ConfigurationError):
            benchmark_objective("ackley", 3)

    def test_bad_dimension(self):
        with pytest.raises(ConfigurationError):
            benchmark_objective("sphere", 0)
