import math

import numpy as np

from detune.metaheuristics import Candidate, GenerationStats, OptimizeResult, write_history_csv


def test_history_csv_columns_and_values(tmp_path):
    result = OptimizeResult(
        best=Candidate(np.array([1.0]), fitness=0.25),
        history=[
            GenerationStats(0, 1.5, 2.5, 8),
            GenerationStats(1, 0.25, 1.75, 16),
        ],
        evaluations=16,
    )
    path = write_history_csv(result, tmp_path / "history.csv")
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "generation,best_fitness,mean_fitness,evaluations"
    assert lines[1] == "0,1.5,2.5,8"
    assert lines[2] == "1,0.25,1.75,16"


def test_history_csv_renders_inf(tmp_path):
    result = OptimizeResult(
        best=Candidate(np.array([0.0]), fitness=math.inf),
        history=[GenerationStats(0, math.inf, math.inf, 4)],
        evaluations=4,
    )
    path = write_history_csv(result, tmp_path / "history.csv")
    assert "inf" in path.read_text()
