import numpy as np
import pytest

from fairinfluence import (
    Dataset,
    LinearLogisticModel,
    ScenarioConfig,
    TrainConfig,
    make_scenario,
    train_logistic,
)


def random_logistic(rng: np.random.Generator, d: int) -> LinearLogisticModel:
    return LinearLogisticModel(rng.normal(0.0, 1.0, d), float(rng.normal()), frozenset(range(d)))


@pytest.fixture(scope="session")
def scenario_a() -> Dataset:
    return make_scenario(ScenarioConfig("A", 0.4, 600, seed=5))


@pytest.fixture(scope="session")
def model_a(scenario_a) -> LinearLogisticModel:
    return train_logistic(scenario_a, TrainConfig(learning_rate=0.05, epochs=200, seed=0))


@pytest.fixture(scope="session")
def tiny_data() -> Dataset:
    # dyadic values and balanced Z keep float arithmetic exact in tests
    feats = np.array(
        [
            [0.5, -1.0, 0.0],
            [1.25, 0.5, 1.0],
            [-0.75, 2.0, 0.0],
            [0.25, -0.5, 1.0],
            [2.0, 1.5, 0.0],
            [-1.5, 0.75, 1.0],
            [0.0, -2.0, 0.0],
            [1.0, 1.0, 1.0],
        ]
    )
    labels = np.array([0, 1, 0, 1, 1, 0, 0, 1])
    return Dataset(feats, ("X1", "X2", "Z"), frozenset({2}), labels)
