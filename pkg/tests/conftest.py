import numpy as np
import pytest

from alarmmac.config import ScenarioConfig, validate_config


class FixedPolicy:
    """Test stub: always plays one pattern; records what it observes."""

    def __init__(self, pattern_index: int):
        self.pattern_index = pattern_index
        self.observed: list[tuple[int, float]] = []
        self.events_ended = 0

    def select_action(self, context, rng):
        return self.pattern_index

    def observe(self, context, action, reward, rng=None):
        self.observed.append((action, reward))
        return None

    def end_event(self):
        self.events_ended += 1


@pytest.fixture
def base_config():
    return validate_config(ScenarioConfig(n_subnets=4, n_channels=2))


def make_config(**kwargs) -> ScenarioConfig:
    kwargs.setdefault("n_subnets", 4)
    kwargs.setdefault("n_channels", 2)
    return validate_config(ScenarioConfig(**kwargs))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
