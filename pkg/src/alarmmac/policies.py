"""Channel-access policies behind one interface.

Actions are transmission patterns: M-bit words where bit m set means
"transmit on channel m" and the all-zeros word is legal silence. Pattern
index i maps to bits via the binary expansion of i, least significant bit
first. Three policies are provided: the learned network policy, a
context-free value-table bandit, and uniform random selection. Exploration
rate and learning rate decay once per alarm event, never per slot.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .config import PolicyKind, ScenarioConfig
from . import learning


def pattern_bits(index: int, n_channels: int) -> np.ndarray:
    if not 0 <= index < (1 << n_channels):
        raise ValueError(f"pattern index {index} out of range for {n_channels} channels")
    return np.array([(index >> m) & 1 for m in range(n_channels)], dtype=np.uint8)


def pattern_index(bits: np.ndarray) -> int:
    return int(sum(int(b) << m for m, b in enumerate(bits)))


@lru_cache(maxsize=None)
def pattern_table(n_channels: int) -> np.ndarray:
    """(2**M, M) lookup of all patterns; row i is pattern_bits(i)."""
    return np.stack([pattern_bits(i, n_channels) for i in range(1 << n_channels)])


def decayed_epsilon(start: float, floor: float, step: float, n_events: int) -> float:
    return max(floor, start - step * n_events)


def _greedy(values: np.ndarray) -> int:
    return int(np.argmax(values))  # first maximum, so ties break to the lowest index


class RchPolicy:
    """Uniform random pattern selection."""

    def __init__(self, n_channels: int):
        self.n_patterns = 1 << n_channels

    def select_action(self, context: np.ndarray, rng: np.random.Generator) -> int:
        return int(rng.integers(self.n_patterns))

    def observe(
        self,
        context: np.ndarray,
        action: int,
        reward: float,
        rng: np.random.Generator | None = None,
    ) -> float | None:
        return None

    def end_event(self) -> None:
        return None


class MapRaPolicy:
    """Context-free epsilon-greedy bandit: Q(a) <- (1 - tau) Q(a) + tau * r."""

    def __init__(self, config: ScenarioConfig):
        self.q = np.zeros(config.n_patterns)
        self.tau = config.mapra_tau
        self._eps_start = config.epsilon_start
        self._eps_floor = config.epsilon_floor
        self._eps_step = config.epsilon_step
        self._events = 0

    @property
    def epsilon(self) -> float:
        return decayed_epsilon(self._eps_start, self._eps_floor, self._eps_step, self._events)

    def select_action(self, context: np.ndarray, rng: np.random.Generator) -> int:
        if rng.random() < self.epsilon:
            return int(rng.integers(len(self.q)))
        return _greedy(self.q)

    def observe(
        self,
        context: np.ndarray,
        action: int,
        reward: float,
        rng: np.random.Generator | None = None,
    ) -> float | None:
        if not np.isfinite(reward):
            raise ValueError("reward must be finite")
        self.q[action] = (1.0 - self.tau) * self.q[action] + self.tau * reward
        return None

    def end_event(self) -> None:
        self._events += 1


class DrlPolicy:
    """Network policy: epsilon-greedy over learned action values.

    Each observed (context, action, reward) tuple is pushed to replay, then
    one clipped RMSProp step is taken on a sampled minibatch. The minibatch
    loss before the step is returned for convergence tracking.
    """

    def __init__(self, config: ScenarioConfig, init_rng: np.random.Generator):
        self.model = learning.init_mlp(config.layer_sizes, init_rng)
        self.opt = learning.RmsPropState.for_model(
            self.model, decay=config.rms_decay, smoothing=config.rms_smoothing, lr=config.lr_initial
        )
        self.memory = learning.ReplayMemory(config.replay, config.n_channels)
        self.n_patterns = config.n_patterns
        self.batch_size = config.minibatch
        self.clip_threshold = config.clip_threshold
        self.lr_decay = config.lr_decay_per_event
        self._eps_start = config.epsilon_start
        self._eps_floor = config.epsilon_floor
        self._eps_step = config.epsilon_step
        self._events = 0
        self.update_count = 0

    @property
    def epsilon(self) -> float:
        return decayed_epsilon(self._eps_start, self._eps_floor, self._eps_step, self._events)

    def select_action(self, context: np.ndarray, rng: np.random.Generator) -> int:
        if rng.random() < self.epsilon:
            return int(rng.integers(self.n_patterns))
        return _greedy(learning.forward(self.model, context))

    def observe(
        self,
        context: np.ndarray,
        action: int,
        reward: float,
        rng: np.random.Generator | None = None,
    ) -> float | None:
        if not np.isfinite(reward):
            raise ValueError("reward must be finite")
        if rng is None:
            raise ValueError("minibatch sampling needs a random stream")
        self.memory.push(context, action, reward)
        batch = self.memory.sample(self.batch_size, rng)
        grads, batch_loss = learning.backward(self.model, batch)
        grads = learning.clip_gradient(grads, self.clip_threshold)
        learning.rmsprop_step(self.model, self.opt, grads)
        self.update_count += 1
        return batch_loss

    def end_event(self) -> None:
        self._events += 1
        self.opt.lr *= 1.0 - self.lr_decay


Policy = RchPolicy | MapRaPolicy | DrlPolicy


def make_policy(config: ScenarioConfig, init_rng: np.random.Generator) -> Policy:
    if config.policy_kind is PolicyKind.RCH:
        return RchPolicy(config.n_channels)
    if config.policy_kind is PolicyKind.MAP_RA:
        return MapRaPolicy(config)
    return DrlPolicy(config, init_rng)
