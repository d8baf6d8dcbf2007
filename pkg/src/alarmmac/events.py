"""Alarm events and the distance-decaying activation of subnetworks.

An event at epicenter e activates subnetwork n according to the probability
p(d) = exp(-eta * d) of detecting an event at distance d. Activation applies
a hard threshold p(d) >= tx_threshold and, in the default mode, an additional
Bernoulli(p(d)) detection draw. The active set is frozen at event birth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ActivationMode, ScenarioConfig
from .geometry import SubnetPose


@dataclass
class AlarmEvent:
    epicenter: tuple[float, float]
    birth_slot: int
    deadline_slots: int
    active_set: tuple[int, ...]
    age: int = 0
    delivered: bool = False
    delivery_slot: int | None = None
    failed: bool = False
    attempts: int = 0

    @property
    def deadline_slot(self) -> int:
        return self.birth_slot + self.deadline_slots

    @property
    def terminal(self) -> bool:
        return self.delivered or self.failed


def activation_probability(d_m: float, eta: float) -> float:
    """exp(-eta * d); strictly decreasing in d, 1 at the epicenter."""
    if d_m < 0:
        raise ValueError("distance must be >= 0")
    if eta <= 0:
        raise ValueError("eta must be > 0")
    return math.exp(-eta * d_m)


def build_active_set(
    epicenter: tuple[float, float],
    poses: list[SubnetPose],
    rng: np.random.Generator,
    config: ScenarioConfig,
) -> tuple[int, ...]:
    """Indices activated by an event at `epicenter`.

    The detection uniforms are drawn for every pose in one call so that runs
    with different eta but equal seeds see coupled randomness.
    """
    ex, ey = epicenter
    d = np.array([math.hypot(p.x - ex, p.y - ey) for p in poses])
    p = np.exp(-config.eta * d)
    passed = p >= config.tx_threshold
    if config.activation_mode is ActivationMode.THRESHOLD_AND_BERNOULLI:
        u = rng.random(len(poses))
        passed &= u < p
    return tuple(int(i) for i in np.nonzero(passed)[0])


def maybe_spawn_event(
    slot: int,
    poses: list[SubnetPose],
    rng: np.random.Generator,
    config: ScenarioConfig,
) -> AlarmEvent | None:
    """With probability alpha, spawn an event with a uniform epicenter."""
    if rng.random() >= config.alpha:
        return None
    epicenter = (
        float(rng.uniform(0.0, config.area_width_m)),
        float(rng.uniform(0.0, config.area_height_m)),
    )
    active = build_active_set(epicenter, poses, rng, config)
    return AlarmEvent(
        epicenter=epicenter,
        birth_slot=slot,
        deadline_slots=config.deadline_slots,
        active_set=active,
    )


def empirical_activation(
    poses: list[SubnetPose],
    config: ScenarioConfig,
    rng: np.random.Generator,
    n_trials: int = 100_000,
) -> np.ndarray:
    """Monte Carlo per-subnetwork activation probability under uniform epicenters.

    Estimates alpha * Pr(activated | event) for each pose, honoring the
    configured activation mode. Feeds the exact success-probability oracle.
    """
    if n_trials < 10_000:
        raise ValueError("n_trials must be >= 10000")
    ex = rng.uniform(0.0, config.area_width_m, size=n_trials)
    ey = rng.uniform(0.0, config.area_height_m, size=n_trials)
    pos = np.array([[p.x, p.y] for p in poses])
    out = np.empty(len(poses))
    for n in range(len(poses)):
        d = np.hypot(pos[n, 0] - ex, pos[n, 1] - ey)
        p = np.exp(-config.eta * d)
        hit = p >= config.tx_threshold
        if config.activation_mode is ActivationMode.THRESHOLD_AND_BERNOULLI:
            hit = hit & (rng.random(n_trials) < p)
        out[n] = config.alpha * hit.mean()
    return out
