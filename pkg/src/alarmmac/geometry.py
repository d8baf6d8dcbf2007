"""Uniform placement and snapshot-based constant-speed mobility.

Poses advance by v * slot duration along their heading each slot. A heading
is resampled uniformly on [0, 2*pi) whenever the step would leave the
deployment rectangle or bring two poses within the minimum separation; after
16 failed resamples the pose holds its position for that slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .config import ScenarioConfig

_MAX_HEADING_RESAMPLES = 16
_PLACEMENT_TRIES_PER_POSE = 10_000


class PlacementError(RuntimeError):
    """Deployment area cannot host the requested number of separated poses."""


@dataclass(frozen=True)
class SubnetPose:
    x: float
    y: float
    heading: float
    speed: float

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


def distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def positions_array(poses: list[SubnetPose]) -> np.ndarray:
    return np.array([[p.x, p.y] for p in poses], dtype=float)


def place_uniform(config: ScenarioConfig, rng: np.random.Generator) -> list[SubnetPose]:
    """Place N poses uniformly in the rectangle with pairwise separation.

    Uses rejection sampling after a disk-packing feasibility precheck, so an
    over-dense configuration fails fast instead of looping.
    """
    n = config.n_subnets
    sep = config.min_separation_m
    area = config.area_width_m * config.area_height_m
    if sep > 0:
        packing_cap = area / (math.pi * (sep / 2.0) ** 2)
        if n > packing_cap:
            raise PlacementError(
                f"cannot place {n} poses with separation {sep} m in "
                f"{config.area_width_m} x {config.area_height_m} m "
                f"(packing bound ~{packing_cap:.0f})"
            )
    placed: list[tuple[float, float]] = []
    for _ in range(n):
        for _ in range(_PLACEMENT_TRIES_PER_POSE):
            x = rng.uniform(0.0, config.area_width_m)
            y = rng.uniform(0.0, config.area_height_m)
            if all((x - px) ** 2 + (y - py) ** 2 >= sep * sep for px, py in placed):
                placed.append((x, y))
                break
        else:
            raise PlacementError(f"placement infeasible after {_PLACEMENT_TRIES_PER_POSE} tries per pose")
    headings = rng.uniform(0.0, 2.0 * math.pi, size=n)
    return [
        SubnetPose(x=px, y=py, heading=float(h), speed=config.speed_mps)
        for (px, py), h in zip(placed, headings)
    ]


def _inside(x: float, y: float, config: ScenarioConfig) -> bool:
    return 0.0 <= x <= config.area_width_m and 0.0 <= y <= config.area_height_m


def step_mobility(
    poses: list[SubnetPose], config: ScenarioConfig, rng: np.random.Generator
) -> list[SubnetPose]:
    """Advance every pose by one slot; lower-indexed poses move first."""
    step = config.speed_mps * config.slot_ms / 1000.0
    sep2 = config.min_separation_m**2
    out = list(poses)
    for i, pose in enumerate(poses):
        heading = pose.heading
        moved = None
        for _ in range(_MAX_HEADING_RESAMPLES):
            nx = pose.x + step * math.cos(heading)
            ny = pose.y + step * math.sin(heading)
            clear = all(
                (nx - q.x) ** 2 + (ny - q.y) ** 2 >= sep2 for j, q in enumerate(out) if j != i
            )
            if _inside(nx, ny, config) and clear:
                moved = replace(pose, x=nx, y=ny, heading=heading)
                break
            heading = rng.uniform(0.0, 2.0 * math.pi)
        if moved is None:
            moved = replace(pose, heading=heading)  # hold position for this slot
        out[i] = moved
    return out
