"""Slot loop: mobility, events, signature exchange, contention, training.

Each slot executes, in order: one mobility step; an event spawn check (new
alarms are suppressed while one is in flight unless overlap is enabled); and,
if an alarm is live, one full contention round:

    pilots -> aggregate at the controller -> signature broadcast ->
    featurize -> per-agent action selection -> collision resolution ->
    reward assignment -> one training update per active agent.

A channel succeeds when exactly one active agent transmits on it; the slot
succeeds when any channel does. Delivery by any member of an event's active
set terminates the event for all of them. An undelivered event fails once
its age exceeds the deadline, after exactly D + 1 contention rounds when no
signalling overhead is configured. Acknowledgements are error-free and
instantaneous on a dedicated channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import channel as chan
from . import signature as sig
from .config import CsGainMode, RewardScope, ScenarioConfig, derive_stream
from .events import AlarmEvent, maybe_spawn_event
from .geometry import SubnetPose, place_uniform, step_mobility
from .policies import Policy, make_policy, pattern_table


@dataclass
class SlotOutcome:
    slot: int
    channel_counts: np.ndarray  # transmitters per channel
    success: bool  # any channel with exactly one transmitter
    successful_channels: tuple[int, ...]
    winner: int | None  # unique transmitter on the lowest successful channel
    age: int | None  # alarm age entering this round (oldest live event)
    records: list[tuple[int, np.ndarray, int, float]] | None  # (lap, context, action, reward)


@dataclass
class EventRecord:
    birth_slot: int
    end_slot: int
    delivered: bool
    attempts: int
    active_size: int

    @property
    def slots_to_delivery(self) -> int | None:
        return self.end_slot - self.birth_slot if self.delivered else None


@dataclass
class RunTrace:
    outcomes: list[SlotOutcome] = field(default_factory=list)
    events: list[EventRecord] = field(default_factory=list)
    mse: list[float] = field(default_factory=list)
    n_slots: int = 0
    n_contention_slots: int = 0

    @property
    def delivered_count(self) -> int:
        return sum(1 for e in self.events if e.delivered)

    @property
    def failed_count(self) -> int:
        return len(self.events) - self.delivered_count


def reward_of(delivered: bool, winner: int | None, lap: int, config: ScenarioConfig) -> float:
    """Per-slot reward of one active agent under the configured scope.

    Shared scope pays every member of a delivered event's active set alike;
    individual scope pays only the winning transmitter.
    """
    if config.reward_scope is RewardScope.SHARED:
        return config.reward_success if delivered else config.reward_failure
    return config.reward_success if lap == winner else config.reward_failure


def resolve_collisions(
    action_indices: list[int] | np.ndarray, n_channels: int
) -> tuple[bool, np.ndarray, tuple[int, ...], int | None]:
    """Collision outcome of one slot.

    Returns (success, per-channel transmitter counts, successful channels,
    index into `action_indices` of the winner). The winner is the unique
    transmitter on the lowest-indexed successful channel.
    """
    table = pattern_table(n_channels)
    actions = np.asarray(action_indices, dtype=int)
    bits = table[actions] if actions.size else np.zeros((0, n_channels), dtype=np.uint8)
    counts = bits.sum(axis=0).astype(int) if actions.size else np.zeros(n_channels, dtype=int)
    successful = tuple(int(m) for m in np.nonzero(counts == 1)[0])
    winner = None
    if successful:
        m = successful[0]
        winner = int(np.nonzero(bits[:, m])[0][0])
    return bool(successful), counts, successful, winner


class Simulation:
    """World state for one seeded run; strictly single threaded."""

    def __init__(self, config: ScenarioConfig, seed: int | None = None):
        self.config = config
        self.seed = config.rng_seed if seed is None else seed
        s = self.seed
        self.rng_mobility = derive_stream(s, "mobility")
        self.rng_events = derive_stream(s, "events")
        self.rng_channel = derive_stream(s, "channel")
        self.rng_fading = derive_stream(s, "fading")
        self.rng_noise = derive_stream(s, "noise")
        self.rng_explore = derive_stream(s, "explore")
        self.rng_sample = derive_stream(s, "sample")
        rng_place = derive_stream(s, "placement")
        rng_init = derive_stream(s, "init")

        self.poses: list[SubnetPose] = place_uniform(config, rng_place)
        self.cap_xy = (config.area_width_m / 2.0, config.area_height_m / 2.0)
        self._snapshot_channel_state()
        self.policies: list[Policy] = [make_policy(config, rng_init) for _ in range(config.n_subnets)]
        self.live_events: list[AlarmEvent] = []
        self.slot = 0
        self.trace = RunTrace()
        self.snr_linear = 10.0 ** (config.snr_avg_db / 10.0)

    def _cap_distances(self) -> np.ndarray:
        cx, cy = self.cap_xy
        return np.array([math.hypot(p.x - cx, p.y - cy) for p in self.poses])

    def _snapshot_channel_state(self) -> None:
        """Line-of-sight, shadowing, and the reference attenuation are frozen
        per snapshot; only small-scale fading is redrawn each slot."""
        cfg = self.config
        d = self._cap_distances()
        self.los = np.array([chan.draw_los(di, self.rng_channel, cfg) for di in d])
        sigma = np.where(self.los, cfg.shadow_sigma_los_db, cfg.shadow_sigma_nlos_db)
        positions = np.array([[p.x, p.y] for p in self.poses])
        self.shadow_db = chan.shadowing_db(positions, self.rng_channel, cfg, sigma_db=sigma)
        pl = np.array([chan.pathloss_db(di, bool(l), cfg) for di, l in zip(d, self.los)])
        amps = chan.attenuation(pl, self.shadow_db)
        self._reference_amp = float(np.median(amps)) if len(amps) else 1.0

    def _link_gains(self, active: tuple[int, ...]) -> np.ndarray:
        """Per-channel complex gains for the active uplinks this slot."""
        cfg = self.config
        k = len(active)
        kappa = chan.rayleigh_fading(self.rng_fading, (k, cfg.n_channels))
        if cfg.cs_gain_mode is CsGainMode.FADING_ONLY:
            return kappa
        cx, cy = self.cap_xy
        amps = np.empty(k)
        for row, n in enumerate(active):
            d = math.hypot(self.poses[n].x - cx, self.poses[n].y - cy)
            pl = chan.pathloss_db(d, bool(self.los[n]), cfg)
            amps[row] = chan.attenuation(pl, self.shadow_db[n])
        if cfg.cs_gain_mode is CsGainMode.NORMALIZED and self._reference_amp > 0:
            amps = amps / self._reference_amp
        return kappa * amps[:, None]

    def _contexts(self, active: tuple[int, ...]) -> np.ndarray:
        cfg = self.config
        gains = self._link_gains(active)
        pilots = sig.make_pilots(len(active), cfg.n_channels, cfg.pilot_mode, self.rng_noise)
        y = sig.aggregate_pilots(gains, pilots, self.snr_linear, self.rng_noise)
        # reciprocity: the downlink reuses this slot's uplink gains
        cs = sig.broadcast_cs(y, gains, self.snr_linear, self.rng_noise)
        return sig.featurize(cs)

    def _spawn_allowed(self) -> bool:
        return self.config.allow_event_overlap or not self.live_events

    def _busy_laps(self) -> set[int]:
        return {n for e in self.live_events for n in e.active_set}

    def run_slot(self) -> SlotOutcome:
        cfg = self.config
        self.poses = step_mobility(self.poses, cfg, self.rng_mobility)

        if self._spawn_allowed():
            event = maybe_spawn_event(self.slot, self.poses, self.rng_events, cfg)
            if event is not None:
                if cfg.allow_event_overlap:
                    # an agent already holding an alarm does not join a second one
                    busy = self._busy_laps()
                    event.active_set = tuple(n for n in event.active_set if n not in busy)
                # an event nobody detects is a coverage miss, not a delivery failure
                if event.active_set:
                    self.live_events.append(event)

        outcome = self._contention_round() if self.live_events else SlotOutcome(
            slot=self.slot,
            channel_counts=np.zeros(cfg.n_channels, dtype=int),
            success=False,
            successful_channels=(),
            winner=None,
            age=None,
            records=None,
        )
        if outcome.age is not None:
            self.trace.outcomes.append(outcome)
            self.trace.n_contention_slots += 1
        self.slot += 1
        self.trace.n_slots = self.slot
        return outcome

    def _contention_round(self) -> SlotOutcome:
        cfg = self.config
        active = tuple(sorted(self._busy_laps()))
        oldest_age = max(e.age for e in self.live_events)

        if active:
            contexts = self._contexts(active)
            actions = [
                self.policies[n].select_action(contexts[row], self.rng_explore)
                for row, n in enumerate(active)
            ]
        else:
            contexts = np.zeros((0, cfg.n_channels))
            actions = []

        success, counts, successful, winner_row = resolve_collisions(actions, cfg.n_channels)
        winner = active[winner_row] if winner_row is not None else None

        # map each successful channel's unique transmitter to its event
        delivered_by: dict[int, int] = {}
        if successful:
            bits = pattern_table(cfg.n_channels)[np.asarray(actions, dtype=int)]
            for m in successful:
                delivered_by[m] = active[int(np.nonzero(bits[:, m])[0][0])]

        records: list[tuple[int, np.ndarray, int, float]] = []
        losses: list[float] = []
        still_live: list[AlarmEvent] = []
        row_of = {n: row for row, n in enumerate(active)}

        for event in self.live_events:
            event_winner = None
            for m in successful:
                if delivered_by[m] in event.active_set:
                    event_winner = delivered_by[m]
                    break
            delivered = event_winner is not None
            event.attempts += 1

            for n in event.active_set:
                row = row_of[n]
                r = reward_of(delivered, event_winner, n, cfg)
                loss = self.policies[n].observe(contexts[row], actions[row], r, rng=self.rng_sample)
                if loss is not None:
                    losses.append(loss)
                if cfg.record_tuples:
                    records.append((n, contexts[row], actions[row], r))

            if delivered:
                event.delivered = True
                event.delivery_slot = self.slot
                self._finish_event(event)
            else:
                event.age += 1 + cfg.cs_overhead_slots
                if event.age > event.deadline_slots:
                    event.failed = True
                    self._finish_event(event)
                else:
                    still_live.append(event)
        self.live_events = still_live

        if losses:
            self.trace.mse.append(float(np.mean(losses)))

        return SlotOutcome(
            slot=self.slot,
            channel_counts=counts,
            success=success,
            successful_channels=successful,
            winner=winner,
            age=oldest_age,
            records=records if cfg.record_tuples else None,
        )

    def _finish_event(self, event: AlarmEvent) -> None:
        self.trace.events.append(
            EventRecord(
                birth_slot=event.birth_slot,
                end_slot=self.slot,
                delivered=event.delivered,
                attempts=event.attempts,
                active_size=len(event.active_set),
            )
        )
        for n in event.active_set:
            self.policies[n].end_event()

    def run(self, n_slots: int | None = None, until_events: int | None = None) -> RunTrace:
        """Advance the world; stops at n_slots, or earlier once until_events
        terminal events have been recorded."""
        horizon = self.config.n_slots if n_slots is None else n_slots
        for _ in range(horizon):
            self.run_slot()
            if until_events is not None and len(self.trace.events) >= until_events:
                break
        return self.trace


def run(config: ScenarioConfig, seed: int | None = None) -> RunTrace:
    """One complete seeded run over the configured horizon."""
    return Simulation(config, seed=seed).run()
