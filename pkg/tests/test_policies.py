import numpy as np
import pytest
from hypothesis import given, strategies as st

from alarmmac.config import PolicyKind
from alarmmac.policies import (
    DrlPolicy,
    MapRaPolicy,
    RchPolicy,
    decayed_epsilon,
    make_policy,
    pattern_bits,
    pattern_index,
    pattern_table,
)

from conftest import make_config


def test_pattern_examples():
    assert list(pattern_bits(3, 2)) == [1, 1]
    assert pattern_index(pattern_bits(3, 2)) == 3
    assert list(pattern_bits(0, 4)) == [0, 0, 0, 0]
    assert pattern_index(pattern_bits(0, 4)) == 0
    assert list(pattern_bits(19, 5)) == [1, 1, 0, 0, 1]
    assert pattern_index(pattern_bits(19, 5)) == 19


def test_pattern_out_of_range():
    with pytest.raises(ValueError):
        pattern_bits(4, 2)
    with pytest.raises(ValueError):
        pattern_bits(-1, 2)


@given(st.integers(min_value=1, max_value=10), st.data())
def test_pattern_roundtrip_property(m, data):
    i = data.draw(st.integers(min_value=0, max_value=(1 << m) - 1))
    assert pattern_index(pattern_bits(i, m)) == i


def test_pattern_table_bijection():
    table = pattern_table(3)
    assert table.shape == (8, 3)
    assert len({tuple(row) for row in table}) == 8


def test_full_exploration_is_uniform():
    cfg = make_config(epsilon_start=1.0, epsilon_floor=1.0)
    policy = MapRaPolicy(cfg)
    rng = np.random.default_rng(0)
    draws = 100_000
    counts = np.zeros(4)
    ctx = np.zeros(2)
    for _ in range(draws):
        counts[policy.select_action(ctx, rng)] += 1
    assert np.all(np.abs(counts / draws - 0.25) < 0.01)


GREEDY = dict(epsilon_start=1e-12, epsilon_floor=1e-12)  # exploration effectively off


def test_greedy_zero_network_tie_breaks_to_lowest_index():
    policy = DrlPolicy(make_config(**GREEDY), np.random.default_rng(1))
    for w in policy.model.weights:
        w[:] = 0.0
    for b in policy.model.biases:
        b[:] = 0.0
    rng = np.random.default_rng(2)
    assert all(policy.select_action(np.array([0.4, 0.2]), rng) == 0 for _ in range(50))


def test_greedy_mapra_argmax():
    policy = MapRaPolicy(make_config(**GREEDY))
    policy.q[:] = [0.1, 0.9, 0.3, 0.2]
    rng = np.random.default_rng(3)
    assert all(policy.select_action(np.zeros(2), rng) == 1 for _ in range(50))


def test_mapra_update_rule():
    cfg = make_config(mapra_tau=0.1)
    policy = MapRaPolicy(cfg)
    policy.observe(np.zeros(2), 2, 1.0)
    assert abs(policy.q[2] - 0.1) < 1e-15
    assert np.all(policy.q[[0, 1, 3]] == 0.0)  # only the taken action moves


def test_epsilon_schedule_reaches_floor_after_180_events():
    cfg = make_config()
    policy = MapRaPolicy(cfg)
    trajectory = []
    for _ in range(200):
        policy.end_event()
        trajectory.append(policy.epsilon)
    assert trajectory[178] > 0.1
    assert trajectory[179] == 0.1
    assert all(v == 0.1 for v in trajectory[179:])


def test_decayed_epsilon_never_below_floor():
    for n in range(0, 500, 7):
        eps = decayed_epsilon(1.0, 0.1, 0.005, n)
        assert 0.1 <= eps <= 1.0


def test_rch_observe_is_noop(rng):
    policy = RchPolicy(2)
    assert policy.observe(np.zeros(2), 1, -1.0) is None
    policy.end_event()
    counts = np.zeros(4)
    for _ in range(20_000):
        counts[policy.select_action(np.zeros(2), rng)] += 1
    assert np.all(counts > 0)


def test_argmax_invariant_to_constant_shift(rng):
    policy = MapRaPolicy(make_config(**GREEDY))
    policy.q[:] = rng.standard_normal(4)
    before = policy.select_action(np.zeros(2), np.random.default_rng(0))
    policy.q += 123.456
    after = policy.select_action(np.zeros(2), np.random.default_rng(0))
    assert before == after


def test_drl_observe_updates_weights_and_returns_loss(rng):
    cfg = make_config(minibatch_size=4, replay_capacity=16)
    policy = DrlPolicy(cfg, np.random.default_rng(4))
    from alarmmac.learning import params_to_vector

    before = params_to_vector(policy.model).copy()
    value = policy.observe(np.array([0.2, 0.4]), 3, 1.0, rng=rng)
    assert value is not None and value >= 0.0
    assert policy.update_count == 1
    assert not np.array_equal(before, params_to_vector(policy.model))


def test_drl_lr_decays_per_event():
    cfg = make_config(lr_initial=0.01, lr_decay_per_event=0.015)
    policy = DrlPolicy(cfg, np.random.default_rng(5))
    policy.end_event()
    assert abs(policy.opt.lr - 0.01 * 0.985) < 1e-15
    policy.end_event()
    assert abs(policy.opt.lr - 0.01 * 0.985**2) < 1e-15


def test_mapra_converges_on_stationary_bandit():
    # fixed reward per action; greedy choice must find the best arm
    rewards = np.array([0.1, 0.9, 0.3, 0.2])
    wins = 0
    for seed in range(100):
        cfg = make_config(mapra_tau=0.1)
        policy = MapRaPolicy(cfg)
        rng = np.random.default_rng(seed)
        for _ in range(2000):
            action = policy.select_action(np.zeros(2), rng)
            policy.observe(np.zeros(2), action, float(rewards[action]))
            policy.end_event()
        if int(np.argmax(policy.q)) == 1:
            wins += 1
    assert wins >= 95


def test_make_policy_dispatch():
    rng = np.random.default_rng(6)
    assert isinstance(make_policy(make_config(policy_kind=PolicyKind.RCH), rng), RchPolicy)
    assert isinstance(make_policy(make_config(policy_kind=PolicyKind.MAP_RA), rng), MapRaPolicy)
    assert isinstance(make_policy(make_config(policy_kind=PolicyKind.DRL), rng), DrlPolicy)
