import math

import numpy as np

from alarmmac.channel import (
    attenuation,
    correlated_field,
    draw_link,
    los_probability,
    pathloss_db,
    rayleigh_fading,
    shadowing_db,
)

from conftest import make_config


def test_pathloss_at_one_meter_is_offset_only():
    cfg = make_config()
    for los, (a, b, g) in ((True, cfg.pathloss_abg_los), (False, cfg.pathloss_abg_nlos)):
        expected = b + 10.0 * g * math.log10(cfg.carrier_ghz)
        assert abs(pathloss_db(1.0, los, cfg) - expected) < 1e-12
        # distances below 1 m clamp to the 1 m value
        assert pathloss_db(0.2, los, cfg) == pathloss_db(1.0, los, cfg)


def test_pathloss_decade_step_is_ten_a():
    cfg = make_config()
    a_nlos = cfg.pathloss_abg_nlos[0]
    delta = pathloss_db(100.0, False, cfg) - pathloss_db(10.0, False, cfg)
    assert abs(delta - 10.0 * a_nlos) < 1e-12


def test_pathloss_default_nlos_spreadsheet_value():
    # 10 * 2.55 * log10(25) + 33 + 10 * 2.0 * log10(6), evaluated independently
    cfg = make_config(carrier_ghz=6.0)
    expected = 10.0 * 2.55 * math.log10(25.0) + 33.0 + 10.0 * 2.0 * math.log10(6.0)
    assert abs(expected - 84.21049522880984) < 1e-10
    assert abs(pathloss_db(25.0, False, cfg) - expected) < 1e-12


def test_pathloss_monotone_beyond_one_meter():
    cfg = make_config()
    grid = np.linspace(1.0, 80.0, 200)
    vals = [pathloss_db(d, False, cfg) for d in grid]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_shadowing_zero_mean(rng):
    cfg = make_config()
    sigma = 6.0
    draws = shadowing_db(np.array([[5.0, 5.0]]), rng, cfg, sigma_db=sigma, n_draws=100_000)
    assert abs(draws.mean()) < 3.0 * sigma / math.sqrt(100_000)


def test_shadowing_correlation_at_decorrelation_distance(rng):
    cfg = make_config()
    pts = np.array([[0.0, 0.0], [cfg.shadow_corr_distance_m, 0.0]])
    draws = correlated_field(pts, rng, cfg.shadow_corr_distance_m, n_draws=100_000)
    corr = np.corrcoef(draws[:, 0], draws[:, 1])[0, 1]
    assert abs(corr - math.exp(-1.0)) < 0.05


def test_shadowing_correlation_at_zero_distance(rng):
    cfg = make_config()
    pts = np.array([[3.0, 4.0], [3.0, 4.0]])
    draws = correlated_field(pts, rng, cfg.shadow_corr_distance_m, n_draws=1_000)
    assert np.allclose(draws[:, 0], draws[:, 1], atol=1e-5)


def test_attenuation_powers_of_ten():
    assert attenuation(20.0, 0.0) == 0.01
    assert attenuation(0.0, 0.0) == 1.0


def test_fading_unit_mean_power(rng):
    k = rayleigh_fading(rng, (100_000,))
    assert abs(np.mean(np.abs(k) ** 2) - 1.0) < 0.05


def test_draw_link_composes_exactly(rng):
    cfg = make_config()
    link = draw_link(17.3, False, shadow_db_value=4.2, rng=rng, config=cfg)
    expected = link.fading * 10.0 ** (-(link.pathloss_db + link.shadow_db) / 10.0)
    assert np.array_equal(link.gain, expected)
    assert link.fading.shape == (cfg.n_channels,)


def test_draw_link_mean_power_matches_attenuation(rng):
    # fixed pathloss and zero shadowing: E[|gain|^2] = attenuation(PL, 0)^2
    cfg = make_config()
    pl = pathloss_db(5.0, True, cfg)
    powers = []
    for _ in range(20_000):
        link = draw_link(5.0, True, shadow_db_value=0.0, rng=rng, config=cfg)
        powers.append(np.abs(link.gain) ** 2)
    expected = attenuation(pl, 0.0) ** 2
    assert abs(np.mean(powers) / expected - 1.0) < 0.02


def test_los_probability_shape():
    cfg = make_config()
    assert los_probability(0.0, cfg) == 1.0
    assert 0.0 < los_probability(30.0, cfg) < los_probability(3.0, cfg) < 1.0
