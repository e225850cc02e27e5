import math

import pytest

from exhaustsim.channel import ChannelParams, rx_power_two_ray


def test_parameter_validation():
    with pytest.raises(ValueError):
        ChannelParams(tx_power=0.0)
    with pytest.raises(ValueError):
        ChannelParams(rx_range=300.0, cs_range=200.0)


def test_power_is_monotonically_decreasing():
    p = ChannelParams()
    distances = [1.0, 10.0, 50.0, p.crossover_distance, 200.0, 550.0, 1000.0]
    powers = [rx_power_two_ray(p, d) for d in distances]
    assert powers == sorted(powers, reverse=True)
    with pytest.raises(ValueError):
        rx_power_two_ray(p, 0.0)


def test_fourth_power_rolloff_beyond_crossover():
    p = ChannelParams()
    d = 2 * p.crossover_distance
    assert rx_power_two_ray(p, 2 * d) == pytest.approx(
        rx_power_two_ray(p, d) / 16.0, rel=1e-12)


def test_thresholds_come_from_ranges():
    p = ChannelParams()
    assert p.rx_threshold == rx_power_two_ray(p, 250.0)
    assert p.cs_threshold == rx_power_two_ray(p, 550.0)
    assert p.cs_threshold < p.rx_threshold


def test_crossover_distance_formula():
    p = ChannelParams()
    lam = 3e8 / 914e6
    assert p.crossover_distance == pytest.approx(
        4 * math.pi * 1.5 * 1.5 / lam, rel=1e-12)
