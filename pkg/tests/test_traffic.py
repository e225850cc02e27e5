import random

import pytest

from exhaustsim.traffic import (CHARGE, NONE, NOTIFY, OK, AlertPolicy,
                                AlertTracker, CbrConfig, EmissionReading,
                                EmissionSource, evaluate_reading, escalate,
                                generate_cbr)

V = ("VIOLATION", ("CO",))


def test_default_cbr_offers_5900_packets():
    times = generate_cbr(CbrConfig(), 600.0)
    assert len(times) == 5900
    assert times[0] == 10.0
    assert times[-1] < 600.0


def test_cbr_rejects_bad_config():
    with pytest.raises(ValueError):
        CbrConfig(interval=0.0)
    with pytest.raises(ValueError):
        CbrConfig(payload=-1)


def test_evaluate_reading_flags_each_gas():
    policy = AlertPolicy()
    clean = EmissionReading(1, 0.0, co=100.0, hc=100.0, nox=100.0)
    dirty = EmissionReading(1, 0.0, co=10000.0, hc=2000.0, nox=100.0)
    assert evaluate_reading(clean, policy) == OK
    assert evaluate_reading(dirty, policy) == ("VIOLATION", ("CO", "HC"))
    with pytest.raises(ValueError):
        EmissionReading(1, 0.0, co=-1.0, hc=0.0, nox=0.0)


def test_escalation_ladder():
    policy = AlertPolicy(window=3)
    assert escalate([], policy) == NONE
    assert escalate([OK, OK], policy) == NONE
    assert escalate([V], policy) == NOTIFY
    # OK resets the consecutive count but never revokes the notice
    assert escalate([V, V, OK, V, V], policy) == NOTIFY
    assert escalate([V, V, V, V], policy) == CHARGE
    assert escalate([V, OK, V, V, V], policy) == CHARGE


def test_emission_source_profiles():
    dirty = EmissionSource(1, random.Random(1), dirty=True).read(0.0)
    clean = EmissionSource(1, random.Random(1), dirty=False).read(0.0)
    assert dirty.co > clean.co
    # same seed, same reading
    again = EmissionSource(1, random.Random(1), dirty=True).read(0.0)
    assert again == dirty


def test_alert_tracker_escalates_dirty_vehicle():
    tracker = AlertTracker(AlertPolicy(window=3))
    source = EmissionSource(25, random.Random(3), dirty=True)
    level = NONE
    for i in range(10):
        level = tracker.ingest(source.read(float(i)))
    assert level == CHARGE
    assert tracker.decisions[25] == CHARGE
