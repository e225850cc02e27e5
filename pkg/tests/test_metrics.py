import pytest

from exhaustsim.metrics import (COLLISION, DROPPED, IN_FLIGHT, RECEIVED,
                                MetricsCollector, pdr, transmitted_fraction)


def test_pdr_formula():
    assert pdr(2964, 89) == pytest.approx(0.9708, abs=5e-5)
    assert pdr(0, 0) is None
    assert pdr(0, 10) == 0.0


def test_transmitted_fraction():
    assert transmitted_fraction(3053, 5900) == pytest.approx(0.5174, abs=1e-4)
    with pytest.raises(ValueError):
        transmitted_fraction(1, 0)


def test_collector_single_terminal_outcome():
    m = MetricsCollector()
    m.register("p1", 1.0)
    assert m.received("p1", 1.5, hops=3)
    # late duplicate delivery and late drop are both ignored
    assert not m.received("p1", 1.6, hops=4)
    assert not m.dropped("p1", COLLISION, 1.7)
    rec = m.records["p1"]
    assert rec.outcome == RECEIVED
    assert rec.delay == pytest.approx(0.5)
    assert rec.hops == 3


def test_collector_rejects_bad_input():
    m = MetricsCollector()
    m.register("p1", 0.0)
    with pytest.raises(ValueError):
        m.register("p1", 0.0)
    with pytest.raises(ValueError):
        m.dropped("p1", "made-up-reason", 1.0)


def test_summary_counts():
    m = MetricsCollector()
    for i in range(4):
        m.register(i, float(i))
    m.received(0, 1.0, hops=1)
    m.dropped(1, COLLISION, 2.0)
    s = m.summary()
    assert s["generated"] == 4
    assert s["received"] == 1
    assert s["dropped"] == 1
    assert s["in_flight"] == 2
    assert s["drop_reasons"][COLLISION] == 1
    assert s["pdr"] == 0.5
    assert s["transmitted_fraction"] == 0.5
    assert s["delay_avg"] == pytest.approx(1.0)
