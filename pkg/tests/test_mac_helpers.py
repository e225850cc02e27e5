import random

import pytest

from exhaustsim.mac import (CsmaConfig, TdmaConfig, csma_backoff_slots,
                            tdma_slot_owner, PREAMBLE)
from exhaustsim.mac.smac import (ASLEEP, AWAKE, SmacConfig, joint_window,
                                 next_joint_start, smac_state)


def test_csma_backoff_window_doubles_to_cap():
    rng = random.Random(0)
    for retry, cw in ((0, 31), (1, 63), (2, 127), (5, 1023), (9, 1023)):
        draws = [csma_backoff_slots(retry, rng) for _ in range(300)]
        assert 0 <= min(draws) and max(draws) <= cw
        assert max(draws) > cw // 2   # the window is actually exercised
    with pytest.raises(ValueError):
        csma_backoff_slots(-1, rng)


def test_tdma_slot_ownership():
    cfg = TdmaConfig(assignment={10: 0, 11: 1})
    assert tdma_slot_owner(0, cfg) == PREAMBLE
    assert tdma_slot_owner(1, cfg) == PREAMBLE
    assert tdma_slot_owner(2, cfg) == 10
    assert tdma_slot_owner(3, cfg) == 11
    assert tdma_slot_owner(4, cfg) is None
    with pytest.raises(ValueError):
        tdma_slot_owner(cfg.slots_per_frame, cfg)
    assert cfg.frame_period == pytest.approx(28 * 2.5e-3)


def test_smac_state_follows_duty_cycle():
    cfg = SmacConfig(period=1.0, duty=0.1)
    assert smac_state(0.0, cfg, phase=0.0) == AWAKE
    assert smac_state(0.05, cfg, phase=0.0) == AWAKE
    assert smac_state(0.1, cfg, phase=0.0) == ASLEEP
    assert smac_state(0.99, cfg, phase=0.0) == ASLEEP
    assert smac_state(1.0, cfg, phase=0.0) == AWAKE
    # phase shifts the schedule
    assert smac_state(0.0, cfg, phase=0.5) == ASLEEP
    assert smac_state(0.5, cfg, phase=0.5) == AWAKE
    with pytest.raises(ValueError):
        SmacConfig(duty=1.5)


def test_smac_joint_window():
    cfg = SmacConfig(period=1.0, duty=0.2)
    # identical phases: the whole listen window is shared
    anchor, length = joint_window(0.3, 0.3, cfg)
    assert length == pytest.approx(cfg.listen_window)
    # offset smaller than the window: partial overlap
    anchor, length = joint_window(0.0, 0.1, cfg)
    assert length == pytest.approx(0.1)
    # offset beyond the window: no joint awake time
    assert joint_window(0.0, 0.5, cfg) is None


def test_smac_next_joint_start_is_never_in_the_past():
    cfg = SmacConfig(period=1.0, duty=0.2)
    result = next_joint_start(10.37, 0.0, 0.1, cfg)
    assert result is not None
    start, end = result
    assert start >= 10.37
    assert end > start
