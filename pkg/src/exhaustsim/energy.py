"""State-based radio energy accounting and lifetime projection."""

import math
from dataclasses import dataclass

from .channel import TX, RX, IDLE, SLEEP

UNBOUNDED = math.inf


@dataclass(frozen=True)
class EnergyParams:
    initial: float = 4700.0   # joules
    p_tx: float = 2.0         # watts
    p_rx: float = 1.0
    p_idle: float = 0.8
    p_sleep: float = 1e-4

    def __post_init__(self):
        for name in ("initial", "p_tx", "p_rx", "p_idle", "p_sleep"):
            if getattr(self, name) < 0:
                raise ValueError(f"energy parameter {name} must be non-negative")
        if not (self.p_sleep < self.p_idle <= self.p_rx):
            raise ValueError("expected p_sleep < p_idle <= p_rx")

    def power(self, mode):
        return {TX: self.p_tx, RX: self.p_rx, IDLE: self.p_idle, SLEEP: self.p_sleep}[mode]


class EnergyLedger:
    """Per-node energy budget; residual = initial - sum of per-mode joules."""

    def __init__(self, params, on_depleted=None):
        self.params = params
        self.consumed = {TX: 0.0, RX: 0.0, IDLE: 0.0, SLEEP: 0.0}
        self.series = []          # (time_s, residual_J) samples
        self.on_depleted = on_depleted
        self.depleted = False

    @property
    def residual(self):
        return max(0.0, self.params.initial - sum(self.consumed.values()))

    def account(self, mode, duration):
        """Charge `duration` seconds spent in `mode`; returns joules consumed."""
        if duration < 0:
            raise ValueError("negative duration")
        if self.depleted:
            return 0.0
        joules = self.params.power(mode) * duration
        self.consumed[mode] += joules
        if self.params.initial - sum(self.consumed.values()) <= 0.0 and not self.depleted:
            self.depleted = True
            if self.on_depleted is not None:
                self.on_depleted()
        return joules

    def sample(self, time):
        self.series.append((time, self.residual))


def project_lifetime(ledger, window, window_consumed=None):
    """Remaining lifetime in seconds at the average draw observed in `window`.

    `window_consumed` defaults to everything the ledger has accounted so far
    (i.e. the whole run is the observation window). Zero consumption yields
    the unbounded-lifetime marker (math.inf).
    """
    if window <= 0:
        raise ValueError("window must be positive")
    if window_consumed is None:
        window_consumed = sum(ledger.consumed.values())
    if window_consumed <= 0:
        return UNBOUNDED
    return ledger.residual / (window_consumed / window)
