"""CBR emission-report traffic and the server-side threshold alerting scheme."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CbrConfig:
    interval: float = 0.1     # seconds between reports
    payload: int = 512        # bytes
    start: float = 10.0       # first send time

    def __post_init__(self):
        if self.interval <= 0:
            raise ValueError("CBR interval must be positive")
        if self.payload <= 0:
            raise ValueError("CBR payload must be positive")


def generate_cbr(config, horizon):
    """Send times start, start+interval, ... strictly before the horizon."""
    times = []
    k = 0
    while True:
        t = config.start + k * config.interval
        if t >= horizon:
            break
        times.append(t)
        k += 1
    return times


@dataclass(frozen=True)
class EmissionReading:
    vehicle: int
    timestamp: float
    co: float    # ppm
    hc: float    # ppm
    nox: float   # ppm

    def __post_init__(self):
        if min(self.co, self.hc, self.nox) < 0:
            raise ValueError("gas concentrations must be non-negative")


@dataclass(frozen=True)
class AlertPolicy:
    co_limit: float = 9000.0     # ppm thresholds for a failing exhaust
    hc_limit: float = 1200.0
    nox_limit: float = 2500.0
    window: int = 3              # consecutive violations after a notice

    def __post_init__(self):
        if min(self.co_limit, self.hc_limit, self.nox_limit) <= 0:
            raise ValueError("alert thresholds must be positive")
        if self.window < 1:
            raise ValueError("violation window must be >= 1")


OK = "OK"
NONE = "NONE"
NOTIFY = "NOTIFY"
CHARGE = "CHARGE"


def evaluate_reading(reading, policy):
    """OK, or VIOLATION listing every gas strictly above its threshold."""
    gases = []
    if reading.co > policy.co_limit:
        gases.append("CO")
    if reading.hc > policy.hc_limit:
        gases.append("HC")
    if reading.nox > policy.nox_limit:
        gases.append("NOx")
    if not gases:
        return OK
    return ("VIOLATION", tuple(gases))


def escalate(history, policy):
    """Escalation level after a timestamp-ordered history of evaluations.

    The first violation notifies the owner; `window` consecutive violating
    reports after the notice escalate to a charge. Any OK report resets the
    consecutive counter (but never revokes a notice or charge).
    """
    level = NONE
    consecutive = 0
    for outcome in history:
        if outcome == OK:
            consecutive = 0
            continue
        if level == NONE:
            level = NOTIFY
            consecutive = 0
        else:
            consecutive += 1
            if consecutive >= policy.window:
                level = CHARGE
    return level


class EmissionSource:
    """Synthetic exhaust readings: per-vehicle baseline plus seeded noise."""

    CLEAN_BASELINE = (4000.0, 500.0, 1200.0)   # CO, HC, NOx ppm
    DIRTY_BASELINE = (12000.0, 1800.0, 3400.0)

    def __init__(self, vehicle_id, rng, dirty=False):
        self.vehicle_id = vehicle_id
        self.rng = rng
        self.baseline = self.DIRTY_BASELINE if dirty else self.CLEAN_BASELINE

    def read(self, now):
        co, hc, nox = (max(0.0, b * (1.0 + 0.1 * self.rng.gauss(0.0, 1.0)))
                       for b in self.baseline)
        return EmissionReading(vehicle=self.vehicle_id, timestamp=now,
                               co=co, hc=hc, nox=nox)


class AlertTracker:
    """Runs the alerting pipeline at the server over received reports only."""

    def __init__(self, policy):
        self.policy = policy
        self.histories = {}   # vehicle id -> list of evaluations
        self.decisions = {}   # vehicle id -> current level

    def ingest(self, reading):
        outcome = evaluate_reading(reading, self.policy)
        hist = self.histories.setdefault(reading.vehicle, [])
        hist.append(outcome)
        level = escalate(hist, self.policy)
        self.decisions[reading.vehicle] = level
        return level
