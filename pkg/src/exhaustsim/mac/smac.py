"""Duty-cycled sleep/listen MAC with per-node schedule phases.

Every node follows its own periodic listen window. A unicast can only be
exchanged while both endpoints are awake, so neighbors whose windows do not
overlap form a dead link: the paper's unsynchronized-schedule losses emerge
from the random per-run phases. Frames are unacknowledged.
"""

from dataclasses import dataclass

from .base import MacBase
from .. import frames
from .. import metrics as mt
from ..channel import SLEEP, IDLE, RX

AWAKE = "AWAKE"
ASLEEP = "ASLEEP"


@dataclass(frozen=True)
class SmacConfig:
    period: float = 1.0
    duty: float = 0.3
    contention_slots: int = 31
    slot: float = 20e-6
    overhead_bytes: int = 17
    ack_bytes: int = 17   # unused: SMAC data is unacknowledged
    sync_bytes: int = 16

    def __post_init__(self):
        if not 0.0 < self.duty < 1.0:
            raise ValueError("duty cycle must lie strictly between 0 and 1")

    @property
    def listen_window(self):
        return self.duty * self.period


def smac_state(now, config, phase):
    """Scheduled radio state: AWAKE iff ((now - phase) mod period) < duty*period."""
    rel = (now - phase) % config.period
    return AWAKE if rel < config.listen_window else ASLEEP


def next_listen_start(now, config, phase):
    """Start of the listen window covering `now`, or the next one."""
    rel = (now - phase) % config.period
    if rel < config.listen_window:
        return now - rel
    return now + (config.period - rel)


def joint_window(phase_tx, phase_rx, config):
    """Per-period interval where both schedules are awake.

    Returns (anchor, length): the overlap repeats at anchor + k*period.
    Returns None when the two listen windows never coincide.
    """
    t = config.period
    w = config.listen_window
    delta = (phase_rx - phase_tx) % t
    if delta < w:
        return (phase_rx % t, w - delta)
    if delta > t - w:
        return (phase_tx % t, w - (t - delta))
    if delta == w or delta == t - w:
        return None  # measure-zero touch
    return None


def next_joint_start(now, phase_tx, phase_rx, config):
    """(start, end) of the next/current joint awake interval, or None."""
    jw = joint_window(phase_tx, phase_rx, config)
    if jw is None:
        return None
    anchor, length = jw
    t = config.period
    start = anchor + ((now - anchor) // t) * t
    if start + length <= now:
        start += t
    return (max(start, now), start + length)


class SmacMac(MacBase):
    """Sleep/listen schedule plus CSMA inside the awake windows."""

    name = "smac"
    uses_acks = False

    def __init__(self, node, channel, scheduler, rng, config):
        super().__init__(node, channel, scheduler, rng, config)
        self.phase = None            # set by the engine before the run starts
        self.phases = None           # shared map node id -> phase
        self.current = None
        self._window_end = None      # constrains the pending transmission
        self._timer = None
        self._attempt_event = None
        self._cycle = 0

    # ---- schedule ------------------------------------------------------------
    def start(self):
        """Begin the periodic wake/sleep cycle (engine calls this at t=0).

        Wake/sleep times are computed closed-form (phase + k*period) rather
        than accumulated, so they agree bit-for-bit with the joint-window
        arithmetic used to schedule transmissions.
        """
        now = self.scheduler.now
        rel = (now - self.phase) % self.config.period
        self._cycle = int((now - self.phase) // self.config.period)
        if rel < self.config.listen_window:
            # mid-window: finish this window, then cycle normally
            self.scheduler.schedule(
                self.phase + self._cycle * self.config.period
                + self.config.listen_window, self._fall_asleep,
                target=self.node.node_id, kind="smac-sleep")
        else:
            self.node.set_mode(SLEEP)
        self._cycle += 1
        self.scheduler.schedule(
            self.phase + self._cycle * self.config.period, self._wake_up,
            target=self.node.node_id, kind="smac-wake")

    def _wake_up(self):
        if self.node.mode == SLEEP:
            busy = self.channel.busy_count[self.node.node_id] > 0
            self.node.set_mode(RX if busy else IDLE)
        base = self.phase + self._cycle * self.config.period
        self.scheduler.schedule(base + self.config.listen_window,
                                self._fall_asleep,
                                target=self.node.node_id, kind="smac-sleep")
        self._cycle += 1
        self.scheduler.schedule(base + self.config.period, self._wake_up,
                                target=self.node.node_id, kind="smac-wake")
        # schedule broadcast at the start of each listen window
        sync = frames.Frame(kind=frames.CONTROL, source=self.node.node_id,
                            destination=frames.BROADCAST,
                            payload_size=self.config.sync_bytes,
                            seq=0, body=("SYNC", self.phase))
        self.enqueue(sync)
        self._kick()

    def _fall_asleep(self):
        self._cancel_attempt()
        if self.node.node_id in self.channel.active:
            return  # channel applies wants_sleep() when the tx ends
        self.node.set_mode(SLEEP)

    def wants_sleep(self):
        return smac_state(self.scheduler.now, self.config, self.phase) == ASLEEP

    # ---- transmit path --------------------------------------------------------
    def _kick(self):
        if self.current is not None or self._attempt_event is not None \
                or self._timer is not None:
            return
        frame = self.queue.pop()
        while frame is not None:
            window = self._tx_window(frame)
            if window is None:
                # schedules never overlap (or the overlap is too short to
                # fit the frame): the link is dead
                self.node.on_mac_drop(frame, mt.MISSED_RECEIVER)
                frame = self.queue.pop()
                continue
            break
        if frame is None:
            return
        self.current = frame
        start, end = window
        self._window_end = end
        if start <= self.scheduler.now:
            self._attempt()
        else:
            self._attempt_event = self.scheduler.schedule(
                start, self._attempt, target=self.node.node_id, kind="smac-attempt")

    def _tx_window(self, frame, at=None):
        now = self.scheduler.now if at is None else at
        if frame.is_broadcast:
            start = next_listen_start(now, self.config, self.phase)
            return (max(start, now), start + self.config.listen_window)
        phase_rx = self.phases.get(frame.destination)
        if phase_rx is None:
            return None
        window = next_joint_start(now, self.phase, phase_rx, self.config)
        if window is None:
            return None
        jw = joint_window(self.phase, phase_rx, self.config)
        if jw[1] < self.frame_airtime(frame):
            return None   # overlap exists but can never fit this frame
        return window

    def _attempt(self):
        self._attempt_event = None
        frame = self.current
        now = self.scheduler.now
        air = self.frame_airtime(frame)
        if self.node.mode == SLEEP or now + air > self._window_end:
            self._defer()
            return
        if self.channel.carrier_busy(self.node.node_id):
            return  # resume on the idle callback
        backoff = self.rng.randint(0, self.config.contention_slots) * self.config.slot
        self._timer = self.scheduler.schedule_in(
            backoff, self._transmit, target=self.node.node_id, kind="smac-tx")

    def on_channel_busy(self):
        now = self.scheduler.now
        if self._timer is not None and self._timer.time > now:
            self.scheduler.cancel(self._timer)
            self._timer = None

    def on_channel_idle(self):
        if self.current is not None and self._timer is None \
                and self._attempt_event is None:
            self._attempt()

    def _transmit(self):
        self._timer = None
        frame = self.current
        now = self.scheduler.now
        if self.node.mode == SLEEP \
                or now + self.frame_airtime(frame) > self._window_end:
            self._defer()
            return
        self.channel.begin_transmission(self.node, frame, self.frame_bytes(frame))

    def _defer(self):
        """Window closed before the frame fit; retry at the next one."""
        frame = self.current
        old_end = self._window_end
        self.current = None
        self._window_end = None
        after = max(self.scheduler.now, old_end)
        window = self._tx_window(frame, at=after)
        if window is None:
            self.node.on_mac_drop(frame, mt.MISSED_RECEIVER)
            self._kick()
            return
        self.current = frame
        start, end = window
        self._window_end = end
        self._attempt_event = self.scheduler.schedule(
            max(start, self.scheduler.now + self.config.slot), self._attempt,
            target=self.node.node_id, kind="smac-attempt")

    def on_tx_complete(self, record):
        frame = record.frame
        if frame is self.current:
            self.current = None
            self._window_end = None
            if not frame.is_broadcast and frame.kind != frames.CONTROL:
                self._settle_unacked(record)
            elif frame.is_broadcast and frame.kind == frames.ROUTING \
                    and not frame.meta.get("echo"):
                # unsynchronized neighbors were mostly asleep: repeat the
                # broadcast once, one period later, to extend flood reach
                echo = frames.Frame(kind=frame.kind, source=frame.source,
                                    destination=frame.destination,
                                    payload_size=frame.payload_size,
                                    seq=0, body=frame.body, hops=frame.hops,
                                    meta={"echo": True})
                self.scheduler.schedule_in(
                    self.config.period, lambda: self.enqueue(echo),
                    target=self.node.node_id, kind="smac-echo")
            self._kick()

    def _cancel_attempt(self):
        if self._attempt_event is not None:
            self.scheduler.cancel(self._attempt_event)
            self._attempt_event = None
        if self._timer is not None:
            self.scheduler.cancel(self._timer)
            self._timer = None
        if self.current is not None:
            # back to the queue head for the next window
            frame = self.current
            self.current = None
            self._window_end = None
            if frame.kind in (frames.ROUTING, frames.CONTROL):
                self.queue.control.appendleft(frame)
            else:
                self.queue.data.appendleft(frame)
