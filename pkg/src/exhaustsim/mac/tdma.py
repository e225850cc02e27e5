"""Preamble-based TDMA: globally synchronized frames of owned time slots."""

import math
from dataclasses import dataclass, field

from .base import MacBase
from .. import frames
from ..channel import SLEEP, IDLE, RX

PREAMBLE = "preamble"


@dataclass(frozen=True)
class TdmaConfig:
    slot: float = 2.5e-3
    preamble_slots: int = 2
    data_slots: int = 26
    guard: float = 80e-6
    overhead_bytes: int = 17
    ack_bytes: int = 17            # unused: TDMA data is unacknowledged
    # node id -> data slot index; filled by the engine
    assignment: dict = field(default_factory=dict)

    @property
    def slots_per_frame(self):
        return self.preamble_slots + self.data_slots

    @property
    def frame_period(self):
        return self.slots_per_frame * self.slot


def tdma_slot_owner(slot_index, config):
    """Owner of a slot within one TDMA frame.

    The first `preamble_slots` slots are schedule preamble; data slot k
    belongs to the node assigned k; unassigned slots idle (None).
    """
    if not 0 <= slot_index < config.slots_per_frame:
        raise ValueError(f"slot index {slot_index} out of frame")
    if slot_index < config.preamble_slots:
        return PREAMBLE
    data_index = slot_index - config.preamble_slots
    for node_id, assigned in config.assignment.items():
        if assigned == data_index:
            return node_id
    return None


class TdmaMac(MacBase):
    """Each node transmits only inside its own slot; perfectly synchronized
    schedules make the data path collision-free. Frames are unacknowledged;
    battery nodes sleep outside their own slot unless routing holds the
    radio awake to catch a route reply."""

    name = "tdma"
    uses_acks = False

    def __init__(self, node, channel, scheduler, rng, config):
        super().__init__(node, channel, scheduler, rng, config)
        if node.node_id not in config.assignment:
            raise ValueError(f"node {node.node_id} has no TDMA slot")
        self.my_slot = config.assignment[node.node_id]
        self._slot_event = None
        self._slot_end = None
        self.listen_until = 0.0

    # ---- slot arithmetic ---------------------------------------------------
    def next_own_slot(self, now):
        """Start time of the next slot owned by this node, strictly > now."""
        cfg = self.config
        offset = (cfg.preamble_slots + self.my_slot) * cfg.slot
        k = math.floor((now - offset) / cfg.frame_period) + 1
        start = offset + k * cfg.frame_period
        if start <= now:
            start += cfg.frame_period
        return start

    def start(self):
        self._maybe_sleep()

    # ---- sleep policy --------------------------------------------------------
    def wants_sleep(self):
        if not self.node.battery_powered:
            return False
        now = self.scheduler.now
        if now < self.listen_until:
            return False
        if self._slot_end is not None and now < self._slot_end:
            return False
        return True

    def hold_awake(self, until):
        self.listen_until = max(self.listen_until, until)
        if self.node.mode == SLEEP:
            busy = self.channel.busy_count[self.node.node_id] > 0
            self.node.set_mode(RX if busy else IDLE)
        self.scheduler.schedule(self.listen_until, self._maybe_sleep,
                                target=self.node.node_id, kind="listen-release")

    def _maybe_sleep(self):
        if self.node.battery_powered and self.wants_sleep() \
                and self.node.node_id not in self.channel.active:
            self.node.set_mode(SLEEP)

    # ---- queue service -----------------------------------------------------
    def _kick(self):
        if self._slot_event is not None or len(self.queue) == 0:
            return
        start = self.next_own_slot(self.scheduler.now)
        self._slot_event = self.scheduler.schedule(
            start, self._slot_start, target=self.node.node_id, kind="tdma-slot")

    def _slot_start(self):
        self._slot_event = None
        self._slot_end = self.scheduler.now + self.config.slot
        if self.node.mode == SLEEP:
            self.node.set_mode(IDLE)
        self._try_send()

    def _try_send(self):
        frame = self.queue.peek()
        now = self.scheduler.now
        if frame is None:
            self._slot_done()
            return
        if now + self.frame_airtime(frame) > self._slot_end - self.config.guard:
            self._slot_done()
            return
        self.queue.pop()
        self.channel.begin_transmission(self.node, frame, self.frame_bytes(frame))

    def on_tx_complete(self, record):
        self._settle_unacked(record)
        self._try_send()

    def _slot_done(self):
        self._slot_end = None
        self._maybe_sleep()
        self._kick()
