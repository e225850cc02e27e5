"""IEEE 802.11-style CSMA/CA (basic-access DCF with ACKs, no RTS/CTS)."""

import math
from dataclasses import dataclass

from .base import MacBase
from .. import frames
from .. import metrics as mt


@dataclass(frozen=True)
class CsmaConfig:
    slot: float = 20e-6
    sifs: float = 10e-6
    difs: float = 50e-6
    cw_min: int = 31
    cw_max: int = 1023
    retry_limit: int = 7
    # MAC header (34 B) + long PLCP preamble/header (192 us = 48 B at 2 Mb/s)
    overhead_bytes: int = 82
    ack_bytes: int = 62        # 14 B ACK + the same PLCP preamble


def csma_backoff_slots(retry, rng, config=CsmaConfig()):
    """Uniform draw from the doubling contention window 31, 63, ..., 1023."""
    if retry < 0:
        raise ValueError("retry must be >= 0")
    cw = min((config.cw_min + 1) * 2 ** retry - 1, config.cw_max)
    return rng.randint(0, cw)


class DcfMac(MacBase):
    """Distributed coordination function: sense, defer DIFS, count down a
    random backoff during idle periods (frozen while busy), transmit, await
    the ACK; double the window and retry on timeout, up to the retry limit.
    """

    name = "802.11"
    uses_acks = True

    IDLE_Q = "idle"
    WAITING = "wait-idle"
    COUNTING = "counting"
    TX_DATA = "tx"
    WAIT_ACK = "wait-ack"

    def __init__(self, node, channel, scheduler, rng, config):
        super().__init__(node, channel, scheduler, rng, config)
        self.state = self.IDLE_Q
        self.current = None
        self.retry = 0
        self.backoff_slots = 0
        self._timer = None
        self._ack_timer = None
        self._count_started = None

    # ---- queue service -------------------------------------------------
    def _kick(self):
        if self.state != self.IDLE_Q or self.current is not None:
            return
        frame = self.queue.pop()
        if frame is None:
            return
        self.current = frame
        self.retry = 0
        self.backoff_slots = csma_backoff_slots(0, self.rng, self.config)
        self._begin_access()

    def _begin_access(self):
        if self.channel.carrier_busy(self.node.node_id):
            self.state = self.WAITING
            return
        self.state = self.COUNTING
        self._count_started = self.scheduler.now
        delay = self.config.difs + self.backoff_slots * self.config.slot
        self._timer = self.scheduler.schedule_in(
            delay, self._transmit, target=self.node.node_id, kind="dcf-txop")

    # ---- channel callbacks ----------------------------------------------
    def on_channel_busy(self):
        if self.state != self.COUNTING:
            return
        now = self.scheduler.now
        # a timer expiring at this same instant is already committed
        if self._timer is not None and self._timer.time > now:
            self.scheduler.cancel(self._timer)
            self._timer = None
            elapsed = now - self._count_started - self.config.difs
            if elapsed > 0:
                self.backoff_slots = max(
                    0, self.backoff_slots - int(math.floor(elapsed / self.config.slot)))
            self.state = self.WAITING

    def on_channel_idle(self):
        if self.state == self.WAITING:
            self._begin_access()

    # ---- transmit / retry ------------------------------------------------
    def _transmit(self):
        self._timer = None
        if self.node.node_id in self.channel.active:
            # our own ACK is on the air; resume access when it ends
            self.state = self.WAITING
            return
        frame = self.current
        self.state = self.TX_DATA
        self.channel.begin_transmission(self.node, frame, self.frame_bytes(frame))

    def on_tx_complete(self, record):
        frame = record.frame
        if frame.kind == frames.ACK:
            self._resume()
            return
        if frame is not self.current:
            return
        if frame.is_broadcast:
            self._finish()
            return
        self.state = self.WAIT_ACK
        ack_air = self.channel.airtime(self.config.ack_bytes)
        timeout = self.config.sifs + ack_air + 5 * self.config.slot
        self._ack_timer = self.scheduler.schedule_in(
            timeout, self._ack_timeout, target=self.node.node_id, kind="ack-timeout")

    def _on_ack(self, ack):
        if (self.state == self.WAIT_ACK and self.current is not None
                and ack.body == (self.node.node_id, self.current.seq)):
            self.scheduler.cancel(self._ack_timer)
            self._ack_timer = None
            self._finish()

    def _ack_timeout(self):
        self._ack_timer = None
        self.retry += 1
        if self.retry > self.config.retry_limit:
            frame, self.current = self.current, None
            self.state = self.IDLE_Q
            self.node.on_mac_drop(frame, mt.RETRY_EXCEEDED)
            self._kick()
            return
        self.backoff_slots = csma_backoff_slots(self.retry, self.rng, self.config)
        self._begin_access()

    def _finish(self):
        self.current = None
        self.retry = 0
        self.state = self.IDLE_Q
        self._kick()

    def _resume(self):
        """After sending an ACK of our own, resume whatever was in progress."""
        if self.state == self.WAITING and self.current is not None:
            if not self.channel.carrier_busy(self.node.node_id):
                self._begin_access()

    # ---- acknowledging received frames ------------------------------------
    def _send_ack(self, frame):
        ack = frames.Frame(kind=frames.ACK, source=self.node.node_id,
                           destination=frame.source, payload_size=0,
                           seq=self.next_seq(), body=(frame.source, frame.seq))
        self.scheduler.schedule_in(
            self.config.sifs, lambda: self._do_send_ack(ack),
            target=self.node.node_id, kind="ack-tx")

    def _do_send_ack(self, ack):
        if self.node.node_id in self.channel.active:
            return  # half-duplex: busy transmitting something else
        # sending the ACK interrupts a countdown; freeze it
        if self.state == self.COUNTING:
            self.on_channel_busy_self_interrupt()
        self.channel.begin_transmission(self.node, ack, self.frame_bytes(ack))

    def on_channel_busy_self_interrupt(self):
        now = self.scheduler.now
        if self._timer is not None and self._timer.time > now:
            self.scheduler.cancel(self._timer)
            self._timer = None
            elapsed = now - self._count_started - self.config.difs
            if elapsed > 0:
                self.backoff_slots = max(
                    0, self.backoff_slots - int(math.floor(elapsed / self.config.slot)))
            self.state = self.WAITING
