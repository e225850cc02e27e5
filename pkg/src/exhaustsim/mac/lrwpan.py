"""IEEE 802.15.4-style unslotted CSMA-CA with a low-power idle radio."""

from dataclasses import dataclass

from .base import MacBase
from .. import frames
from .. import metrics as mt
from ..channel import SLEEP, IDLE, RX


@dataclass(frozen=True)
class LrwpanConfig:
    backoff_unit: float = 80e-6
    min_be: int = 3
    max_be: int = 5
    max_csma_backoffs: int = 4
    turnaround: float = 100e-6
    frame_retries: int = 3
    overhead_bytes: int = 17
    ack_bytes: int = 17
    # battery radios drop to sleep after this much inactivity
    idle_timeout: float = 8e-3


class LrwpanMac(MacBase):
    """Unslotted CSMA-CA: random backoff, clear-channel assessment, transmit;
    on busy CCA the backoff exponent grows, and NB > maxCSMABackoffs drops the
    frame with channel-access-failure. Unicast frames are acknowledged."""

    name = "802.15.4"
    uses_acks = True

    def __init__(self, node, channel, scheduler, rng, config):
        super().__init__(node, channel, scheduler, rng, config)
        self.current = None
        self.nb = 0
        self.be = config.min_be
        self.frame_retry = 0
        self._timer = None
        self._ack_timer = None
        self._sleep_timer = None
        self.listen_until = 0.0   # routing may hold the radio awake

    def start(self):
        self._arm_sleep()

    # ---- sleep policy ----------------------------------------------------
    def _active(self):
        return (self.current is not None or len(self.queue) > 0
                or self._ack_timer is not None
                or self.scheduler.now < self.listen_until)

    def wants_sleep(self):
        # sleep is entered via the idle timeout, never directly at tx end
        return False

    def _wake(self):
        if self.node.mode == SLEEP:
            busy = self.channel.busy_count[self.node.node_id] > 0
            self.node.set_mode(RX if busy else IDLE)
        if self._sleep_timer is not None:
            self.scheduler.cancel(self._sleep_timer)
            self._sleep_timer = None

    def _arm_sleep(self):
        if not self.node.battery_powered or self._active():
            return
        if self._sleep_timer is not None:
            self.scheduler.cancel(self._sleep_timer)
        self._sleep_timer = self.scheduler.schedule_in(
            self.config.idle_timeout, self._go_sleep,
            target=self.node.node_id, kind="radio-sleep")

    def _go_sleep(self):
        self._sleep_timer = None
        if self.node.battery_powered and not self._active():
            self.node.set_mode(SLEEP)

    def hold_awake(self, until):
        self.listen_until = max(self.listen_until, until)
        self._wake()
        self._arm_sleep_at_release()

    def _arm_sleep_at_release(self):
        if self.listen_until > self.scheduler.now:
            self.scheduler.schedule(self.listen_until, self._arm_sleep,
                                    target=self.node.node_id, kind="listen-release")

    # ---- queue service -----------------------------------------------------
    def _kick(self):
        if self.current is not None:
            return
        frame = self.queue.pop()
        if frame is None:
            self._arm_sleep()
            return
        self._wake()
        self.current = frame
        self.frame_retry = 0
        self._start_csma()

    def _start_csma(self):
        self.nb = 0
        self.be = self.config.min_be
        self._backoff()

    def _backoff(self):
        units = self.rng.randint(0, 2 ** self.be - 1)
        self._timer = self.scheduler.schedule_in(
            units * self.config.backoff_unit, self._cca,
            target=self.node.node_id, kind="lrwpan-cca")

    def _cca(self):
        self._timer = None
        if self.channel.carrier_busy(self.node.node_id):
            self.nb += 1
            self.be = min(self.be + 1, self.config.max_be)
            if self.nb > self.config.max_csma_backoffs:
                frame, self.current = self.current, None
                self.node.on_mac_drop(frame, mt.CHANNEL_ACCESS_FAILURE)
                self._kick()
                return
            self._backoff()
            return
        # committed: transmit after the rx/tx turnaround without re-sensing
        self._timer = self.scheduler.schedule_in(
            self.config.turnaround, self._transmit,
            target=self.node.node_id, kind="lrwpan-tx")

    def _transmit(self):
        self._timer = None
        if self.node.node_id in self.channel.active:
            # our own ACK is on the air; re-run CSMA afterwards
            self._start_csma()
            return
        frame = self.current
        self.channel.begin_transmission(self.node, frame, self.frame_bytes(frame))

    def on_tx_complete(self, record):
        frame = record.frame
        if frame.kind == frames.ACK:
            return
        if frame is not self.current:
            return
        if frame.is_broadcast:
            self._finish()
            return
        ack_air = self.channel.airtime(self.config.ack_bytes)
        timeout = self.config.turnaround + ack_air + 2 * self.config.backoff_unit
        self._ack_timer = self.scheduler.schedule_in(
            timeout, self._ack_timeout, target=self.node.node_id,
            kind="lrwpan-ack-timeout")

    def _on_ack(self, ack):
        if (self.current is not None and self._ack_timer is not None
                and ack.body == (self.node.node_id, self.current.seq)):
            self.scheduler.cancel(self._ack_timer)
            self._ack_timer = None
            self._finish()

    def _ack_timeout(self):
        self._ack_timer = None
        self.frame_retry += 1
        if self.frame_retry > self.config.frame_retries:
            frame, self.current = self.current, None
            self.node.on_mac_drop(frame, mt.RETRY_EXCEEDED)
            self._kick()
            return
        self._start_csma()

    def _finish(self):
        self.current = None
        self._kick()

    def _send_ack(self, frame):
        ack = frames.Frame(kind=frames.ACK, source=self.node.node_id,
                           destination=frame.source, payload_size=0,
                           seq=self.next_seq(), body=(frame.source, frame.seq))
        self.scheduler.schedule_in(
            self.config.turnaround, lambda: self._do_send_ack(ack),
            target=self.node.node_id, kind="ack-tx")

    def _do_send_ack(self, ack):
        if self.node.node_id in self.channel.active or self.node.mode == SLEEP:
            return
        self.channel.begin_transmission(self.node, ack, self.frame_bytes(ack))
