"""Half-duplex shared radio: two-ray ground path loss, carrier sense, collisions.

A frame is delivered iff its receive power clears the receive threshold and
no other transmission at or above the carrier-sense threshold overlaps any
part of its airtime at the receiver (no capture effect). Nodes in SLEEP or
TX mode receive nothing.
"""

import math
from dataclasses import dataclass

from .core import SimulationError

SPEED_OF_LIGHT = 3e8

TX = "TX"
RX = "RX"
IDLE = "IDLE"
SLEEP = "SLEEP"


@dataclass(frozen=True)
class ChannelParams:
    tx_power: float = 2.0          # watts
    gain_tx: float = 1.0
    gain_rx: float = 1.0
    height_tx: float = 1.5         # meters
    height_rx: float = 1.5
    system_loss: float = 1.0
    frequency: float = 914e6       # hertz
    bitrate: float = 2e6           # bits/second, shared by all MACs
    rx_range: float = 250.0        # meters; thresholds derived from ranges
    cs_range: float = 550.0

    def __post_init__(self):
        for name in ("tx_power", "gain_tx", "gain_rx", "height_tx", "height_rx",
                     "system_loss", "frequency", "bitrate", "rx_range", "cs_range"):
            if getattr(self, name) <= 0:
                raise ValueError(f"channel parameter {name} must be positive")
        if self.cs_range < self.rx_range:
            raise ValueError("carrier-sense range must be >= receive range")

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.frequency

    @property
    def crossover_distance(self):
        return 4 * math.pi * self.height_tx * self.height_rx / self.wavelength

    @property
    def rx_threshold(self):
        return rx_power_two_ray(self, self.rx_range)

    @property
    def cs_threshold(self):
        return rx_power_two_ray(self, self.cs_range)


def rx_power_two_ray(params, d):
    """Received power in watts at distance d under the two-ray ground model.

    Friis inside the crossover distance dc = 4*pi*ht*hr/lambda, d^-4 ground
    reflection beyond it; the two branches agree at dc by construction.
    """
    if d <= 0:
        raise ValueError("two-ray model undefined at zero distance")
    p = params
    if d < p.crossover_distance:
        lam = p.wavelength
        return (p.tx_power * p.gain_tx * p.gain_rx * lam * lam
                / ((4 * math.pi * d) ** 2 * p.system_loss))
    return (p.tx_power * p.gain_tx * p.gain_rx
            * p.height_tx ** 2 * p.height_rx ** 2
            / (d ** 4 * p.system_loss))


class TransmissionRecord:
    __slots__ = ("sender", "frame", "start", "end", "reached",
                 "delivered_to", "collided_at")

    def __init__(self, sender, frame, start, end, reached):
        self.sender = sender
        self.frame = frame
        self.start = start
        self.end = end
        self.reached = reached          # node ids sensing this transmission
        self.delivered_to = []
        self.collided_at = set()        # would-be receivers lost to overlap

    def __repr__(self):
        return (f"Tx(sender={self.sender}, {self.frame.kind}->"
                f"{self.frame.destination}, {self.start:.6f}..{self.end:.6f})")


class _RxState:
    __slots__ = ("record", "corrupted", "epoch", "power")

    def __init__(self, record, epoch, power):
        self.record = record
        self.corrupted = False
        self.epoch = epoch
        self.power = power


class Channel:
    """Shared medium connecting all node radios.

    Nodes must expose: `position` (x, y), `mode` (TX/RX/IDLE/SLEEP),
    `listen_epoch` (bumped on every interruption of listening),
    `mac.on_channel_busy/on_channel_idle/on_receive/on_tx_complete`.
    """

    def __init__(self, scheduler, params, metrics=None, trace=None):
        self.scheduler = scheduler
        self.params = params
        self.metrics = metrics
        self.trace = trace
        self.nodes = {}                 # id -> node, insertion-ordered
        self.busy_count = {}            # id -> active in-sense-range transmissions
        self.rx_state = {}              # id -> _RxState or None
        self.active = {}                # sender id -> TransmissionRecord
        self.collisions = 0             # corrupted would-be receptions

    def register(self, node):
        self.nodes[node.node_id] = node
        self.busy_count[node.node_id] = 0
        self.rx_state[node.node_id] = None

    def airtime(self, total_bytes):
        return total_bytes * 8.0 / self.params.bitrate

    def power_between(self, a, b):
        d = math.hypot(a.position[0] - b.position[0], a.position[1] - b.position[1])
        if d <= 0:
            d = 1e-3
        return rx_power_two_ray(self.params, d)

    def carrier_busy(self, node_id):
        """True iff some active transmission reaches the node at >= cs threshold."""
        node = self.nodes[node_id]
        if node.mode == SLEEP:
            raise SimulationError(f"node {node_id} sensed the carrier while asleep")
        return self.busy_count[node_id] > 0

    def begin_transmission(self, sender, frame, total_bytes):
        """Start a frame on the air; schedules the completion event.

        `total_bytes` includes MAC/PHY overhead as decided by the MAC.
        """
        if sender.node_id in self.active:
            raise SimulationError(f"node {sender.node_id} already transmitting")
        now = self.scheduler.now
        end = now + self.airtime(total_bytes)
        cs_thresh = self.params.cs_threshold
        rx_thresh = self.params.rx_threshold
        reached = []
        sender.set_mode(TX)
        # transmitting interrupts any reception in progress at the sender
        self.rx_state[sender.node_id] = None
        record = TransmissionRecord(sender.node_id, frame, now, end, reached)
        self.active[sender.node_id] = record
        for nid, node in self.nodes.items():
            if nid == sender.node_id:
                continue
            power = self.power_between(sender, node)
            if power < cs_thresh:
                continue
            reached.append(nid)
            self.busy_count[nid] += 1
            st = self.rx_state[nid]
            if st is not None:
                if not st.corrupted:
                    self.collisions += 1
                    st.record.collided_at.add(nid)
                st.corrupted = True
                if power >= rx_thresh:
                    record.collided_at.add(nid)
            if node.mode in (IDLE, RX):
                if power >= rx_thresh:
                    if self.busy_count[nid] == 1 and st is None:
                        self.rx_state[nid] = _RxState(record, node.listen_epoch,
                                                      power)
                    elif st is None:
                        # in range and listening, but medium already busy
                        record.collided_at.add(nid)
                if node.mode == IDLE:
                    node.set_mode(RX)
                if self.busy_count[nid] == 1:
                    node.mac.on_channel_busy()
        self.scheduler.schedule(end, lambda: self._end_transmission(record),
                                target=sender.node_id, kind="tx-end")
        if self.trace:
            self.trace(now, sender.node_id, "PHY", "tx-start",
                       f"{frame.kind} seq={frame.seq} dst={frame.destination}")
        return record

    def _end_transmission(self, record):
        sender = self.nodes[record.sender]
        del self.active[record.sender]
        delivered = []
        powers = {}
        for nid in record.reached:
            node = self.nodes[nid]
            self.busy_count[nid] -= 1
            st = self.rx_state[nid]
            if st is not None and st.record is record:
                self.rx_state[nid] = None
                if st.corrupted:
                    record.collided_at.add(nid)
                elif node.mode == RX and node.listen_epoch == st.epoch:
                    delivered.append(nid)
                    powers[nid] = st.power
            if node.mode == RX and self.busy_count[nid] == 0:
                node.set_mode(IDLE)
        record.delivered_to = delivered
        if sender.wants_sleep():
            sender.set_mode(SLEEP)
        elif self.busy_count[record.sender] > 0:
            sender.set_mode(RX)
        else:
            sender.set_mode(IDLE)
        if self.trace:
            self.trace(record.end, record.sender, "PHY", "tx-end",
                       f"{record.frame.kind} seq={record.frame.seq} "
                       f"delivered={delivered}")
        # deliveries first, then idle notifications, then the sender callback
        for nid in delivered:
            self.nodes[nid].mac.on_receive(record.frame, powers[nid])
        for nid in record.reached:
            node = self.nodes[nid]
            if node.mode in (IDLE, RX) and self.busy_count[nid] == 0:
                node.mac.on_channel_idle()
        sender.mac.on_tx_complete(record)

    def drop_listen_state(self, node_id):
        """Forget any reception in progress (node slept or started transmitting)."""
        self.rx_state[node_id] = None
