"""Protocol-agnostic MAC plumbing: queues, frame sizing, receive dispatch."""

from collections import deque

from .. import frames
from .. import metrics as mt

MAC_NAMES = ("802.11", "802.15.4", "smac", "tdma")

IFQ_CAPACITY = 50


class TxQueue:
    """Drop-tail FIFO for data frames plus a priority lane for routing control."""

    def __init__(self, capacity=IFQ_CAPACITY):
        self.capacity = capacity
        self.data = deque()
        self.control = deque()

    def push(self, frame):
        """Returns False (tail drop) when the data queue is full."""
        if frame.kind == frames.ROUTING or frame.kind == frames.CONTROL:
            self.control.append(frame)
            return True
        if len(self.data) >= self.capacity:
            return False
        self.data.append(frame)
        return True

    def pop(self):
        if self.control:
            return self.control.popleft()
        if self.data:
            return self.data.popleft()
        return None

    def peek(self):
        if self.control:
            return self.control[0]
        if self.data:
            return self.data[0]
        return None

    def __len__(self):
        return len(self.control) + len(self.data)

    def purge(self, destination):
        """Remove and return all queued frames addressed to `destination`."""
        removed = [f for f in self.data if f.destination == destination]
        if removed:
            self.data = deque(f for f in self.data
                              if f.destination != destination)
        return removed


class MacBase:
    """Shared behavior for the four protocol implementations.

    Subclasses drive their own transmit state machine and must implement
    `_kick()` (service the queue when possible) plus the channel callbacks
    they care about.
    """

    name = "abstract"
    uses_acks = False

    def __init__(self, node, channel, scheduler, rng, config):
        self.node = node
        self.channel = channel
        self.scheduler = scheduler
        self.rng = rng
        self.config = config
        self.queue = TxQueue()
        self._seq = 0
        self._rx_seen = set()  # (source, seq) of delivered unicast frames

    # ---- sizing -------------------------------------------------------
    def frame_bytes(self, frame):
        if frame.kind == frames.ACK:
            return self.config.ack_bytes
        return self.config.overhead_bytes + frame.payload_size

    def frame_airtime(self, frame):
        return self.channel.airtime(self.frame_bytes(frame))

    def next_seq(self):
        self._seq += 1
        return self._seq

    # ---- enqueue ------------------------------------------------------
    def enqueue(self, frame):
        """Queue a frame for transmission; tail-drops data on overflow."""
        frame.seq = self.next_seq()
        if not self.queue.push(frame):
            self.node.on_mac_drop(frame, mt.IFQ_OVERFLOW)
            return False
        self._kick()
        return True

    def purge(self, destination):
        """Drop queued data frames toward a broken next hop; returns them."""
        return self.queue.purge(destination)

    # ---- receive path -------------------------------------------------
    def on_receive(self, frame, rx_power):
        if frame.kind == frames.ACK:
            self._on_ack(frame)
            return
        if not frame.is_broadcast and frame.destination != self.node.node_id:
            return  # promiscuous copy of someone else's unicast
        if self.uses_acks and not frame.is_broadcast:
            self._send_ack(frame)
            key = (frame.source, frame.seq)
            if key in self._rx_seen:
                return  # retransmitted duplicate
            self._rx_seen.add(key)
        self.node.on_frame_received(frame, rx_power)

    # hooks -------------------------------------------------------------
    def start(self):
        """Called once by the engine before the simulation runs."""

    def hold_awake(self, until):
        """Routing asks the radio to listen until `until` (no-op unless the
        protocol has a sleep policy it can override)."""

    def _kick(self):
        raise NotImplementedError

    def on_channel_busy(self):
        pass

    def on_channel_idle(self):
        pass

    def on_tx_complete(self, record):
        pass

    def _on_ack(self, frame):
        pass

    def _send_ack(self, frame):
        pass

    def wants_sleep(self):
        """Whether the radio should power down after the current activity."""
        return False

    def on_wake(self):
        pass

    # ---- terminal accounting for unacknowledged unicast frames --------
    def _settle_unacked(self, record):
        frame = record.frame
        if frame.is_broadcast:
            return
        if frame.destination in record.delivered_to:
            return
        if frame.destination in getattr(record, "collided_at", ()):
            self.node.on_mac_drop(frame, mt.COLLISION)
        else:
            self.node.on_mac_drop(frame, mt.MISSED_RECEIVER)


def build_mac(name, node, channel, scheduler, rng, configs):
    """Instantiate the MAC selected by name in the scenario."""
    from .csma import DcfMac
    from .lrwpan import LrwpanMac
    from .tdma import TdmaMac
    from .smac import SmacMac

    table = {
        "802.11": (DcfMac, configs.csma),
        "802.15.4": (LrwpanMac, configs.lrwpan),
        "tdma": (TdmaMac, configs.tdma),
        "smac": (SmacMac, configs.smac),
    }
    if name not in table:
        raise ValueError(
            f"unknown MAC {name!r}; valid options: {', '.join(MAC_NAMES)}")
    cls, cfg = table[name]
    return cls(node, channel, scheduler, rng, cfg)
