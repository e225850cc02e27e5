"""On-demand distance-vector routing (AODV-style, simplified).

Routes are discovered with flooded route requests (RREQ) and unicast route
replies (RREP), carry a hop count and a destination sequence number, and
expire after a fixed lifetime with no refresh on use.  Broken links detected
by the MAC raise route errors (RERR) that invalidate downstream state.

Stations apply a first-hop admission rule: a route request arriving directly
from a mobile node is only processed when the received power corresponds to
a distance of at most FIRST_HOP_RANGE.  This keeps a fast-moving origin from
anchoring its route on a station it is about to leave behind.
"""

from collections import deque
from dataclasses import dataclass

from . import frames
from . import metrics as mt
from .channel import rx_power_two_ray

ROUTE_LIFETIME = 10.0
MAX_HOPS = 16                # loop guard; lattice diameter is well below this
DISCOVERY_TRIES = 3
DISCOVERY_WAITS = (0.5, 1.0, 2.0)
REBROADCAST_JITTER = 10e-3
PENDING_CAPACITY = 50
FIRST_HOP_RANGE = 150.0

RREQ = "RREQ"
RREP = "RREP"
RERR = "RERR"


@dataclass
class RouteEntry:
    next_hop: int
    hop_count: int
    dest_seq: int
    expires: float


@dataclass
class PendingPacket:
    packet_id: int
    final_dest: int
    payload_size: int
    hops: int = 0


class AodvAgent:
    """Per-node routing state machine."""

    def __init__(self, node, scheduler, rng, mobile_ids=(),
                 discovery_waits=DISCOVERY_WAITS):
        self.node = node
        self.scheduler = scheduler
        self.rng = rng
        self.mobile_ids = frozenset(mobile_ids)
        # per-try reply waits; scaled up for high-latency MACs
        self.discovery_waits = tuple(discovery_waits)
        self.routes = {}             # dest -> RouteEntry
        self.known_seq = {}          # dest -> freshest seq heard, route or not
        self.pending = {}            # dest -> deque[PendingPacket]
        self.discovery = {}          # dest -> (tries, timer_event)
        self.seq = 0
        self.rreq_id = 0
        self.seen_rreq = {}          # (origin, rreq_id) -> best hop count seen
        self._gate_threshold = None  # lazily derived from channel params

    # ---- route table ---------------------------------------------------
    def route_lookup(self, dest):
        """Valid next hop toward dest, or None.  Expiry is a hard cutoff."""
        if dest == self.node.node_id:
            return self.node.node_id
        entry = self.routes.get(dest)
        if entry is None:
            return None
        if entry.expires <= self.scheduler.now:
            del self.routes[dest]
            return None
        return entry.next_hop

    def _install(self, dest, next_hop, hop_count, dest_seq):
        """Insert/replace a route if the offered one is fresher or shorter."""
        now = self.scheduler.now
        if dest_seq < self.known_seq.get(dest, 0):
            return False   # staler than a known invalidation
        self.known_seq[dest] = dest_seq
        entry = self.routes.get(dest)
        if entry is not None and entry.expires > now:
            if dest_seq < entry.dest_seq:
                return False
            if dest_seq == entry.dest_seq and hop_count >= entry.hop_count:
                return False
        self.routes[dest] = RouteEntry(next_hop, hop_count, dest_seq,
                                       now + ROUTE_LIFETIME)
        return True

    # ---- data plane ----------------------------------------------------
    def send_data(self, packet: PendingPacket):
        """Forward a data packet, buffering it behind discovery if needed."""
        next_hop = self.route_lookup(packet.final_dest)
        if next_hop is not None:
            self._dispatch(packet, next_hop)
            return
        queue = self.pending.setdefault(packet.final_dest, deque())
        if len(queue) >= PENDING_CAPACITY:
            self.node.on_network_drop(packet, mt.NO_ROUTE)
            return
        queue.append(packet)
        self._start_discovery(packet.final_dest)

    def _dispatch(self, packet, next_hop):
        frame = frames.Frame(
            kind=frames.DATA,
            source=self.node.node_id,
            destination=next_hop,
            payload_size=packet.payload_size,
            seq=0,
            body=(packet.packet_id, self.node.node_id, packet.final_dest),
            hops=packet.hops,
        )
        self.node.mac.enqueue(frame)

    def _drain(self, dest):
        queue = self.pending.pop(dest, None)
        if not queue:
            return
        while queue:
            packet = queue.popleft()
            next_hop = self.route_lookup(dest)
            if next_hop is None:
                # route vanished mid-drain; re-buffer the remainder
                queue.appendleft(packet)
                self.pending[dest] = queue
                self._start_discovery(dest)
                return
            self._dispatch(packet, next_hop)

    def _fail(self, dest):
        queue = self.pending.pop(dest, None)
        if not queue:
            return
        for packet in queue:
            self.node.on_network_drop(packet, mt.NO_ROUTE)

    # ---- discovery -----------------------------------------------------
    def _start_discovery(self, dest):
        if dest in self.discovery:
            return
        self._send_rreq(dest, tries=1)

    def _send_rreq(self, dest, tries):
        self.seq += 1
        self.rreq_id += 1
        body = (RREQ, self.rreq_id, self.node.node_id, self.seq,
                dest, self.known_seq.get(dest, 0), 0)
        self._broadcast_routing(body)
        wait = self.discovery_waits[tries - 1]
        # stay listening long enough to catch the reply
        self.node.mac.hold_awake(self.scheduler.now + wait)
        timer = self.scheduler.schedule_in(
            wait, lambda: self._discovery_timeout(dest),
            target=self.node.node_id, kind="rreq-timeout")
        self.discovery[dest] = (tries, timer)

    def _discovery_timeout(self, dest):
        tries, _ = self.discovery.pop(dest, (DISCOVERY_TRIES, None))
        if self.route_lookup(dest) is not None:
            self._drain(dest)
            return
        if tries >= DISCOVERY_TRIES:
            self._fail(dest)
            return
        self._send_rreq(dest, tries + 1)

    def _broadcast_routing(self, body, jitter=0.0):
        frame = frames.Frame(
            kind=frames.ROUTING,
            source=self.node.node_id,
            destination=frames.BROADCAST,
            payload_size=24,
            seq=0,
            body=body,
        )
        if jitter > 0.0:
            self.scheduler.schedule_in(
                jitter, lambda: self.node.mac.enqueue(frame),
                target=self.node.node_id, kind="rreq-relay")
        else:
            self.node.mac.enqueue(frame)

    def _unicast_routing(self, next_hop, body):
        frame = frames.Frame(
            kind=frames.ROUTING,
            source=self.node.node_id,
            destination=next_hop,
            payload_size=24,
            seq=0,
            body=body,
        )
        self.node.mac.enqueue(frame)

    # ---- control plane -------------------------------------------------
    def on_routing_frame(self, frame, rx_power):
        kind = frame.body[0]
        if kind == RREQ:
            self._handle_rreq(frame, rx_power)
        elif kind == RREP:
            self._handle_rrep(frame)
        elif kind == RERR:
            self._handle_rerr(frame)

    def _gate(self):
        if self._gate_threshold is None:
            self._gate_threshold = rx_power_two_ray(
                self.node.channel.params, FIRST_HOP_RANGE)
        return self._gate_threshold

    def _handle_rreq(self, frame, rx_power):
        (_, rreq_id, origin, origin_seq, dest, dest_seq, hops) = frame.body
        me = self.node.node_id
        if origin == me:
            return
        if (hops == 0 and origin in self.mobile_ids
                and me not in self.mobile_ids and rx_power < self._gate()):
            return  # origin too far out for a durable first hop
        key = (origin, rreq_id)
        best = self.seen_rreq.get(key)
        if best is not None and hops + 1 >= best:
            return
        first_time = best is None
        self.seen_rreq[key] = hops + 1
        # reverse route toward the origin through the frame's sender
        self._install(origin, frame.source, hops + 1, origin_seq)
        if dest == me:
            # reply even for shorter duplicates so the origin learns the
            # minimum-hop path
            self.seq = max(self.seq + 1, dest_seq)
            body = (RREP, dest, self.seq, origin, 0)
            self._unicast_routing(frame.source, body)
            return
        entry = self.routes.get(dest)
        if (entry is not None and entry.expires > self.scheduler.now
                and entry.dest_seq >= dest_seq):
            body = (RREP, dest, entry.dest_seq, origin, entry.hop_count)
            self._unicast_routing(frame.source, body)
            return
        if not first_time:
            return  # already rebroadcast this request
        body = (RREQ, rreq_id, origin, origin_seq, dest, dest_seq, hops + 1)
        self._broadcast_routing(
            body, jitter=self.rng.uniform(0.0, REBROADCAST_JITTER))

    def _handle_rrep(self, frame):
        (_, dest, dest_seq, origin, hops) = frame.body
        me = self.node.node_id
        installed = self._install(dest, frame.source, hops + 1, dest_seq)
        if origin == me:
            # drain even on a rejected install: any valid route will do
            if self.route_lookup(dest) is not None:
                pending = self.discovery.pop(dest, None)
                if pending is not None:
                    self.scheduler.cancel(pending[1])
                self._drain(dest)
            return
        if not installed:
            return
        back = self.route_lookup(origin)
        if back is not None:
            body = (RREP, dest, dest_seq, origin, hops + 1)
            self._unicast_routing(back, body)

    def _handle_rerr(self, frame):
        (_, unreachable) = frame.body
        broken = []
        for dest, bad_seq in unreachable:
            entry = self.routes.get(dest)
            if (entry is not None and entry.next_hop == frame.source
                    and entry.dest_seq < bad_seq):
                del self.routes[dest]
                self.known_seq[dest] = max(self.known_seq.get(dest, 0),
                                           bad_seq)
                broken.append((dest, bad_seq))
        if broken:
            self._broadcast_routing((RERR, tuple(broken)))

    # ---- link failures from the MAC -------------------------------------
    def on_link_break(self, next_hop):
        """A unicast toward next_hop exhausted its retries.

        Broken destinations are invalidated with an incremented sequence
        number (carried in the RERR and requested by the next RREQ) so a
        neighbor's stale route through this node cannot answer and form a
        two-hop loop.
        """
        broken = []
        for dest, entry in list(self.routes.items()):
            if entry.next_hop != next_hop:
                continue
            del self.routes[dest]
            bad_seq = entry.dest_seq + 1
            self.known_seq[dest] = max(self.known_seq.get(dest, 0), bad_seq)
            broken.append((dest, bad_seq))
        stranded = self.node.mac.purge(next_hop)
        if broken:
            self._broadcast_routing((RERR, tuple(broken)))
        for frame in stranded:
            if frame.kind != frames.DATA:
                continue
            packet_id, _, final_dest = frame.body
            self.send_data(PendingPacket(packet_id, final_dest,
                                         frame.payload_size, frame.hops))
